"""Graded coordinate alphabets for the BFV phase spaces.

A :class:`GeneratorTable` fixes the alphabet of graded generators together
with their degrees, ghost/antighost numbers, conjugate pairings and the
orientation of the fundamental bracket pairings.  Two presets are provided:

``BFV1``
    Coordinates on T*[1]M x T*[1]g~*[-1] for a graded Lie algebra
    g~ = h[1] (+) g.  The bracket carries degree -1.  Generators and their
    (degree, ghost, antighost):

    =========  ======  ======  ======  =========
    token      kind    degree  ghost   antighost
    =========  ======  ======  ======  =========
    ``x{i}``   base       0      0        0
    ``e{i}``   fiber      1      0        0
    ``c{i}``   ghost-g    1      1        0
    ``C{j}``   ghost-h    2      1        0
    ``b{k}``   anti-g     0      0        1
    ``B{p}``   anti-h    -1      0        1
    =========  ======  ======  ======  =========

``BFV0``
    Coordinates on M x g*[-1]-type super phase space with a degree-0
    bracket: base variables of degree 0 (optionally paired among
    themselves, e.g. Darboux pairs on a cotangent space), ghosts ``c{i}``
    of degree 1 and antighosts ``b{k}`` of degree -1.

Pairing orientation.  The bracket is the biderivation generated by the
constant pairings stored in :attr:`GeneratorTable.pairing`.  For BFV1 the
positive orientations are::

    {e_i, x_i} = 1,   {c_i, b_i} = 1,   {C_j, B_j} = 1,

i.e. the ghost-momentum generator comes first.  The reversed entries are
fixed by the graded antisymmetry of a degree -1 bracket.  For BFV0 the
positive orientations are ``{q, p} = 1`` on declared base pairs and
``{c_i, b_i} = {b_i, c_i} = 1`` (the odd-odd pairing of a degree-0
bracket is symmetric).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import UnknownGenerator


class Kind(enum.Enum):
    BASE = "base"
    FIBER = "fiber"
    GHOST_G = "ghost_g"
    GHOST_H = "ghost_h"
    ANTIGHOST_G = "antighost_g"
    ANTIGHOST_H = "antighost_h"


_TOKEN_PREFIX = {
    Kind.BASE: "x",
    Kind.FIBER: "e",
    Kind.GHOST_G: "c",
    Kind.GHOST_H: "C",
    Kind.ANTIGHOST_G: "b",
    Kind.ANTIGHOST_H: "B",
}

# The Lagrangian submanifold N_{1,-1} keeps base coordinates, g-ghosts and
# h-antighosts; its function algebra is C(M) (x) Lambda g* (x) Lambda h.
LAGRANGIAN_KINDS = frozenset({Kind.BASE, Kind.GHOST_G, Kind.ANTIGHOST_H})


@dataclass(frozen=True)
class Generator:
    gid: int
    name: str
    kind: Kind
    degree: int
    ghost: int
    antighost: int
    conjugate: int | None = None

    @property
    def parity(self) -> int:
        return self.degree % 2


class GeneratorTable:
    """Immutable alphabet of graded generators plus bracket pairing data."""

    def __init__(self, preset: str, entries: list[Generator], pairing: dict):
        if preset not in ("BFV0", "BFV1"):
            raise ValueError(f"unknown preset {preset!r}")
        self.preset = preset
        # Degree shift of the bracket: |{F,G}| = |F| + |G| - shift.
        self.shift = 1 if preset == "BFV1" else 0
        self.entries = tuple(entries)
        self._by_id = {g.gid: g for g in self.entries}
        self._by_name = {g.name: g for g in self.entries}
        if len(self._by_id) != len(self.entries):
            raise ValueError("duplicate generator ids")
        # pairing[(a, b)] = value of {z_a, z_b} for conjugate generators.
        self.pairing = dict(pairing)
        for g in self.entries:
            if g.parity != g.degree % 2:
                raise ValueError(f"parity mismatch for {g.name}")
            if g.conjugate is not None:
                h = self._by_id[g.conjugate]
                if h.conjugate != g.gid:
                    raise ValueError(f"conjugation is not involutive at {g.name}")
                if g.degree + h.degree != self.shift:
                    raise ValueError(
                        f"conjugate degrees of ({g.name}, {h.name}) must sum "
                        f"to {self.shift} in preset {preset}"
                    )

    def __eq__(self, other):
        return (
            isinstance(other, GeneratorTable)
            and self.preset == other.preset
            and self.entries == other.entries
            and self.pairing == other.pairing
        )

    def __hash__(self):
        return hash((self.preset, self.entries))

    def gen(self, gid: int) -> Generator:
        try:
            return self._by_id[gid]
        except KeyError:
            raise UnknownGenerator(f"no generator with id {gid}") from None

    def by_name(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownGenerator(f"no generator named {name!r}") from None

    def has_name(self, name: str) -> bool:
        return name in self._by_name

    def ids_of_kind(self, kind: Kind) -> tuple:
        return tuple(g.gid for g in self.entries if g.kind == kind)

    def is_odd(self, gid: int) -> bool:
        return self.gen(gid).parity == 1


def _antisym_factor(deg_a: int, deg_b: int, shift: int) -> int:
    # {b, a} = -(-1)^((|a|-s)(|b|-s)) {a, b}
    return -((-1) ** (((deg_a - shift) * (deg_b - shift)) % 2))


def _pair(pairing, a: Generator, b: Generator, shift: int):
    """Record {a, b} = +1 and the antisymmetry-forced reverse entry."""
    pairing[(a.gid, b.gid)] = 1
    rev = _antisym_factor(a.degree, b.degree, shift)
    pairing[(b.gid, a.gid)] = rev


def bfv1_table(n_base: int, dim_g: int, dim_h: int) -> GeneratorTable:
    """Alphabet for the degree-one phase space with the degree -1 bracket."""
    entries = []
    gid = 0
    ids = {}
    for kind, count, degree, ghost, antighost in (
        (Kind.BASE, n_base, 0, 0, 0),
        (Kind.FIBER, n_base, 1, 0, 0),
        (Kind.GHOST_G, dim_g, 1, 1, 0),
        (Kind.GHOST_H, dim_h, 2, 1, 0),
        (Kind.ANTIGHOST_G, dim_g, 0, 0, 1),
        (Kind.ANTIGHOST_H, dim_h, -1, 0, 1),
    ):
        for i in range(count):
            gid += 1
            name = f"{_TOKEN_PREFIX[kind]}{i + 1}"
            ids[(kind, i)] = gid
            entries.append(Generator(gid, name, kind, degree, ghost, antighost))

    def link(kind_a, kind_b, count):
        for i in range(count):
            a, b = ids[(kind_a, i)], ids[(kind_b, i)]
            entries[a - 1] = Generator(
                a, entries[a - 1].name, kind_a,
                entries[a - 1].degree, entries[a - 1].ghost,
                entries[a - 1].antighost, conjugate=b,
            )
            entries[b - 1] = Generator(
                b, entries[b - 1].name, kind_b,
                entries[b - 1].degree, entries[b - 1].ghost,
                entries[b - 1].antighost, conjugate=a,
            )

    link(Kind.FIBER, Kind.BASE, n_base)
    link(Kind.GHOST_G, Kind.ANTIGHOST_G, dim_g)
    link(Kind.GHOST_H, Kind.ANTIGHOST_H, dim_h)

    pairing = {}
    for i in range(n_base):
        _pair(pairing, entries[ids[(Kind.FIBER, i)] - 1],
              entries[ids[(Kind.BASE, i)] - 1], 1)
    for i in range(dim_g):
        _pair(pairing, entries[ids[(Kind.GHOST_G, i)] - 1],
              entries[ids[(Kind.ANTIGHOST_G, i)] - 1], 1)
    for j in range(dim_h):
        _pair(pairing, entries[ids[(Kind.GHOST_H, j)] - 1],
              entries[ids[(Kind.ANTIGHOST_H, j)] - 1], 1)
    return GeneratorTable("BFV1", entries, pairing)


def bfv0_table(n_base: int, dim_g: int, base_pairs=()) -> GeneratorTable:
    """Alphabet for the degree-zero super phase space.

    ``base_pairs`` lists 1-based index pairs (i, j) of base coordinates with
    canonical bracket {x_i, x_j} = 1 (e.g. Darboux pairs (q_a, p_a) on a
    cotangent space).  Base coordinates may appear in at most one pair.
    """
    entries = []
    ids = {}
    gid = 0
    for kind, count, degree in (
        (Kind.BASE, n_base, 0),
        (Kind.GHOST_G, dim_g, 1),
        (Kind.ANTIGHOST_G, dim_g, -1),
    ):
        for i in range(count):
            gid += 1
            ghost = 1 if kind == Kind.GHOST_G else 0
            antighost = 1 if kind == Kind.ANTIGHOST_G else 0
            ids[(kind, i)] = gid
            entries.append(Generator(gid, f"{_TOKEN_PREFIX[kind]}{i + 1}",
                                     kind, degree, ghost, antighost))

    seen = set()
    for (i, j) in base_pairs:
        if i in seen or j in seen or i == j:
            raise ValueError("base coordinates may appear in at most one pair")
        seen.update((i, j))
        a, b = ids[(Kind.BASE, i - 1)], ids[(Kind.BASE, j - 1)]
        entries[a - 1] = Generator(a, entries[a - 1].name, Kind.BASE, 0, 0, 0, conjugate=b)
        entries[b - 1] = Generator(b, entries[b - 1].name, Kind.BASE, 0, 0, 0, conjugate=a)

    for i in range(dim_g):
        a, b = ids[(Kind.GHOST_G, i)], ids[(Kind.ANTIGHOST_G, i)]
        entries[a - 1] = Generator(a, entries[a - 1].name, Kind.GHOST_G, 1, 1, 0, conjugate=b)
        entries[b - 1] = Generator(b, entries[b - 1].name, Kind.ANTIGHOST_G, -1, 0, 1, conjugate=a)

    pairing = {}
    for (i, j) in base_pairs:
        _pair(pairing, entries[ids[(Kind.BASE, i - 1)] - 1],
              entries[ids[(Kind.BASE, j - 1)] - 1], 0)
    for i in range(dim_g):
        _pair(pairing, entries[ids[(Kind.GHOST_G, i)] - 1],
              entries[ids[(Kind.ANTIGHOST_G, i)] - 1], 0)
    return GeneratorTable("BFV0", entries, pairing)
