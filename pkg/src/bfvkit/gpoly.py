"""Canonical-form polynomials in graded generators over exact rationals.

A monomial is the pair ``(evens, odds)`` where ``evens`` is a sorted tuple
of ``(gid, exponent)`` pairs for even generators and ``odds`` is a strictly
increasing tuple of odd generator ids.  The empty monomial ``((), ())`` is
the constant 1.  A :class:`GPoly` maps monomials to nonzero
:class:`fractions.Fraction` coefficients; equal polynomials have identical
term dictionaries, so equality of canonical forms is dictionary equality.

The degree -1 (BFV1) or degree 0 (BFV0) Poisson bracket is the biderivation
generated by the pairing table of the :class:`~bfvkit.generators.GeneratorTable`:

    {F, G} = sum over paired (a, b) of  P(a, b) * dF/dz_a|_R * dG/dz_b|_L

with right derivatives on the first slot and left derivatives on the
second.  With the stored pairing orientations this satisfies, exactly and
with shift s = table.shift,

    {F, G} = -(-1)^((|F|-s)(|G|-s)) {G, F}
    {F, GH} = {F, G} H + (-1)^((|F|-s)|G|) G {F, H}
    {F, {G, H}} = {{F, G}, H} + (-1)^((|F|-s)(|G|-s)) {G, {F, H}}

Convention note: the axioms together with {e_a, x_b} = delta_ab force
{e1 e2, x1} = -e2 (expand {x1, e1 e2} by the Leibniz rule and flip); the
frequently seen left-derivative coordinate formula that yields +e2 is not
compatible with the Leibniz rule above and is not used here.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import TableMismatch, UnknownGenerator
from .generators import GeneratorTable, Kind

Monomial = tuple  # ((gid, exp), ...), (gid, ...)

ONE_MONO: Monomial = ((), ())


def _merge_odds(s: tuple, t: tuple):
    """Merge two sorted odd-id tuples; return (merged, sign) or (None, 0)."""
    if not s:
        return t, 1
    if not t:
        return s, 1
    merged = []
    sign = 1
    i = j = 0
    while i < len(s) and j < len(t):
        if s[i] == t[j]:
            return None, 0  # odd square
        if s[i] < t[j]:
            merged.append(s[i])
            i += 1
        else:
            # t[j] jumps over the len(s)-i remaining elements of s
            if (len(s) - i) % 2:
                sign = -sign
            merged.append(t[j])
            j += 1
    merged.extend(s[i:])
    merged.extend(t[j:])
    return tuple(merged), sign


def _mono_mul(m1: Monomial, m2: Monomial):
    odds, sign = _merge_odds(m1[1], m2[1])
    if sign == 0:
        return None, 0
    ev = dict(m1[0])
    for gid, e in m2[0]:
        ev[gid] = ev.get(gid, 0) + e
    return (tuple(sorted(ev.items())), odds), sign


class GPoly:
    """Canonical polynomial in the generators of a fixed table.

    Values are treated as immutable after construction; derivative results
    are cached per instance, which makes repeated brackets against a fixed
    polynomial (a charge, a bivector) cheap.
    """

    __slots__ = ("table", "terms", "_dcache", "__weakref__")

    def __init__(self, table: GeneratorTable, terms: dict | None = None):
        self.table = table
        self.terms = terms or {}
        self._dcache = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, table) -> "GPoly":
        return cls(table, {})

    @classmethod
    def const(cls, table, value) -> "GPoly":
        value = Fraction(value)
        return cls(table, {ONE_MONO: value} if value else {})

    @classmethod
    def gen(cls, table, gid: int) -> "GPoly":
        g = table.gen(gid)
        if g.parity:
            return cls(table, {((), (gid,)): Fraction(1)})
        return cls(table, {(((gid, 1),), ()): Fraction(1)})

    @classmethod
    def var(cls, table, name: str) -> "GPoly":
        return cls.gen(table, table.by_name(name).gid)

    # -- ring structure -----------------------------------------------

    def _check(self, other: "GPoly"):
        if self.table != other.table:
            raise TableMismatch("operands use different generator tables")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, GPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table, tuple(sorted(self.terms.items()))))

    def __neg__(self):
        return GPoly(self.table, {m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GPoly.const(self.table, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GPoly(self.table, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GPoly.const(self.table, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return GPoly.zero(self.table)
            return GPoly(self.table, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m, sign = _mono_mul(m1, m2)
                if sign == 0:
                    continue
                v = out.get(m, 0) + sign * c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return GPoly(self.table, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    # -- grading ------------------------------------------------------

    def mono_degree(self, m: Monomial) -> int:
        t = self.table
        deg = sum(t.gen(g).degree * e for g, e in m[0])
        deg += sum(t.gen(g).degree for g in m[1])
        return deg

    def mono_ghost(self, m: Monomial):
        t = self.table
        gh = ag = 0
        for g, e in m[0]:
            gen = t.gen(g)
            gh += gen.ghost * e
            ag += gen.antighost * e
        for g in m[1]:
            gen = t.gen(g)
            gh += gen.ghost
            ag += gen.antighost
        return gh, ag

    def mono_base_degree(self, m: Monomial) -> int:
        t = self.table
        return sum(e for g, e in m[0] if t.gen(g).kind == Kind.BASE)

    def degree_support(self):
        return sorted({self.mono_degree(m) for m in self.terms})

    def ghost_support(self):
        return sorted({self.mono_ghost(m) for m in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degree_support()) <= 1

    def degree(self):
        """Function degree of a homogeneous polynomial (None for 0)."""
        sup = self.degree_support()
        if not sup:
            return None
        if len(sup) > 1:
            raise ValueError("polynomial is not homogeneous")
        return sup[0]

    def parity(self) -> int:
        deg = self.degree()
        return 0 if deg is None else deg % 2

    def grade_components(self) -> dict:
        """Split into parts indexed by (total ghost number, function degree)."""
        out = {}
        for m, c in self.terms.items():
            gh, ag = self.mono_ghost(m)
            key = (gh - ag, self.mono_degree(m))
            out.setdefault(key, {})[m] = c
        return {k: GPoly(self.table, v) for k, v in out.items()}

    def bidegree_components(self) -> dict:
        """Split into parts indexed by (ghost number, antighost number)."""
        out = {}
        for m, c in self.terms.items():
            out.setdefault(self.mono_ghost(m), {})[m] = c
        return {k: GPoly(self.table, v) for k, v in out.items()}

    def base_truncate(self, order: int) -> "GPoly":
        """Drop terms of base-coordinate polynomial degree > order."""
        return GPoly(self.table, {m: c for m, c in self.terms.items()
                                  if self.mono_base_degree(m) <= order})

    def base_component(self, degree: int) -> "GPoly":
        return GPoly(self.table, {m: c for m, c in self.terms.items()
                                  if self.mono_base_degree(m) == degree})

    def max_base_degree(self) -> int:
        return max((self.mono_base_degree(m) for m in self.terms), default=0)

    def kinds_used(self):
        t = self.table
        kinds = set()
        for m in self.terms:
            for g, _ in m[0]:
                kinds.add(t.gen(g).kind)
            for g in m[1]:
                kinds.add(t.gen(g).kind)
        return kinds

    # -- calculus -----------------------------------------------------

    def deriv(self, gid: int, side: str = "left") -> "GPoly":
        """Left or right derivative with respect to one generator (cached)."""
        if self._dcache is None:
            self._dcache = {}
        cached = self._dcache.get((gid, side))
        if cached is not None:
            return cached
        result = self._deriv(gid, side)
        self._dcache[(gid, side)] = result
        return result

    def _deriv(self, gid: int, side: str) -> "GPoly":
        t = self.table
        out = {}
        if not t.is_odd(gid):
            for m, c in self.terms.items():
                ev = dict(m[0])
                e = ev.get(gid)
                if not e:
                    continue
                if e == 1:
                    del ev[gid]
                else:
                    ev[gid] = e - 1
                mono = (tuple(sorted(ev.items())), m[1])
                v = out.get(mono, 0) + c * e
                if v:
                    out[mono] = v
                else:
                    del out[mono]
            return GPoly(t, out)
        for m, c in self.terms.items():
            odds = m[1]
            try:
                pos = odds.index(gid)
            except ValueError:
                continue
            crossed = pos if side == "left" else len(odds) - 1 - pos
            sign = -1 if crossed % 2 else 1
            mono = (m[0], odds[:pos] + odds[pos + 1:])
            v = out.get(mono, 0) + sign * c
            if v:
                out[mono] = v
            else:
                del out[mono]
        return GPoly(t, out)

    def eval_base(self, point: dict) -> "GPoly":
        """Substitute rational values for base generators (gid -> value)."""
        t = self.table
        acc = {}
        for m, c in self.terms.items():
            ev = []
            for g, e in m[0]:
                if g in point:
                    c = c * Fraction(point[g]) ** e
                    if not c:
                        break
                else:
                    ev.append((g, e))
            if not c:
                continue
            mono = (tuple(ev), m[1])
            v = acc.get(mono, 0) + c
            if v:
                acc[mono] = v
            else:
                del acc[mono]
        return GPoly(t, acc)

    def const_value(self) -> Fraction:
        """Value of a generator-free polynomial."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {ONE_MONO}:
            raise ValueError("polynomial is not constant")
        return self.terms[ONE_MONO]

    def __str__(self):
        from .grammar import serialize

        return serialize(self)

    __repr__ = __str__


def normalize(table: GeneratorTable, raw) -> GPoly:
    """Build a canonical GPoly from (coefficient, factor-id list) pairs.

    Reordering odd factors contributes the sign of the permutation that
    sorts them; a repeated odd factor kills the term.
    """
    acc = {}
    for coeff, factors in raw:
        coeff = Fraction(coeff)
        if not coeff:
            continue
        evens = {}
        odds = []
        for gid in factors:
            g = table.gen(gid)  # raises UnknownGenerator
            if g.parity:
                odds.append(gid)
            else:
                evens[gid] = evens.get(gid, 0) + 1
        # permutation sign from sorting the odd subsequence
        sign = 1
        seen = set()
        dup = False
        for i, a in enumerate(odds):
            if a in seen:
                dup = True
                break
            seen.add(a)
            for b in odds[:i]:
                if b > a:
                    sign = -sign
        if dup:
            continue
        mono = (tuple(sorted(evens.items())), tuple(sorted(odds)))
        v = acc.get(mono, 0) + sign * coeff
        if v:
            acc[mono] = v
        else:
            del acc[mono]
    return GPoly(table, acc)


def bracket(F: GPoly, G: GPoly) -> GPoly:
    """Graded Poisson bracket generated by the table's pairing."""
    if F.table != G.table:
        raise TableMismatch("bracket operands use different generator tables")
    table = F.table
    out = GPoly.zero(table)
    for (a, b), p in table.pairing.items():
        dF = F.deriv(a, side="right")
        if not dF:
            continue
        dG = G.deriv(b, side="left")
        if not dG:
            continue
        out = out + (dF * dG) * p
    return out


def mul(F: GPoly, G: GPoly) -> GPoly:
    return F * G
