"""Enumeration of graded monomials under degree and ghost constraints.

Used to pose bounded linear ansatz spaces: cofactors for ideal-membership
solves, Koszul preimages, cocycle-lift corrections and cohomology-probe
bases.  Base generators (degree 0, no ghost numbers) are enumerated by
total polynomial degree up to a cap; all other generators are constrained
by the requested function degree and (ghost, antighost) bidegree, which
keeps the search finite.
"""

from __future__ import annotations

import itertools

from .generators import GeneratorTable, Kind
from .gpoly import Monomial


def base_exponent_vectors(n_vars: int, max_total: int):
    """All exponent tuples of length n_vars with sum <= max_total."""
    if n_vars == 0:
        yield ()
        return
    for total in range(max_total + 1):
        for cuts in itertools.combinations(range(total + n_vars - 1), n_vars - 1):
            prev = -1
            vec = []
            for c in cuts:
                vec.append(c - prev - 1)
                prev = c
            vec.append(total + n_vars - 2 - prev)
            yield tuple(vec)


def enumerate_monomials(table: GeneratorTable, fdeg: int, ghost: int,
                        antighost: int, max_base_degree: int,
                        kinds=None) -> list:
    """Monomials with the given function degree and exact (ghost, antighost)
    bidegree, base-polynomial degree <= max_base_degree, over the allowed
    generator kinds (all kinds when None)."""
    gens = [g for g in table.entries
            if (kinds is None or g.kind in kinds)]
    base = [g for g in gens if g.kind == Kind.BASE]
    rest = [g for g in gens if g.kind != Kind.BASE]

    # Bounds for pruning: how much function degree the tail can still add.
    neg = [0] * (len(rest) + 1)
    pos = [0] * (len(rest) + 1)
    for idx in range(len(rest) - 1, -1, -1):
        g = rest[idx]
        cap = 1 if g.parity else max(ghost, antighost, 0)
        lo = min(0, g.degree * cap)
        hi = max(0, g.degree * cap)
        neg[idx] = neg[idx + 1] + lo
        pos[idx] = pos[idx + 1] + hi

    results = []
    chosen = []

    def rec(idx, deg, gh, ag):
        if gh > ghost or ag > antighost:
            return
        if idx == len(rest):
            if gh == ghost and ag == antighost and deg == fdeg:
                results.append(list(chosen))
            return
        if deg + neg[idx] > fdeg or deg + pos[idx] < fdeg:
            return
        g = rest[idx]
        cap = 1 if g.parity else max(ghost - gh, antighost - ag, 0)
        if g.ghost == 0 and g.antighost == 0 and g.parity == 0:
            cap = 0  # no even ghost-free non-base generators in our presets
        for e in range(cap + 1):
            if e:
                chosen.append((g, e))
            rec(idx + 1, deg + g.degree * e, gh + g.ghost * e, ag + g.antighost * e)
            if e:
                chosen.pop()

    rec(0, 0, 0, 0)

    monomials = []
    base_ids = [g.gid for g in base]
    for combo in results:
        evens = tuple(sorted((g.gid, e) for g, e in combo if g.parity == 0))
        odds = tuple(sorted(g.gid for g, e in combo if g.parity == 1))
        for vec in base_exponent_vectors(len(base_ids), max_base_degree):
            bev = tuple((gid, e) for gid, e in zip(base_ids, vec) if e)
            mono: Monomial = (tuple(sorted(bev + evens)), odds)
            monomials.append(mono)
    monomials.sort()
    return monomials
