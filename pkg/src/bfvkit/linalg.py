"""Exact sparse linear algebra over the rationals.

Vectors are dicts mapping hashable keys (monomials) to nonzero Fractions.
The solver keeps an incremental echelon basis with combination tracking so
that solutions are expressed in the original column tags.  Pivot keys are
chosen in sorted order, which makes solutions canonical for a fixed column
order.
"""

from __future__ import annotations

import heapq
from fractions import Fraction


def vec_add(u: dict, v: dict, scale=1) -> dict:
    out = dict(u)
    for k, c in v.items():
        w = out.get(k, 0) + scale * c
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def vec_scale(u: dict, scale) -> dict:
    if not scale:
        return {}
    return {k: c * scale for k, c in u.items()}


class EchelonSolver:
    """Incremental echelon form with combination tracking."""

    def __init__(self):
        # pivot key -> (vector normalized to 1 at pivot, combo over tags)
        self.pivots = {}
        self.kernel = []  # combos over tags that map to zero

    def _reduce(self, vec: dict, combo: dict):
        # stored pivot vectors have their pivot as minimal key, so keys are
        # eliminated in increasing order and never reappear once processed
        vec = {k: v for k, v in vec.items() if v}
        combo = dict(combo)
        heap = [k for k in vec if k in self.pivots]
        heapq.heapify(heap)
        queued = set(heap)
        while heap:
            k = heapq.heappop(heap)
            queued.discard(k)
            coef = vec.get(k)
            if not coef or k not in self.pivots:
                continue
            pvec, pcombo = self.pivots[k]
            for kk, vv in pvec.items():
                w = vec.get(kk, 0) - coef * vv
                if w:
                    vec[kk] = w
                    if kk in self.pivots and kk not in queued and kk != k:
                        heapq.heappush(heap, kk)
                        queued.add(kk)
                else:
                    vec.pop(kk, None)
            for kk, vv in pcombo.items():
                w = combo.get(kk, 0) - coef * vv
                if w:
                    combo[kk] = w
                else:
                    combo.pop(kk, None)
        return vec, combo

    def add_column(self, tag, vec: dict):
        """Insert one column; returns True if it enlarged the span."""
        vec, combo = self._reduce(dict(vec), {tag: Fraction(1)})
        if not vec:
            self.kernel.append(combo)
            return False
        pivot = sorted(vec)[0]
        inv = Fraction(1) / vec[pivot]
        self.pivots[pivot] = (vec_scale(vec, inv), vec_scale(combo, inv))
        return True

    def rank(self) -> int:
        return len(self.pivots)

    def residual(self, target: dict) -> dict:
        vec, _ = self._reduce(dict(target), {})
        return vec

    def solve(self, target: dict):
        """Coefficients over tags with sum(coef * column) = target, or None."""
        vec, combo = self._reduce(dict(target), {})
        if vec:
            return None
        return {t: -c for t, c in combo.items() if c}


def solve_columns(columns, target: dict):
    """One-shot solve of sum(x_tag * column_tag) = target.

    ``columns`` is an iterable of (tag, vector) pairs.  Returns the
    coefficient dict or None when the system is inconsistent.
    """
    es = EchelonSolver()
    for tag, vec in columns:
        es.add_column(tag, vec)
    return es.solve(target)


def kernel_columns(columns):
    """Basis of combinations of columns summing to zero."""
    es = EchelonSolver()
    for tag, vec in columns:
        es.add_column(tag, vec)
    return es.kernel


class BlockEchelon:
    """Echelon solver split into independent blocks by support connectivity.

    Columns sharing a key are forced into one block, so distinct blocks
    have disjoint key supports and solves decompose exactly.
    """

    def __init__(self, columns):
        uf = UnionFind()
        key_root = {}
        cols = [(tag, dict(vec)) for tag, vec in columns if vec]
        for i, (_tag, vec) in enumerate(cols):
            for k in vec:
                if k in key_root:
                    uf.union(key_root[k], i)
                else:
                    key_root[k] = i
        grouped = {}
        for i, (tag, vec) in enumerate(cols):
            grouped.setdefault(uf.find(i), []).append((tag, vec))
        self.key_block = {}
        self.blocks = []
        for root in sorted(grouped):
            es = EchelonSolver()
            for tag, vec in grouped[root]:
                es.add_column(tag, vec)
                for k in vec:
                    self.key_block[k] = len(self.blocks)
            self.blocks.append(es)

    def solve(self, target: dict):
        parts = {}
        for k, v in target.items():
            b = self.key_block.get(k)
            if b is None:
                return None
            parts.setdefault(b, {})[k] = v
        out = {}
        for b, sub in parts.items():
            sol = self.blocks[b].solve(sub)
            if sol is None:
                return None
            out.update(sol)
        return out


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


