"""Derived k-ary brackets on the Lagrangian algebra and H^0 probes.

The Lagrangian algebra K = C(M) (x) Lambda g* (x) Lambda h is the span of
monomials in base coordinates, g-ghosts and h-antighosts.  It is abelian
for the big bracket, and the extended charge S = Q + Pi + Pi^(-1) + ...
induces on it the derived brackets

    l_1(f)            = {Q, f}
    l_2(f1, f2)       = -(-1)^{f1} {{Pi, f1}, f2}
    l_k(f1, ..., fk)  = (-1)^{eps} {...{{Pi^(2-k), f1}, f2}, ..., fk}
                        with eps = sum_i (k - i) f_i,  k >= 3.

Sign normalization: the 2-bracket carries one global sign relative to the
raw nested bracket so that, for a bivector pi written in the standard
coordinate form sum pi^{ij} e_i e_j (i < j), l_2 on base functions equals
the bivector's classical bracket: l_2(x1, x2) = +1 for pi = e1 e2.  With
the right-derivative bracket convention of :mod:`bfvkit.gpoly` the raw
nested bracket yields the opposite sign; the normalization restores the
classical limit and leaves every coherence identity unchanged (the 2-ary
bracket enters the homotopy Jacobi identity quadratically).
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .errors import InternalSignError, NotInLagrangian, TruncationWarning
from .generators import LAGRANGIAN_KINDS, Kind
from .gpoly import GPoly, Monomial, bracket
from .linalg import EchelonSolver, UnionFind, solve_columns


def restrict_check(F: GPoly) -> GPoly:
    """Verify F lies in the Lagrangian alphabet; identity on values."""
    table = F.table
    for m in F.terms:
        for gid, _e in m[0]:
            if table.gen(gid).kind not in LAGRANGIAN_KINDS:
                raise NotInLagrangian(table.gen(gid).name)
        for gid in m[1]:
            if table.gen(gid).kind not in LAGRANGIAN_KINDS:
                raise NotInLagrangian(table.gen(gid).name)
    return F


def _parity(F: GPoly) -> int:
    deg = F.degree()
    return 0 if deg is None else deg % 2


class BracketTower:
    """Evaluator for the derived brackets of a charge series."""

    def __init__(self, series):
        self.series = series
        self.table = series.Q.table

    def _homogeneous_args(self, args):
        """Split inhomogeneous arguments into homogeneous components."""
        split = []
        for a in args:
            restrict_check(a)
            if a.is_homogeneous():
                split.append([a])
            else:
                by_deg = {}
                for m, c in a.terms.items():
                    by_deg.setdefault(a.mono_degree(m), {})[m] = c
                split.append([GPoly(self.table, t) for _, t in sorted(by_deg.items())])
        return split

    def ell(self, k: int, args) -> GPoly:
        """The k-ary derived bracket; multilinear over homogeneous parts."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if len(args) != k:
            raise ValueError(f"expected {k} arguments")
        if k >= 3 and k - 2 >= len(self.series.terms):
            warnings.warn(
                f"{k}-ary bracket vanishes by truncation of the charge series",
                TruncationWarning, stacklevel=2)
            return GPoly.zero(self.table)
        out = GPoly.zero(self.table)
        stack = [[]]
        for parts in self._homogeneous_args(args):
            stack = [chosen + [p] for chosen in stack for p in parts]
        for chosen in stack:
            out = out + self._ell_homogeneous(k, chosen)
        return restrict_check(out)

    def _ell_homogeneous(self, k, args):
        if k == 1:
            val = bracket(self.series.Q, args[0])
        else:
            val = self.series.term(k - 2)
            for a in args:
                val = bracket(val, a)
            eps = sum((k - i) * _parity(a) for i, a in enumerate(args, start=1))
            if eps % 2:
                val = -val
            if k == 2:
                # classical-limit normalization, see module docstring
                val = -val
        try:
            return restrict_check(val)
        except NotInLagrangian as exc:
            raise InternalSignError(
                f"derived bracket left the Lagrangian algebra at {exc.token}"
            ) from exc

    def ell1(self, f):
        return self.ell(1, [f])

    def ell2(self, f, g):
        return self.ell(2, [f, g])

    def ell3(self, f, g, h):
        return self.ell(3, [f, g, h])


def homotopy_jacobi_residual(tower: BracketTower, f, g, h) -> GPoly:
    """Cyclic l_2-Jacobiator minus its l_3/l_1 homotopy.

    residual = sum_cyc (-1)^{|a||c|} l_2(a, l_2(b, c))
             - (-1)^{|f||h|} (l_3 o l_1^{x3} + l_1 o l_3)(f, g, h)

    which vanishes identically whenever the charge series is exact on the
    relevant ghost levels.
    """
    for a in (f, g, h):
        restrict_check(a)
        if not a.is_homogeneous():
            raise ValueError("arguments must be degree-homogeneous")
    pf, pg, ph = _parity(f), _parity(g), _parity(h)
    lhs = GPoly.zero(tower.table)
    for (a, b, c), (pa, pc) in (((f, g, h), (pf, ph)),
                                ((g, h, f), (pg, pf)),
                                ((h, f, g), (ph, pg))):
        term = tower.ell2(a, tower.ell2(b, c))
        lhs = lhs + ((-term) if (pa * pc) % 2 else term)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        rhs = tower.ell1(tower.ell3(f, g, h))
        rhs = rhs + tower.ell3(tower.ell1(f), g, h)
        t = tower.ell3(f, tower.ell1(g), h)
        rhs = rhs + ((-t) if pf else t)
        t = tower.ell3(f, g, tower.ell1(h))
        rhs = rhs + ((-t) if (pf + pg) % 2 else t)
    if (pf * ph) % 2:
        rhs = -rhs
    return lhs - rhs


# ---------------------------------------------------------------------------
# bounded cohomology probe


def lagrangian_monomials(table, total_ghost: int, max_base_degree: int):
    """Monomials of K with the given total ghost number and base degree."""
    import itertools

    base_ids = table.ids_of_kind(Kind.BASE)
    ghost_ids = table.ids_of_kind(Kind.GHOST_G)
    anti_ids = table.ids_of_kind(Kind.ANTIGHOST_H)
    from .basis import base_exponent_vectors

    out = []
    for nc in range(len(ghost_ids) + 1):
        nb = nc - total_ghost
        if nb < 0 or nb > len(anti_ids):
            continue
        for cs in itertools.combinations(ghost_ids, nc):
            for bs in itertools.combinations(anti_ids, nb):
                odds = tuple(sorted(cs + bs))
                for vec in base_exponent_vectors(len(base_ids), max_base_degree):
                    ev = tuple((gid, e) for gid, e in zip(base_ids, vec) if e)
                    out.append((ev, odds))
    out.sort()
    return out


class ProbeReport:
    """Outcome of a bounded-degree H^0 probe."""

    def __init__(self, degree_bound):
        self.degree_bound = degree_bound
        self.dim_space = 0
        self.dim_kernel = 0
        self.dim_image = 0
        self.representatives = []       # GPolys
        self.projections = []           # (0,0)-components of representatives
        self.table = {}                 # (i, j) -> dict of rep coefficients
        self.closure_ok = True
        self.inconclusive = []          # (i, j) pairs beyond the bound

    @property
    def dim_h0(self):
        return len(self.representatives)


def h0_probe(scenario, tower: BracketTower, degree_bound: int) -> ProbeReport:
    """Kernel-mod-image probe of the total-ghost-zero cohomology.

    Builds the Lagrangian monomial space of total ghost number 0 with base
    degree <= degree_bound, computes ker(l_1) and the part of im(l_1) that
    lies inside the bounded span (combinations of images of ghost -1
    elements whose out-of-bound components cancel), and returns
    representatives with the l_2 multiplication table expressed modulo the
    image.  Entries that cannot be expressed at the bound are reported as
    inconclusive rather than failed.
    """
    table = tower.table
    rep = ProbeReport(degree_bound)
    dom0 = lagrangian_monomials(table, 0, degree_bound)
    domm = lagrangian_monomials(table, -1, degree_bound)
    rep.dim_space = len(dom0)

    def as_poly(m):
        return GPoly(table, {m: Fraction(1)})

    d0 = {m: tower.ell1(as_poly(m)) for m in dom0}
    dm = {m: tower.ell1(as_poly(m)) for m in domm}

    low = set(dom0)

    # independent blocks: connect domain monomials through shared image
    # monomials, and monomials co-occurring in one image generator
    uf = UnionFind()
    for m in dom0:
        uf.find(("d", m))
        for key in d0[m].terms:
            uf.union(("d", m), ("k", key))
    for m in domm:
        uf.find(("i", m))
        for key in dm[m].terms:
            uf.union(("i", m), ("dm", key))
            if key in low:
                uf.union(("i", m), ("d", key))
    blocks = {}
    for m in dom0:
        blocks.setdefault(uf.find(("d", m)), [[], []])[0].append(m)
    for m in domm:
        root = uf.find(("i", m))
        if root in blocks:
            blocks[root][1].append(m)

    kernel_vecs = []
    image_vecs = []
    for root, (dmonos, imonos) in sorted(blocks.items(), key=lambda kv: kv[1][0][0]):
        es = EchelonSolver()
        for m in dmonos:
            es.add_column(m, d0[m].terms)
        kernel_vecs.extend(es.kernel)
        if imonos:
            # split image vectors into in-span and out-of-span parts; the
            # image inside the span is generated by combinations whose
            # out-of-span part vanishes
            hi = EchelonSolver()
            for m in imonos:
                out_part = {k: v for k, v in dm[m].terms.items() if k not in low}
                hi.add_column(m, out_part)
            for combo in hi.kernel:
                vec = {}
                for m, coef in combo.items():
                    for k, v in dm[m].terms.items():
                        w = vec.get(k, 0) + coef * v
                        if w:
                            vec[k] = w
                        else:
                            vec.pop(k, None)
                if vec:
                    image_vecs.append(vec)

    rep.dim_kernel = len(kernel_vecs)
    img = EchelonSolver()
    for i, v in enumerate(image_vecs):
        img.add_column(i, v)
    rep.dim_image = img.rank()

    # representatives: kernel vectors reduced modulo the image
    reps = EchelonSolver()
    for vec in kernel_vecs:
        resid = img.residual(vec)
        if resid and reps.add_column(len(rep.representatives), resid):
            poly = GPoly(table, dict(resid))
            rep.representatives.append(poly)
            rep.projections.append(GPoly(
                table, {m: c for m, c in poly.terms.items()
                        if poly.mono_ghost(m) == (0, 0)}))

    # l_2 table on representatives, expressed modulo the image
    columns = [(("rep", i), r.terms) for i, r in enumerate(rep.representatives)]
    columns += [(("img", i), v) for i, v in enumerate(image_vecs)]
    for i, ri in enumerate(rep.representatives):
        for j, rj in enumerate(rep.representatives):
            val = tower.ell2(ri, rj)
            if not val:
                rep.table[(i, j)] = {}
                continue
            sol = solve_columns(columns, val.terms)
            if sol is None:
                rep.closure_ok = False
                rep.inconclusive.append((i, j))
                continue
            rep.table[(i, j)] = {t[1]: c for t, c in sol.items()
                                 if t[0] == "rep" and c}
    return rep


def class_equals(scenario, tower: BracketTower, degree_bound: int,
                 value: GPoly, expected: GPoly) -> bool:
    """Whether value and expected define the same class modulo im(l_1).

    The difference is posed as an image of a ghost -1 element of base
    degree up to the difference's own degree plus the bound.
    """
    diff = value - expected
    if not diff:
        return True
    table = tower.table
    bound = max(degree_bound, diff.max_base_degree())
    columns = []
    for m in lagrangian_monomials(table, -1, bound):
        img = tower.ell1(GPoly(table, {m: Fraction(1)}))
        if img:
            columns.append((m, img.terms))
    return solve_columns(columns, diff.terms) is not None
