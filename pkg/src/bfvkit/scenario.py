"""Reduction problem instances and their exact compatibility checks.

A :class:`Scenario` bundles the base manifold dimension, the bivector pi,
the action vector fields psi (fiber-linear GPolys), the degree-zero
constraints J0, and the Lie-theoretic structure data.  For group-valued
scenarios the moment map is a square matrix of base-coordinate polynomials
equal to the identity at the origin; its logarithm is truncated at the
scenario's truncation order and paired against the Lie algebra basis
matrices to produce ordinary polynomial constraints.

Conventions: the reference point of group-valued scenarios is the origin
of the base coordinates; hamiltonian synthesis for classical scenarios
with omitted psi uses psi_i := {pi, J0_i}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .basis import enumerate_monomials
from .errors import NotNearIdentity, RankDeficient, ShapeMismatch
from .generators import GeneratorTable, Kind, bfv1_table
from .gpoly import GPoly, bracket
from .liedata import (BialgebraData, DglaData, LieAlgebraData,
                      ModuleActionData, QuasiBialgebraData)
from .linalg import BlockEchelon, EchelonSolver, solve_columns
from .reports import ValidationReport

KINDS = ("classical_hamiltonian", "generalized_pair", "dgla", "bialgebra",
         "quasi_bialgebra", "group_valued")


@dataclass
class Scenario:
    kind: str
    n: int
    table: GeneratorTable
    pi: GPoly
    psi: list
    J0: list
    lie: LieAlgebraData
    module: ModuleActionData | None = None
    dgla: DglaData | None = None
    bialgebra: BialgebraData | None = None
    quasi: QuasiBialgebraData | None = None
    truncation_order: int = 4
    degree_bound: int = 4
    assumptions: dict = field(default_factory=dict)
    phi: list | None = None              # matrix of base-coordinate GPolys
    basis_matrices: list | None = None   # rational matrices for <u^k, .>
    sample_points: list = field(default_factory=list)
    quasi_master_mode: str = "chi"       # "chi" or "ideal"
    name: str = "scenario"

    @property
    def dim_g(self) -> int:
        return self.lie.dim

    @property
    def dim_h(self) -> int:
        return self.module.dim_h if self.module else 0

    def check_shapes(self):
        if self.kind not in KINDS:
            raise ShapeMismatch(f"unknown scenario kind {self.kind!r}")
        if self.psi and len(self.psi) != self.dim_g:
            raise ShapeMismatch("psi length must equal dim g")
        if self.J0 and len(self.J0) != self.dim_h:
            raise ShapeMismatch("J0 length must equal dim h")
        allowed = {Kind.BASE, Kind.FIBER}
        for name, polys in (("pi", [self.pi]), ("psi", self.psi), ("J0", self.J0)):
            for p in polys:
                if not p.kinds_used() <= allowed:
                    raise ShapeMismatch(f"{name} must use base/fiber generators only")
        if self.pi and self.pi.degree_support() != [2]:
            raise ShapeMismatch("pi must be homogeneous of function degree 2")
        for p in self.psi:
            if p and p.degree_support() != [1]:
                raise ShapeMismatch("psi entries must have function degree 1")
        for p in self.J0:
            if p and p.degree_support() != [0]:
                raise ShapeMismatch("J0 entries must have function degree 0")

    # -- generator access ----------------------------------------------

    def gen(self, kind: Kind, i: int) -> GPoly:
        ids = self.table.ids_of_kind(kind)
        return GPoly.gen(self.table, ids[i - 1])

    def chi_m(self) -> GPoly:
        """chi_M = sum_{i<j<k} chi^{ijk} psi_i psi_j psi_k."""
        out = GPoly.zero(self.table)
        if not self.quasi:
            return out
        n = self.dim_g
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for k in range(j + 1, n + 1):
                    v = self.quasi.x3(i, j, k)
                    if v:
                        out = out + v * (self.psi[i - 1] * self.psi[j - 1]
                                         * self.psi[k - 1])
        return out


@dataclass
class ConstraintSet:
    deg1: list  # fiber-linear generators J1#(u^i) = psi_i
    deg0: list  # base-degree-zero generators J0#(v^j)

    @property
    def generators(self):
        return list(self.deg1) + list(self.deg0)


def assemble_constraints(S: Scenario) -> ConstraintSet:
    """Degree-(1, 0) ideal generators; synthesizes missing data per kind.

    For classical scenarios with omitted psi the action fields are the
    hamiltonian fields {pi, J0_i}; for group-valued scenarios with omitted
    J0 the degree-zero constraints come from the truncated matrix log.
    """
    S.check_shapes()
    psi = list(S.psi)
    J0 = list(S.J0)
    if S.kind == "classical_hamiltonian" and not psi:
        if len(J0) != S.dim_g:
            raise ShapeMismatch("classical synthesis needs one J0 per g-basis element")
        psi = [bracket(S.pi, j) for j in J0]
    if S.kind == "group_valued" and not J0:
        J0 = group_log_constraints(S)
    if len(psi) != S.dim_g:
        raise ShapeMismatch("assembled psi length must equal dim g")
    if S.dim_h and len(J0) != S.dim_h:
        raise ShapeMismatch("assembled J0 length must equal dim h")
    S.psi = psi
    S.J0 = J0
    return ConstraintSet(deg1=psi, deg0=J0)


def check_equivariance(S: Scenario) -> ValidationReport:
    """{psi_i, psi_j} = c^{ij}_k psi_k and psi_i(J0_j) = d^{ij}_p J0_p, exactly.

    Group-valued scenarios compare after truncation at the scenario's
    truncation order, since their constraints are themselves truncated.
    """
    rep = ValidationReport("equivariance")
    cs = assemble_constraints(S)
    n = S.dim_g

    def cut(p):
        return p.base_truncate(S.truncation_order) if S.kind == "group_valued" else p

    ok = True
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = bracket(cs.deg1[i - 1], cs.deg1[j - 1])
            rhs = GPoly.zero(S.table)
            for k in range(1, n + 1):
                v = S.lie.C(i, j, k)
                if v:
                    rhs = rhs + v * cs.deg1[k - 1]
            if cut(lhs - rhs):
                rep.record("action-bracket", False, f"(psi{i},psi{j})")
                ok = False
    if ok:
        rep.record("action-bracket", True)
    if S.dim_h:
        mod = S.module
        ok = True
        for i in range(1, n + 1):
            for j in range(1, S.dim_h + 1):
                lhs = bracket(cs.deg1[i - 1], cs.deg0[j - 1])
                rhs = GPoly.zero(S.table)
                for p in range(1, S.dim_h + 1):
                    v = mod.D(i, j, p)
                    if v:
                        rhs = rhs + v * cs.deg0[p - 1]
                if cut(lhs - rhs):
                    rep.record("moment-equivariance", False, f"(psi{i},J0_{j})")
                    ok = False
        if ok:
            rep.record("moment-equivariance", True)
    return rep


def ideal_membership(S: Scenario, target: GPoly, bound: int | None = None):
    """Cofactors h_g with target = sum h_g * g over the constraint ideal.

    The cofactors are posed over base/fiber monomials of base degree at
    most ``bound``.  Returns a list of cofactor GPolys parallel to the
    generators, or None when the bounded system is inconsistent.
    """
    bound = S.degree_bound if bound is None else bound
    if not target:
        return [GPoly.zero(S.table) for _ in ConstraintSet(S.psi, S.J0).generators]
    gens = ConstraintSet(S.psi, S.J0).generators
    if not target.is_homogeneous():
        comps = {}
        for (gh, fd), part in target.grade_components().items():
            comps.setdefault(fd, GPoly.zero(S.table))
            comps[fd] = comps[fd] + part
        totals = None
        for part in comps.values():
            cof = ideal_membership(S, part, bound)
            if cof is None:
                return None
            totals = cof if totals is None else [a + b for a, b in zip(totals, cof)]
        return totals
    tdeg = target.degree()
    columns = []
    for gi, g in enumerate(gens):
        if not g:
            continue
        gdeg = g.degree()
        want = tdeg - gdeg
        if want < 0:
            continue
        for mono in enumerate_monomials(S.table, want, 0, 0, bound,
                                        kinds={Kind.BASE, Kind.FIBER}):
            col = (GPoly(S.table, {mono: Fraction(1)}) * g).terms
            if col:
                columns.append(((gi, mono), col))
    sol = BlockEchelon(columns).solve(target.terms)
    if sol is None:
        return None
    cof = [GPoly.zero(S.table) for _ in gens]
    for (gi, mono), coef in sol.items():
        cof[gi] = cof[gi] + GPoly(S.table, {mono: coef})
    return cof


def check_compatibility(S: Scenario, bound: int | None = None) -> ValidationReport:
    """pi lies in the normalizer of the constraint ideal, plus kind-specific
    weak-master checks.  Membership failures at the bound are reported as
    undecided, never as failures."""
    rep = ValidationReport("compatibility")
    cs = assemble_constraints(S)
    bound = S.degree_bound if bound is None else bound
    names = [f"psi{i+1}" for i in range(len(cs.deg1))] + \
            [f"J0_{j+1}" for j in range(len(cs.deg0))]
    for name, g in zip(names, cs.generators):
        br = bracket(S.pi, g)
        if not br:
            rep.record(f"normalizer.{name}", True)
            continue
        cof = ideal_membership(S, br, bound)
        if cof is None:
            rep.record_undecided(f"normalizer.{name}",
                                 f"membership undecided at bound {bound}")
        else:
            rep.record(f"normalizer.{name}", True)
    if S.kind in ("bialgebra", "quasi_bialgebra") and S.bialgebra is not None:
        ok = True
        n = S.dim_g
        for k in range(1, n + 1):
            rhs = GPoly.zero(S.table)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    v = S.bialgebra.ab(k, i, j)
                    if v:
                        rhs = rhs + v * (cs.deg1[i - 1] * cs.deg1[j - 1])
            if bracket(S.pi, cs.deg1[k - 1]) != rhs:
                rep.record("cobracket-covariance", False, f"psi{k}")
                ok = False
        if ok:
            rep.record("cobracket-covariance", True)
    if S.kind == "quasi_bialgebra":
        if S.quasi_master_mode == "chi":
            lhs = Fraction(1, 2) * bracket(S.pi, S.pi)
            rep.record("weak-master", lhs == S.chi_m(),
                       "1/2{pi,pi} = chi_M")
        else:
            br = bracket(S.pi, S.pi)
            if not br:
                rep.record("weak-master", True, "{pi,pi} = 0")
            else:
                cof = ideal_membership(S, br, bound)
                if cof is None:
                    rep.record_undecided("weak-master",
                                         f"membership undecided at bound {bound}")
                else:
                    rep.record("weak-master", True, "{pi,pi} in ideal")
    for key, val in sorted(S.assumptions.items()):
        rep.record(f"assumption.{key}", True, f"recorded={val} (not verified)")
    return rep


# ---------------------------------------------------------------------------
# group-valued scenarios: polynomial matrix series


def mat_identity(table, dim):
    return tuple(tuple(GPoly.const(table, 1 if i == j else 0)
                       for j in range(dim)) for i in range(dim))


def mat_add(A, B, s=1):
    return tuple(tuple(a + s * b for a, b in zip(ra, rb))
                 for ra, rb in zip(A, B))


def mat_scale(A, s):
    return tuple(tuple(a * s for a in ra) for ra in A)


def mat_mul(A, B, order=None):
    dim = len(A)
    out = []
    for i in range(dim):
        row = []
        for j in range(dim):
            acc = None
            for k in range(dim):
                term = A[i][k] * B[k][j]
                acc = term if acc is None else acc + term
            if order is not None:
                acc = acc.base_truncate(order)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_truncate(A, order):
    return tuple(tuple(a.base_truncate(order) for a in ra) for ra in A)


def mat_is_zero(A):
    return all(not a for ra in A for a in ra)


def mat_log(N, order):
    """log(I + N) = N - N^2/2 + ... truncated at base degree ``order``.

    Requires every entry of N to vanish at the origin, so the series
    terminates at order ``order``.
    """
    table = N[0][0].table
    dim = len(N)
    acc = tuple(tuple(GPoly.zero(table) for _ in range(dim)) for _ in range(dim))
    power = mat_identity(table, dim)
    for m in range(1, order + 1):
        power = mat_mul(power, N, order)
        acc = mat_add(acc, power, Fraction((-1) ** (m + 1), m))
        if mat_is_zero(power):
            break
    return acc


def _dual_mul(P, Q, order):
    """Product of dual-number matrices (A, B) ~ A + tB with t^2 = 0."""
    A, B = P
    C, D = Q
    return (mat_mul(A, C, order),
            mat_add(mat_mul(A, D, order), mat_mul(B, C, order)))


def _dual_log(P, order):
    """Dual part of log(A + tB); A - I must vanish at the origin."""
    A, B = P
    table = A[0][0].table
    dim = len(A)
    N = (mat_add(A, mat_identity(table, dim), -1), B)
    zero = tuple(tuple(GPoly.zero(table) for _ in range(dim)) for _ in range(dim))
    acc = zero
    power = (mat_identity(table, dim), zero)
    for m in range(1, order + 2):
        power = _dual_mul(power, N, order)
        acc = mat_add(acc, power[1], Fraction((-1) ** (m + 1), m))
        if mat_is_zero(power[0]) and mat_is_zero(power[1]):
            break
    return acc


def _rational_matrix(rows):
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _gram_inverse(mats):
    """Inverse Gram matrix of tr(L_k L_l); raises RankDeficient if singular."""
    n = len(mats)
    gram = [[sum(mats[k][a][b] * mats[l][b][a]
                 for a in range(len(mats[k])) for b in range(len(mats[k])))
             for l in range(n)] for k in range(n)]
    cols = [(j, {i: gram[i][j] for i in range(n) if gram[i][j]}) for j in range(n)]
    inv = []
    for k in range(n):
        sol = solve_columns(cols, {k: Fraction(1)})
        if sol is None:
            raise RankDeficient("trace form of the basis matrices is degenerate")
        inv.append([sol.get(j, Fraction(0)) for j in range(n)])
    return inv


def _pair_with_basis(S: Scenario, M) -> list:
    """<u^k, M> for a polynomial matrix M, via the trace-form dual basis."""
    mats = [_rational_matrix(m) for m in S.basis_matrices]
    ginv = _gram_inverse(mats)
    dim = len(mats[0])
    out = []
    for k in range(len(mats)):
        acc = GPoly.zero(S.table)
        for l in range(len(mats)):
            coeff = ginv[k][l]
            if not coeff:
                continue
            tr = GPoly.zero(S.table)
            for a in range(dim):
                for b in range(dim):
                    if mats[l][a][b]:
                        tr = tr + mats[l][a][b] * M[b][a]
            acc = acc + coeff * tr
        out.append(acc)
    return out


def group_log_constraints(S: Scenario) -> list:
    """Pullbacks <u^k, log Phi> truncated at the scenario truncation order.

    Raises NotNearIdentity when Phi differs from the identity at the
    origin, and RankDeficient when the constraint differentials fail to
    have full rank at a sample point.
    """
    if S.kind != "group_valued":
        raise ShapeMismatch("group_log_constraints requires a group_valued scenario")
    if S.phi is None or S.basis_matrices is None:
        raise ShapeMismatch("group_valued scenarios need phi and basis_matrices")
    order = S.truncation_order
    dim = len(S.phi)
    table = S.table
    phi = tuple(tuple(S.phi[i][j] for j in range(dim)) for i in range(dim))
    N = mat_add(phi, mat_identity(table, dim), -1)
    for i in range(dim):
        for j in range(dim):
            if N[i][j].base_component(0):
                raise NotNearIdentity(
                    f"phi[{i}][{j}] differs from identity at the origin")
    logphi = mat_log(mat_truncate(N, order), order)
    fks = [f.base_truncate(order) for f in _pair_with_basis(S, logphi)]

    base_ids = table.ids_of_kind(Kind.BASE)
    points = S.sample_points or [tuple(Fraction(0) for _ in base_ids)]
    for pt in points:
        point = {gid: Fraction(v) for gid, v in zip(base_ids, pt)}
        es = EchelonSolver()
        for k, f in enumerate(fks):
            grad = {}
            for col, gid in enumerate(base_ids):
                val = f.deriv(gid).eval_base(point)
                if val.terms:
                    grad[col] = val.const_value()
            es.add_column(k, grad)
        if es.rank() != len(fks):
            raise RankDeficient(
                f"constraint differentials have rank {es.rank()} < {len(fks)}"
                f" at sample point {tuple(map(str, pt))}")
    return fks


def bch_transport_check(S: Scenario, order: int) -> ValidationReport:
    """Series checks of the transport identities for group-valued moment maps:

    (a) d/dt|0 [ log(Phi exp(t u)) - log(exp(t u) Phi) ] = [log Phi, u]
    (b) psi_i(Phi* f^j) = c^{ij}_k Phi* f^k

    both compared after truncation at base degree ``order``; the report
    cites the first failing order.
    """
    rep = ValidationReport("bch")
    if S.kind != "group_valued":
        raise ShapeMismatch("bch_transport_check requires a group_valued scenario")
    table = S.table
    dim = len(S.phi)
    mats = [_rational_matrix(m) for m in S.basis_matrices]
    phi = mat_truncate(tuple(tuple(r) for r in S.phi), order)
    nmat = mat_log(mat_add(phi, mat_identity(table, dim), -1), order)

    def const_mat(m):
        return tuple(tuple(GPoly.const(table, v) for v in row) for row in m)

    ok = True
    first_bad = None
    for i, u in enumerate(mats):
        um = const_mat(u)
        left = _dual_log((phi, mat_mul(phi, um, order)), order)
        right = _dual_log((phi, mat_mul(um, phi, order)), order)
        lhs = mat_add(left, right, -1)
        rhs = mat_add(mat_mul(nmat, um, order), mat_mul(um, nmat, order), -1)
        diff = mat_add(lhs, rhs, -1)
        for o in range(order + 1):
            if any(e.base_component(o) for row in diff for e in row):
                ok = False
                first_bad = o if first_bad is None else min(first_bad, o)
                break
    rep.record("log-transport", ok,
               "" if ok else f"first failing order {first_bad}")

    fks = group_log_constraints(S)
    ok = True
    first_bad = None
    n = S.dim_g
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            lhs = bracket(S.psi[i - 1], fks[j - 1])
            rhs = GPoly.zero(table)
            for k in range(1, n + 1):
                v = S.lie.C(i, j, k)
                if v:
                    rhs = rhs + v * fks[k - 1]
            diff = lhs - rhs
            for o in range(order + 1):
                if diff.base_component(o):
                    ok = False
                    first_bad = o if first_bad is None else min(first_bad, o)
                    break
    rep.record("constraint-transport", ok,
               "" if ok else f"first failing order {first_bad}")
    return rep


def scenario_table(kind: str, n: int, dim_g: int, dim_h: int) -> GeneratorTable:
    return bfv1_table(n, dim_g, dim_h)
