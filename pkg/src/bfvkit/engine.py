"""BRST charges, master equations, Koszul solves and extended charges.

The degree-one charge follows the four-term template

    Q = psi_i c_i + J0_j C_j - 1/2 c^{ij}_k c_i c_j b_k - d^{mn}_p c_m C_n B_p

whose bracket-square vanishes exactly whenever the Lie data validators and
the equivariance checks pass.  The inner derivation {Q, .} splits on
(ghost, antighost)-bihomogeneous elements into the antighost-lowering
Koszul part delta_V and the ghost-raising Chevalley-Eilenberg part
delta_H.

All exactness problems (Koszul preimages, cocycle lifts, extended-charge
corrections) are solved by bounded linear ansatz over the monomial basis
and verified before returning; an inconsistent bounded system raises
:class:`~bfvkit.errors.NotFound` and never produces an unverified result.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from fractions import Fraction

from .basis import enumerate_monomials
from .errors import (LiftNotFound, NotBihomogeneous, NotFound, PresetMismatch,
                     ShapeMismatch)
from .generators import Kind
from .gpoly import GPoly, bracket
from .linalg import BlockEchelon
from .scenario import Scenario, assemble_constraints

# Assembled Koszul ansatz systems, reused across solves against one charge.
_koszul_systems = weakref.WeakKeyDictionary()


def build_charge_deg0(L, J, table) -> GPoly:
    """Degree-zero BRST charge J_i c_i - 1/2 c^{ij}_k c_i c_j b_k."""
    if table.preset != "BFV0":
        raise PresetMismatch("build_charge_deg0 requires a BFV0 table")
    if len(J) != L.dim:
        raise ShapeMismatch("one moment component per Lie algebra generator")
    cg = table.ids_of_kind(Kind.GHOST_G)
    bg = table.ids_of_kind(Kind.ANTIGHOST_G)
    Q = GPoly.zero(table)
    for i, Ji in enumerate(J):
        Q = Q + Ji * GPoly.gen(table, cg[i])
    for (i, j, k), v in L.c.items():
        Q = Q - Fraction(1, 2) * v * (GPoly.gen(table, cg[i - 1])
                                      * GPoly.gen(table, cg[j - 1])
                                      * GPoly.gen(table, bg[k - 1]))
    return Q


def build_charge_deg1(S: Scenario) -> GPoly:
    """The four-term degree-one charge of the scenario's reduction data."""
    cs = assemble_constraints(S)
    table = S.table
    if table.preset != "BFV1":
        raise PresetMismatch("build_charge_deg1 requires a BFV1 table")
    cg = table.ids_of_kind(Kind.GHOST_G)
    ch = table.ids_of_kind(Kind.GHOST_H)
    bg = table.ids_of_kind(Kind.ANTIGHOST_G)
    bh = table.ids_of_kind(Kind.ANTIGHOST_H)
    Q = GPoly.zero(table)
    for i, p in enumerate(cs.deg1):
        Q = Q + p * GPoly.gen(table, cg[i])
    for j, p in enumerate(cs.deg0):
        Q = Q + p * GPoly.gen(table, ch[j])
    for (i, j, k), v in S.lie.c.items():
        Q = Q - Fraction(1, 2) * v * (GPoly.gen(table, cg[i - 1])
                                      * GPoly.gen(table, cg[j - 1])
                                      * GPoly.gen(table, bg[k - 1]))
    if S.module:
        for (m, nn, p), v in S.module.d.items():
            Q = Q - v * (GPoly.gen(table, cg[m - 1])
                         * GPoly.gen(table, ch[nn - 1])
                         * GPoly.gen(table, bh[p - 1]))
    return Q


def brst_apply(Q: GPoly, F: GPoly) -> GPoly:
    return bracket(Q, F)


def master_residual(Q: GPoly) -> GPoly:
    return Fraction(1, 2) * bracket(Q, Q)


def split_dH_dV(Q: GPoly, F: GPoly):
    """Split {Q, F} into (delta_H F, delta_V F) for bihomogeneous F.

    delta_V lowers the antighost number by one at fixed ghost number (the
    Koszul direction); delta_H raises the ghost number at fixed antighost
    number (the Chevalley-Eilenberg direction).
    """
    bids = F.ghost_support()
    if len(bids) > 1:
        raise NotBihomogeneous("input must be (ghost, antighost)-bihomogeneous")
    if not bids:
        return GPoly.zero(F.table), GPoly.zero(F.table)
    g, a = bids[0]
    image = bracket(Q, F)
    comps = image.bidegree_components()
    dH = comps.pop((g + 1, a), GPoly.zero(F.table))
    dV = comps.pop((g, a - 1), GPoly.zero(F.table))
    if comps:
        raise NotBihomogeneous(
            f"{{Q, F}} has unexpected bidegrees {sorted(comps)}")
    return dH, dV


def delta_v(Q: GPoly, F: GPoly) -> GPoly:
    if not F:
        return F
    out = GPoly.zero(F.table)
    for part in F.bidegree_components().values():
        out = out + split_dH_dV(Q, part)[1]
    return out


def delta_h(Q: GPoly, F: GPoly) -> GPoly:
    if not F:
        return F
    out = GPoly.zero(F.table)
    for part in F.bidegree_components().values():
        out = out + split_dH_dV(Q, part)[0]
    return out


def _koszul_system(S: Scenario, Q: GPoly, shape, ansatz_degree: int):
    """Echelonized delta_V system for one ansatz shape, cached per charge."""
    per_q = _koszul_systems.get(Q)
    if per_q is None:
        per_q = {}
        _koszul_systems[Q] = per_q
    key = (shape, ansatz_degree)
    if key not in per_q:
        fdeg, g, a = shape
        columns = []
        for mono in enumerate_monomials(S.table, fdeg, g, a, ansatz_degree):
            img = delta_v(Q, GPoly(S.table, {mono: Fraction(1)}))
            if img:
                columns.append((mono, img.terms))
        per_q[key] = BlockEchelon(columns)
    return per_q[key]


def koszul_solve(S: Scenario, Q: GPoly, R: GPoly, ansatz_degree: int) -> GPoly:
    """Solve delta_V P = R with P posed over monomials of base degree at
    most ``ansatz_degree``; raises NotFound when the bounded system is
    inconsistent.  The returned P is verified before returning."""
    if not R:
        return GPoly.zero(S.table)
    bids = R.ghost_support()
    degs = R.degree_support()
    if len(bids) > 1 or len(degs) > 1:
        raise NotBihomogeneous("koszul_solve expects a bihomogeneous right side")
    g, a = bids[0]
    fdeg = degs[0]
    es = _koszul_system(S, Q, (fdeg - 1, g, a + 1), ansatz_degree)
    sol = es.solve(R.terms)
    if sol is None:
        raise NotFound("no Koszul preimage in the bounded ansatz", ansatz_degree)
    P = GPoly(S.table, {m: c for m, c in sol.items() if c})
    if delta_v(Q, P) != R:
        raise NotFound("bounded Koszul solve failed verification", ansatz_degree)
    return P


def solve_brst_exact(S: Scenario, Q: GPoly, R: GPoly, ansatz_degree: int,
                     total_ghost: int) -> GPoly:
    """Solve {Q, X} = R for X of total ghost number ``total_ghost`` by
    staged Koszul solves up the antighost ladder.

    R must be concentrated in total ghost number ``total_ghost + 1``.  The
    solution is assembled bidegree by bidegree: at antighost level q the
    equation delta_V X^{(q-1+k, q)} = R-part - delta_H X^(previous) is
    solved, with k fixed by the ghost bookkeeping.
    """
    if not R:
        return GPoly.zero(S.table)
    rcomps = R.bidegree_components()
    # X components live at (g, g - total_ghost).  At function degree 2 the
    # ghost number is bounded: n_c + 2 n_C <= 2 + n_B <= 2 + dim h.
    max_ghost = 2 + S.dim_h
    X = GPoly.zero(S.table)
    carry = GPoly.zero(S.table)  # delta_H of the previous X component
    for g in range(0, max_ghost + 2):
        a = g - total_ghost
        if a < 1:
            continue
        rhs = rcomps.pop((g, a - 1), GPoly.zero(S.table)) - carry
        if rhs:
            comp = koszul_solve(S, Q, rhs, ansatz_degree)
        else:
            comp = GPoly.zero(S.table)
        X = X + comp
        carry = delta_h(Q, comp)
    if rcomps and any(v for v in rcomps.values()):
        raise NotFound("right side has components beyond the antighost ladder",
                       ansatz_degree)
    if bracket(Q, X) != R:
        raise NotFound("staged BRST solve failed verification", ansatz_degree)
    return X


def cocycle_lift(S: Scenario, Q: GPoly, ansatz_degree: int = 4) -> GPoly:
    """A total-ghost-zero cocycle Pi with Pi^(0,0) = pi and {Q, Pi} = 0.

    Scenario kinds with a closed-form correction use it (classical and
    group-valued: pi + b_i C_i; dgla: pi - a^i_j C_i b_j; bialgebra and
    quasi-bialgebra: pi + a^j_{ik} psi_i c_j b_k); otherwise a bounded
    ansatz over total-ghost-zero corrections is solved.  The result is
    always verified; LiftNotFound is raised when no bounded lift exists.
    """
    table = S.table
    pi = S.pi
    candidate = None
    if S.kind in ("classical_hamiltonian", "group_valued"):
        corr = GPoly.zero(table)
        for i in range(1, S.dim_g + 1):
            corr = corr + S.gen(Kind.ANTIGHOST_G, i) * S.gen(Kind.GHOST_H, i)
        candidate = pi + corr
    elif S.kind == "dgla" and S.dgla is not None:
        corr = GPoly.zero(table)
        for (i, j), v in S.dgla.A.items():
            corr = corr - v * (S.gen(Kind.GHOST_H, i) * S.gen(Kind.ANTIGHOST_G, j))
        candidate = pi + corr
    elif S.kind in ("bialgebra", "quasi_bialgebra") and S.bialgebra is not None:
        corr = GPoly.zero(table)
        for (j, i, k), v in S.bialgebra.a.items():
            corr = corr + v * (S.psi[i - 1] * S.gen(Kind.GHOST_G, j)
                               * S.gen(Kind.ANTIGHOST_G, k))
        candidate = pi + corr
    if candidate is not None and not bracket(Q, candidate):
        return candidate
    # generic ansatz: Pi = pi + sum over total-ghost-0 corrections with
    # at least one ghost (so the (0,0) component stays pi).  Function
    # degree 2 bounds the ghost number by 2 + dim h; the base-degree
    # bound escalates, so small corrections are found cheaply and only a
    # failure at the full bound raises.
    target = -bracket(Q, pi)
    sol = None
    for bound in range(ansatz_degree + 1):
        monos = []
        for g in range(1, S.dim_h + 3):
            monos.extend(enumerate_monomials(table, 2, g, g, bound))
        columns = []
        for mono in monos:
            img = bracket(Q, GPoly(table, {mono: Fraction(1)}))
            if img:
                columns.append((mono, img.terms))
        sol = BlockEchelon(columns).solve(target.terms)
        if sol is not None:
            break
    if sol is None:
        raise LiftNotFound("no cocycle lift in the bounded ansatz", ansatz_degree)
    Pi = pi + GPoly(table, {m: c for m, c in sol.items() if c})
    if bracket(Q, Pi):
        raise LiftNotFound("cocycle lift failed verification", ansatz_degree)
    return Pi


@dataclass
class ChargeSeries:
    """Extended charge S = Q + Pi^(0) + Pi^(-1) + ... with its residual."""

    Q: GPoly
    terms: list = field(default_factory=list)
    residual: GPoly = None
    residual_bound: int | None = None
    exact: bool = False

    @property
    def total(self) -> GPoly:
        S = self.Q
        for t in self.terms:
            S = S + t
        return S

    def term(self, k: int) -> GPoly:
        """Pi^(-k), zero when beyond the computed range."""
        if 0 <= k < len(self.terms):
            return self.terms[k]
        return GPoly.zero(self.Q.table)


def _residual_info(S_total: GPoly):
    res = Fraction(1, 2) * bracket(S_total, S_total)
    if not res:
        return res, None
    bound = max(gh for (gh, _fd) in res.grade_components())
    return res, bound


def extend_charge(S: Scenario, Q: GPoly, Pi: GPoly, k_max: int,
                  ansatz_degree: int) -> ChargeSeries:
    """Extend Q + Pi by corrections of descending total ghost number.

    After step k every residual component of total ghost number > -k
    vanishes; the iteration stops early with ``exact`` set when the whole
    residual is zero.  The stored residual is recomputed from scratch from
    the returned terms.
    """
    series = ChargeSeries(Q=Q, terms=[Pi])
    total = Q + Pi
    res, bound = _residual_info(total)
    if res and bound > 0:
        raise ShapeMismatch(
            "extend_charge requires {Q, Q} = 0 and {Q, Pi} = 0")
    for k in range(1, k_max + 1):
        res, bound = _residual_info(total)
        if not res:
            break
        target = GPoly.zero(S.table)
        for (gh, _fd), part in res.grade_components().items():
            if gh == -(k - 1):
                target = target + part
        if not target:
            series.terms.append(GPoly.zero(S.table))
            continue
        correction = solve_brst_exact(S, Q, -target, ansatz_degree,
                                      total_ghost=-k)
        series.terms.append(correction)
        total = total + correction
    res, bound = _residual_info(series.total)
    series.residual = res
    series.residual_bound = bound
    series.exact = not res
    return series
