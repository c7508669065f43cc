"""Charges, master equations, splitting, Koszul solves, extensions."""

import copy
import random
from fractions import Fraction

import pytest

from bfvkit.engine import (build_charge_deg0, build_charge_deg1, brst_apply,
                           cocycle_lift, delta_h, delta_v, extend_charge,
                           koszul_solve, master_residual, split_dH_dV)
from bfvkit.errors import NotBihomogeneous, NotFound, PresetMismatch
from bfvkit.generators import Kind, bfv0_table
from bfvkit.gpoly import GPoly, bracket
from bfvkit.grammar import parse
from bfvkit.liedata import preset_lie


@pytest.fixture(scope="module")
def so3_Q(so3_classical):
    return build_charge_deg1(so3_classical)


@pytest.fixture(scope="session")
def bfv0_so3():
    table = bfv0_table(6, 3, base_pairs=[(1, 4), (2, 5), (3, 6)])
    J = [parse(table, "1 * x2 x6 - 1 * x3 x5"),
         parse(table, "-1 * x1 x6 + 1 * x3 x4"),
         parse(table, "1 * x1 x5 - 1 * x2 x4")]
    return table, J


# -- degree zero -------------------------------------------------------


def test_deg0_abelian_linear_moment():
    # momenta of two commuting translations: {J_i, J_j} = 0
    table = bfv0_table(4, 2, base_pairs=[(1, 3), (2, 4)])
    J = [parse(table, "1 * x3"), parse(table, "1 * x4")]
    L = preset_lie("abelian(2)")
    Q = build_charge_deg0(L, J, table)
    assert Q == parse(table, "1 * x3 c1 + 1 * x4 c2")
    assert not master_residual(Q)


def test_deg0_so3_charge_and_master(bfv0_so3):
    table, J = bfv0_so3
    Q = build_charge_deg0(preset_lie("so3"), J, table)
    # structure term -1/2 eps_{ijk} c_i c_j b_k is present
    cubic = parse(table, "-1 * c1 c2 b3 + 1 * c1 c3 b2 - 1 * c2 c3 b1")
    linear = Q - cubic
    expected_linear = GPoly.zero(table)
    for i, Ji in enumerate(J):
        expected_linear = expected_linear + Ji * GPoly.var(table, f"c{i+1}")
    assert linear == expected_linear
    assert not master_residual(Q)


def test_deg0_zero_moment_pure_cubic():
    table = bfv0_table(1, 3)
    L = preset_lie("so3")
    Q = build_charge_deg0(L, [GPoly.zero(table)] * 3, table)
    assert set(Q.kinds_used()) == {Kind.GHOST_G, Kind.ANTIGHOST_G}
    assert not master_residual(Q)  # Jacobi identity


def test_deg0_requires_bfv0_table(so3_classical):
    with pytest.raises(PresetMismatch):
        build_charge_deg0(preset_lie("so3"),
                          [GPoly.zero(so3_classical.table)] * 3,
                          so3_classical.table)


# -- degree one --------------------------------------------------------


def test_deg1_abelian_single_term(abelian_translation):
    Q = build_charge_deg1(abelian_translation)
    assert Q == parse(abelian_translation.table, "1 * e2 c1")


def test_deg1_classical_template(so3_classical, so3_Q):
    S, Q = so3_classical, so3_Q
    t = S.table
    expected = GPoly.zero(t)
    for i in range(3):
        expected = expected + S.psi[i] * GPoly.var(t, f"c{i+1}")
        expected = expected + S.J0[i] * GPoly.var(t, f"C{i+1}")
    eps = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
           (2, 1, 3): -1, (3, 2, 1): -1, (1, 3, 2): -1}
    for (i, j, k), v in eps.items():
        expected = expected - Fraction(1, 2) * v * (
            GPoly.var(t, f"c{i}") * GPoly.var(t, f"c{j}") * GPoly.var(t, f"b{k}"))
        expected = expected - v * (
            GPoly.var(t, f"c{i}") * GPoly.var(t, f"C{j}") * GPoly.var(t, f"B{k}"))
    assert Q == expected


def test_deg1_grading(so3_Q):
    assert sorted(so3_Q.grade_components()) == [(1, 2)]


def test_master_so3_and_corrupted(so3_classical, so3_Q):
    assert not master_residual(so3_Q)
    bad = copy.deepcopy(so3_classical)
    bad.lie.c[(1, 2, 3)] = Fraction(2)
    assert master_residual(build_charge_deg1(bad))


def test_brst_apply_squares_to_half_master(so3_classical, so3_Q, rng):
    from conftest import random_homogeneous

    Q = so3_Q
    for _ in range(10):
        F = random_homogeneous(so3_classical.table, rng, rng.randint(-1, 2))
        lhs = brst_apply(Q, brst_apply(Q, F))
        rhs = Fraction(1, 2) * bracket(bracket(Q, Q), F)
        assert lhs == rhs


# -- splitting ---------------------------------------------------------


def test_split_antighost_generator(so3_classical, so3_Q):
    S = so3_classical
    b1 = GPoly.var(S.table, "b1")
    dH, dV = split_dH_dV(so3_Q, b1)
    assert dV == S.psi[0]
    # the horizontal part consists of structure-constant terms
    assert dH == parse(S.table, "1 * C2 B3 - 1 * C3 B2 - 1 * b2 c3 + 1 * b3 c2")


def test_split_antighost_h_generator(so3_classical, so3_Q):
    S = so3_classical
    _dH, dV = split_dH_dV(so3_Q, GPoly.var(S.table, "B1"))
    assert dV == S.J0[0]


def test_split_invariant_function_no_vertical(so3_classical, so3_Q):
    # g-invariant multivector with nothing to lower: delta_V f = 0
    S = so3_classical
    f = parse(S.table, "1 * x1^2 + 1 * x2^2 + 1 * x3^2")
    _dH, dV = split_dH_dV(so3_Q, f)
    assert not dV


def test_split_requires_bihomogeneous(so3_classical, so3_Q):
    t = so3_classical.table
    mixed = GPoly.var(t, "b1") + GPoly.var(t, "c1") * GPoly.var(t, "b1") * GPoly.var(t, "b2")
    with pytest.raises(NotBihomogeneous):
        split_dH_dV(so3_Q, mixed)


def test_split_anticommutes(so3_classical, so3_Q, rng):
    from conftest import random_homogeneous

    t = so3_classical.table
    Q = so3_Q
    n = 0
    while n < 40:
        F = random_homogeneous(t, rng, rng.randint(-1, 2))
        comps = F.bidegree_components()
        if len(comps) != 1:
            continue
        n += 1
        assert not delta_v(Q, delta_v(Q, F))
        assert not delta_h(Q, delta_h(Q, F))
        assert not delta_h(Q, delta_v(Q, F)) + delta_v(Q, delta_h(Q, F))


# -- koszul solver -----------------------------------------------------


def test_koszul_abelian_antighost(abelian_translation):
    S = abelian_translation
    Q = build_charge_deg1(S)
    P = koszul_solve(S, Q, S.psi[0], 1)
    assert delta_v(Q, P) == S.psi[0]
    assert P == GPoly.var(S.table, "b1")


def test_koszul_round_trip(so3_classical, so3_Q, rng):
    from bfvkit.basis import enumerate_monomials

    S, Q = so3_classical, so3_Q
    monos = enumerate_monomials(S.table, 1, 0, 1, 1)
    done = 0
    while done < 15:
        pick = rng.sample(monos, 3)
        P0 = GPoly(S.table, {m: Fraction(rng.randint(-2, 2)) for m in pick})
        P0 = GPoly(S.table, {m: c for m, c in P0.terms.items() if c})
        R = delta_v(Q, P0)
        if not R:
            continue
        done += 1
        P = koszul_solve(S, Q, R, 2)
        assert delta_v(Q, P) == R


def test_koszul_constant_not_exact(so3_classical, so3_Q):
    for bound in (0, 1, 2):
        with pytest.raises(NotFound):
            koszul_solve(so3_classical, so3_Q,
                         GPoly.const(so3_classical.table, 1), bound)


# -- cocycle lift and extension ---------------------------------------


def test_lift_classical_closed_form(so3_classical, so3_Q):
    S = so3_classical
    Pi = cocycle_lift(S, so3_Q)
    corr = GPoly.zero(S.table)
    for i in (1, 2, 3):
        corr = corr + S.gen(Kind.ANTIGHOST_G, i) * S.gen(Kind.GHOST_H, i)
    assert Pi == S.pi + corr
    assert not bracket(so3_Q, Pi)
    comps = Pi.grade_components()
    assert set(comps) == {(0, 2)}
    assert Pi.bidegree_components()[(0, 0)] == S.pi


def test_lift_dgla_zero_matrix(dgla_identity):
    S = copy.deepcopy(dgla_identity)
    from bfvkit.liedata import DglaData

    S.dgla = DglaData({})
    # with A = 0 the dgla correction vanishes, but pi must still be closed;
    # that requires J0 = 0 (otherwise {Q, pi} has a C-term)
    S.J0 = [GPoly.zero(S.table)] * 3
    Q = build_charge_deg1(S)
    assert cocycle_lift(S, Q) == S.pi


def test_lift_dgla_scaled_matrix(so3_classical):
    # delta = -2 id with J0 doubled is again a hamiltonian dgla datum
    from bfvkit.liedata import DglaData

    S = copy.deepcopy(so3_classical)
    S.kind = "dgla"
    S.dgla = DglaData({(i, i): Fraction(-2) for i in (1, 2, 3)})
    S.J0 = [2 * j for j in S.J0]
    Q = build_charge_deg1(S)
    Pi = cocycle_lift(S, Q)
    corr = GPoly.zero(S.table)
    for i in (1, 2, 3):
        corr = corr + 2 * (S.gen(Kind.GHOST_H, i) * S.gen(Kind.ANTIGHOST_G, i))
    assert Pi == S.pi + corr
    assert not bracket(Q, Pi)


def test_lift_bialgebra_template(aff1_bialgebra):
    S = aff1_bialgebra
    Q = build_charge_deg1(S)
    Pi = cocycle_lift(S, Q)
    corr = GPoly.zero(S.table)
    for (j, i, k), v in S.bialgebra.a.items():
        corr = corr + v * (S.psi[i - 1] * S.gen(Kind.GHOST_G, j)
                           * S.gen(Kind.ANTIGHOST_G, k))
    assert Pi == S.pi + corr
    assert not bracket(Q, Pi)


def test_extend_so3_two_term(so3_classical, so3_Q):
    S = so3_classical
    Pi = cocycle_lift(S, so3_Q)
    series = extend_charge(S, so3_Q, Pi, 3, 4)
    assert series.exact
    assert series.terms == [Pi]
    assert not series.residual
    assert series.residual_bound is None


def test_extend_dgla_two_term(dgla_identity):
    S = dgla_identity
    Q = build_charge_deg1(S)
    Pi = cocycle_lift(S, Q)
    series = extend_charge(S, Q, Pi, 3, 4)
    assert series.exact
    assert series.terms == [Pi]


def test_extend_bialgebra_higher_terms(aff1_bialgebra):
    S = aff1_bialgebra
    Q = build_charge_deg1(S)
    Pi = cocycle_lift(S, Q)
    series = extend_charge(S, Q, Pi, 2, 4)
    assert len(series.terms) == 3  # Pi, Pi^(-1), Pi^(-2)
    assert series.terms[1]
    assert series.residual_bound is not None and series.residual_bound <= -2
    # each term is homogeneous at (total ghost -k, function degree 2)
    for k, term in enumerate(series.terms):
        if term:
            assert sorted(term.grade_components()) == [(-k, 2)]
    # residual recomputed from scratch matches, and has no component above
    # the negative of the number of correction steps
    recomputed = Fraction(1, 2) * bracket(series.total, series.total)
    assert recomputed == series.residual
    assert all(gh <= -2 for gh, _ in series.residual.grade_components())


def test_extend_quasi_exact_with_antighost_correction(quasi_chi):
    S = quasi_chi
    Q = build_charge_deg1(S)
    Pi = cocycle_lift(S, Q)
    series = extend_charge(S, Q, Pi, 2, 4)
    assert series.exact
    pm1 = series.terms[1]
    comps = pm1.bidegree_components()
    assert (0, 1) in comps and comps[(0, 1)]


def test_extend_requires_closed_input(so3_classical, so3_Q):
    from bfvkit.errors import ShapeMismatch

    bad = so3_classical.pi + GPoly.var(so3_classical.table, "c1") \
        * GPoly.var(so3_classical.table, "e1")
    with pytest.raises(ShapeMismatch):
        extend_charge(so3_classical, so3_Q, bad, 1, 2)


def test_lift_generic_ansatz_path(so3_classical):
    # same reduction data under the generic kind: no closed form is tried,
    # the bounded ansatz must find a correction with {Q, Pi} = 0
    S = copy.deepcopy(so3_classical)
    S.kind = "generalized_pair"
    Q = build_charge_deg1(S)
    Pi = cocycle_lift(S, Q, ansatz_degree=2)
    assert not bracket(Q, Pi)
    assert Pi.bidegree_components()[(0, 0)] == S.pi


def test_lift_bounded_failure_then_success(abelian_translation):
    # pi = x2^2 e1 e2 needs a base-degree-1 correction; at ansatz bound 0
    # the system is inconsistent (LiftNotFound), at bound 1 it solves
    from bfvkit.errors import LiftNotFound

    S = copy.deepcopy(abelian_translation)
    S.kind = "generalized_pair"
    S.pi = parse(S.table, "1 * x2^2 e1 e2")
    Q = build_charge_deg1(S)
    with pytest.raises(LiftNotFound):
        cocycle_lift(S, Q, ansatz_degree=0)
    Pi = cocycle_lift(S, Q, ansatz_degree=1)
    assert not bracket(Q, Pi)
    assert Pi.bidegree_components()[(0, 0)] == S.pi


def random_solvable_scenario(rng):
    """Random 2d solvable action scenarios on the line: [e1, e2] = mu e2
    realized by psi1 = -mu x1 e1 + nu e1, psi2 = e1 (mu, nu random)."""
    from bfvkit.generators import bfv1_table
    from bfvkit.liedata import LieAlgebraData
    from bfvkit.scenario import Scenario

    t = bfv1_table(1, 2, 0)
    mu = Fraction(rng.randint(-3, 3))
    nu = Fraction(rng.randint(-2, 2))
    x1, e1 = GPoly.var(t, "x1"), GPoly.var(t, "e1")
    psi1 = -mu * (x1 * e1) + nu * e1
    psi2 = e1
    L = LieAlgebraData(2, {(1, 2, 2): mu, (2, 1, 2): -mu} if mu else {})
    S = Scenario(kind="generalized_pair", n=1, table=t, pi=GPoly.zero(t),
                 psi=[psi1, psi2], J0=[], lie=L)
    return S


def test_master_iff_valid_data_randomized(rng):
    # valid structure constants + equivariant actions give {Q, Q} = 0;
    # corrupting one constant breaks it whenever the corruption changes
    # an equivariance identity
    from bfvkit.liedata import LieAlgebraData, validate_lie
    from bfvkit.scenario import check_equivariance

    for _ in range(15):
        S = random_solvable_scenario(rng)
        assert validate_lie(S.lie).passed
        assert check_equivariance(S).passed
        Q = build_charge_deg1(S)
        assert not master_residual(Q)
        bad = copy.deepcopy(S)
        delta = Fraction(rng.choice((1, 2, -1)))
        bad.lie.c[(1, 2, 2)] = bad.lie.c.get((1, 2, 2), Fraction(0)) + delta
        bad.lie.c[(2, 1, 2)] = -bad.lie.c[(1, 2, 2)]
        if not check_equivariance(bad).passed:
            assert master_residual(build_charge_deg1(bad))
