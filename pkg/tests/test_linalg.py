"""Exact sparse linear algebra over the rationals."""

from fractions import Fraction

from bfvkit.linalg import EchelonSolver, kernel_columns, solve_columns


def test_solve_consistent_system():
    cols = [("a", {1: Fraction(1), 2: Fraction(1)}),
            ("b", {2: Fraction(1)}),
            ("c", {1: Fraction(2), 2: Fraction(3)})]
    target = {1: Fraction(3), 2: Fraction(5)}
    sol = solve_columns(cols, target)
    assert sol is not None
    # reconstruct
    acc = {}
    lookup = dict(cols)
    for tag, coef in sol.items():
        for k, v in lookup[tag].items():
            acc[k] = acc.get(k, 0) + coef * v
    acc = {k: v for k, v in acc.items() if v}
    assert acc == target


def test_solve_inconsistent_system():
    cols = [("a", {1: Fraction(1)})]
    assert solve_columns(cols, {2: Fraction(1)}) is None


def test_kernel_vectors_annihilate():
    cols = [(i, {0: Fraction(i + 1), 1: Fraction(2 * (i + 1))}) for i in range(4)]
    kers = kernel_columns(cols)
    assert len(kers) == 3
    lookup = dict(cols)
    for combo in kers:
        acc = {}
        for tag, coef in combo.items():
            for k, v in lookup[tag].items():
                acc[k] = acc.get(k, 0) + coef * v
        assert not any(acc.values())


def test_rank_and_residual():
    es = EchelonSolver()
    es.add_column("a", {1: Fraction(1)})
    es.add_column("b", {1: Fraction(1), 2: Fraction(1)})
    assert es.rank() == 2
    assert es.residual({1: Fraction(5), 2: Fraction(7)}) == {}
    assert es.residual({3: Fraction(1)}) == {3: Fraction(1)}


def test_solution_is_exact_rational():
    cols = [("a", {0: Fraction(1, 3)}), ("b", {0: Fraction(1, 7), 1: Fraction(1)})]
    sol = solve_columns(cols, {0: Fraction(1), 1: Fraction(0)})
    assert sol is not None
    assert all(isinstance(v, Fraction) for v in sol.values())
    acc0 = sol.get("a", 0) * Fraction(1, 3) + sol.get("b", 0) * Fraction(1, 7)
    acc1 = sol.get("b", 0)
    assert acc0 == 1 and acc1 == 0
