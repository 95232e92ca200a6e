"""Exact sparse Gauss-Jordan over the rationals."""

import random
from fractions import Fraction

from sftdga.linsolve import solve_exact


def F(x):
    return Fraction(x)


def test_unique_solution():
    rows = [{0: F(1), 1: F(2)}, {0: F(3), 1: F(4)}]
    assert solve_exact(rows, 2, [F(5), F(11)]) == [F(1), F(2)]


def test_fractional_pivots():
    rows = [{0: Fraction(1, 2)}]
    assert solve_exact(rows, 1, [F(3)]) == [F(6)]


def test_inconsistent_returns_none():
    rows = [{0: F(1)}, {0: F(1)}]
    assert solve_exact(rows, 1, [F(1), F(2)]) is None
    assert solve_exact([{}], 1, [F(1)]) is None  # 0 = 1


def test_free_variables_pinned_to_zero():
    rows = [{0: F(1), 1: F(1)}]
    assert solve_exact(rows, 2, [F(3)]) == [F(3), F(0)]


def test_empty_system():
    assert solve_exact([], 3, []) == [F(0)] * 3
    assert solve_exact([{}], 2, [F(0)]) == [F(0)] * 2


def test_random_solvable_systems_verify():
    rng = random.Random(21)
    for _ in range(100):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        rows = []
        for _ in range(nrows):
            row = {j: Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                   for j in rng.sample(range(ncols), rng.randint(0, ncols))}
            rows.append({j: c for j, c in row.items() if c})
        x0 = [Fraction(rng.randint(-3, 3)) for _ in range(ncols)]
        rhs = [sum((c * x0[j] for j, c in row.items()), Fraction(0))
               for row in rows]
        sol = solve_exact(rows, ncols, rhs)
        assert sol is not None
        for row, b in zip(rows, rhs):
            assert sum((c * sol[j] for j, c in row.items()), Fraction(0)) == b
        # determinism
        assert solve_exact(rows, ncols, rhs) == sol
