from fractions import Fraction

import numpy as np
import pytest

from meandim.simplex import solve_lp, solve_matrix_game


def test_lp_basic_max():
    # max x + y st x + 2y <= 4, 3x + y <= 6 -> x=8/5, y=6/5, value 14/5
    value, x = solve_lp([1, 1], [[1, 2], [3, 1]], [4, 6], [], [])
    assert value == Fraction(14, 5)
    assert x == [Fraction(8, 5), Fraction(6, 5)]


def test_lp_with_equality():
    # max x st x + y = 1 -> x = 1
    value, x = solve_lp([1, 0], [], [], [[1, 1]], [1])
    assert value == 1


def test_lp_infeasible():
    with pytest.raises(ValueError, match="infeasible"):
        solve_lp([1], [[1]], [-1], [], [])


def test_lp_unbounded():
    with pytest.raises(ValueError, match="unbounded"):
        solve_lp([1], [[-1]], [1], [], [])


def test_matching_pennies_value_zero():
    sol = solve_matrix_game([[1, -1], [-1, 1]])
    assert sol.value == 0
    assert sol.gap == 0
    assert sol.slack_residual == 0
    assert sol.p == (Fraction(1, 2), Fraction(1, 2))


def test_constant_row_game():
    sol = solve_matrix_game([[Fraction(7, 10)] * 3])
    assert sol.value == Fraction(7, 10)
    assert sol.gap == 0


def test_game_value_between_pure_strategies():
    rng = np.random.default_rng(5)
    for _ in range(20):
        A = rng.uniform(-1, 1, size=(3, 4))
        sol = solve_matrix_game(A.tolist())
        v = float(sol.value)
        # value >= best pure column (delta measures are feasible)
        best_pure = max(min(A[j, i] for j in range(3)) for i in range(4))
        assert v >= best_pure - 1e-12
        # value <= best response to the dual mix
        assert sol.gap == 0
        assert sol.slack_residual == 0


def test_game_monotone_in_rows():
    rng = np.random.default_rng(9)
    A = rng.uniform(-1, 1, size=(2, 4)).tolist()
    extra = rng.uniform(-1, 1, size=4).tolist()
    v1 = solve_matrix_game(A).value
    v2 = solve_matrix_game(A + [extra]).value
    assert v2 <= v1  # more rows, min over a larger set


def test_game_monotone_in_columns():
    rng = np.random.default_rng(11)
    A = rng.uniform(-1, 1, size=(3, 3))
    extra = rng.uniform(-1, 1, size=(3, 1))
    v1 = solve_matrix_game(A.tolist()).value
    v2 = solve_matrix_game(np.hstack([A, extra]).tolist()).value
    assert v2 >= v1  # more support, max over a larger simplex
