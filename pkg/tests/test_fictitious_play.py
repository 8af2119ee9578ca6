from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from minimax_lab.fictitious_play import (
    FictitiousPlayState,
    InvalidStateError,
    endpoint_mixture,
    fp_step,
    run_fp,
)
from minimax_lab.games import BilinearIntervalGame, FiniteZeroSumGame, epsilon_nash_check

PENNIES = FiniteZeroSumGame(np.array([[1.0, -1.0], [-1.0, 1.0]]))
BILINEAR = BilinearIntervalGame()


def simplex_grid(dim, step):
    """All points of the probability simplex whose coordinates are multiples of ``step``."""
    k = round(1 / step)
    pts = []
    for bars in combinations(range(k + dim - 1), dim - 1):
        prev, parts = -1, []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(k + dim - 1 - prev - 1)
        pts.append(parts)
    return np.array(pts, dtype=float) / k


def grid_value_bracket(A, step):
    """(max over grid p of min_j (pA)_j, min over grid q of max_i (Aq)_i), which contains v."""
    P = simplex_grid(A.shape[0], step)
    Q = simplex_grid(A.shape[1], step)
    return float(np.min(P @ A, axis=1).max()), float(np.max(Q @ A.T, axis=1).min())


def test_simplex_grid_oracle_sizes():
    assert simplex_grid(2, 0.5).tolist() == [[0, 1], [0.5, 0.5], [1, 0]]
    assert len(simplex_grid(3, 0.1)) == 66


def test_first_step_needs_initial_actions():
    with pytest.raises(InvalidStateError):
        fp_step(FictitiousPlayState.empty(PENNIES), PENNIES)


def test_matching_pennies_hand_trace():
    s1 = fp_step(FictitiousPlayState.empty(PENNIES), PENNIES, (0, 0))
    assert s1.n == 1 and s1.counts2 == (1, 0)
    s2 = fp_step(s1, PENNIES)
    # player 2 answers mu1 = (1, 0) with column 1
    assert s2.counts2 == (1, 1)
    assert s2.history2 == (0, 1)
    assert s2.history1 == (0, 0)


def test_single_strategy_game():
    game = FiniteZeroSumGame(np.array([[5.0]]))
    s = fp_step(FictitiousPlayState.empty(game), game, (0, 0))
    for _ in range(5):
        s = fp_step(s, game)
    assert set(s.history1) == {0} and set(s.history2) == {0}
    assert s.empirical(1).tolist() == [1.0]
    assert s.average_utility == 5.0


def test_bilinear_step_follows_sign():
    s = FictitiousPlayState(n=2, history1=(1.0, 1.0), history2=(-3.0, -5.0), sum1=2.0, sum2=-8.0)
    nxt = fp_step(s, BILINEAR)
    assert nxt.history1[-1] == -10.0
    assert nxt.history2[-1] == -10.0


def test_state_is_a_value():
    s0 = fp_step(FictitiousPlayState.empty(PENNIES), PENNIES, (0, 0))
    s1 = fp_step(s0, PENNIES)
    assert s0.n == 1 and s1.n == 2
    with pytest.raises(AttributeError):
        s1.n = 7


@pytest.mark.parametrize("game", [PENNIES, FiniteZeroSumGame(np.array([[3.0, -1, 0], [-2, 4, 1], [0, 1, -3]]))])
def test_run_fp_agrees_with_stepping(game):
    trace = run_fp(game, 300)
    s = fp_step(FictitiousPlayState.empty(game), game, (0, 0))
    for _ in range(299):
        s = fp_step(s, game)
    assert trace.final_state.history1 == s.history1
    assert trace.final_state.history2 == s.history2
    np.testing.assert_array_equal(trace.emp1[-1], s.empirical(1))


def test_run_fp_bilinear_agrees_with_stepping():
    trace = run_fp(BILINEAR, 500)
    s = fp_step(FictitiousPlayState.empty(BILINEAR), BILINEAR, (0.1, 0.1))
    for _ in range(499):
        s = fp_step(s, BILINEAR)
    assert trace.final_state.history1 == s.history1
    assert trace.final_state.history2 == s.history2
    assert trace.avg_utility[-1] == pytest.approx(s.average_utility, abs=1e-12)


def test_empirical_entries_are_exact_multiples():
    game = FiniteZeroSumGame(np.array([[3.0, -1, 0], [-2, 4, 1], [0, 1, -3]]))
    trace = run_fp(game, 400)
    for k in (1, 7, 123, 400):
        for row in (trace.emp1[k - 1], trace.emp2[k - 1]):
            fr = [Fraction(v).limit_denominator(k) for v in row]
            assert all((f * k).denominator == 1 for f in fr)
            assert sum(fr) == 1
            assert abs(row.sum() - 1) <= 1e-12


def test_bilinear_actions_are_endpoints_or_zero():
    trace = run_fp(BILINEAR, 2000)
    assert set(np.unique(trace.actions1[1:])) <= {-10.0, 0.0, 10.0}
    assert set(np.unique(trace.actions2[1:])) <= {-10.0, 0.0, 10.0}
    # from (0.1, 0.1) the sums never hit exactly zero
    assert 0.0 not in set(trace.actions1[1:])


def test_bilinear_from_origin_stays_at_zero():
    trace = run_fp(BILINEAR, 50, (0.0, 0.0))
    assert np.all(trace.actions1 == 0) and np.all(trace.actions2 == 0)


def test_matching_pennies_converges():
    trace = run_fp(PENNIES, 5000)
    assert np.abs(trace.emp1[-1] - 0.5).sum() <= 0.05
    assert np.abs(trace.emp2[-1] - 0.5).sum() <= 0.05
    ok, gain = epsilon_nash_check(PENNIES, trace.emp1[-1], trace.emp2[-1], 0.05)
    assert ok, gain
    assert abs(trace.avg_utility[-1]) <= 0.05


def test_bilinear_frequencies_and_expected_utility():
    trace = run_fp(BILINEAR, 10_000)
    assert 0.49 <= trace.emp1[-1][1] <= 0.51
    assert 0.49 <= trace.emp2[-1][1] <= 0.51
    # expected utility of the empirical profile is close to the value 0
    assert abs(trace.exp_utility[-1]) <= 0.05
    p = endpoint_mixture(trace, 1)
    assert p.sum() == pytest.approx(1.0)


def test_bounds_ordered_along_trace():
    game = FiniteZeroSumGame(np.array([[3.0, -1, 0], [-2, 4, 1], [0, 1, -3]]))
    trace = run_fp(game, 1000)
    assert np.all(trace.bound_lo <= trace.bound_hi + 1e-12)


@pytest.mark.parametrize(
    "A, step",
    [
        (np.array([[1.0, -1.0], [-1.0, 1.0]]), 1e-3),
        (np.array([[2.0, -1.0], [-3.0, 4.0]]), 1e-3),
        (np.array([[3.0, -1, 0], [-2, 4, 1], [0, 1, -3]]), 1e-3),
        (np.array([[0.0, 1, -1], [-1, 0, 1], [1, -1, 0]]), 1e-3),
        # a 1e-3 grid on the 3-simplex has ~1.7e8 points; 1e-2 keeps the bracket one-sided-correct
        (np.array([[1.0, -2, 0, 3], [0, 1, -1, -2], [-1, 0, 2, 1], [2, -1, 1, -3]]), 1e-2),
    ],
)
def test_bracket_contains_grid_value(A, step):
    game = FiniteZeroSumGame(A)
    v_low, v_high = grid_value_bracket(A, step)
    trace = run_fp(game, 3000)
    lo, hi = trace.bound_lo[-1], trace.bound_hi[-1]
    assert lo <= v_high + 1e-12
    assert v_low <= hi + 1e-12
    # the realized average utility approaches the value
    assert v_low - 0.1 <= trace.avg_utility[-1] <= v_high + 0.1


def test_csv_columns():
    trace = run_fp(PENNIES, 3)
    lines = trace.to_csv().strip().splitlines()
    assert lines[0] == "n,emp_p1_0,emp_p1_1,emp_p2_0,emp_p2_1,avg_utility,bound_lo,bound_hi"
    assert len(lines) == 4
    assert lines[1].startswith("1,1.0,0.0,1.0,0.0,1.0,")
