import math

import numpy as np
import pytest

from minimax_lab.gda import (
    GdaState,
    clipped_gda_step,
    closed_form_path,
    closed_form_trajectory,
    divergence_threshold_step,
    gda_step,
    run_gda,
)


def iterate(x, y, step, n):
    """Plain-float oracle for the linear map, independent of GdaState."""
    for _ in range(n):
        x, y = x + step * y, y - step * x
    return x, y


def test_step_examples():
    s = gda_step(GdaState(0.1, 0.1, 0.01))
    assert (s.x, s.y, s.n) == pytest.approx((0.101, 0.099, 1), abs=1e-15)
    z = gda_step(GdaState(0.0, 0.0, 0.37))
    assert (z.x, z.y) == (0.0, 0.0)
    a = gda_step(GdaState(1.0, 0.0, 1.0))
    assert (a.x, a.y) == (1.0, -1.0)
    b = gda_step(a)
    assert (b.x, b.y) == (0.0, -2.0)


def test_step_must_be_positive():
    with pytest.raises(ValueError):
        GdaState(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        GdaState(1.0, 1.0, math.inf)


def test_closed_form_small_n():
    assert closed_form_trajectory(0.1, 0.1, 0.01, 0) == pytest.approx((0.1, 0.1), rel=1e-15)
    assert closed_form_trajectory(0.1, 0.1, 0.01, 1) == pytest.approx((0.101, 0.099), rel=1e-13)
    assert closed_form_trajectory(1.0, 0.0, 1.0, 2) == pytest.approx((0.0, -2.0), abs=1e-12)


def test_closed_form_norm_law():
    x, y = closed_form_trajectory(0.1, 0.1, 0.01, 1000)
    expected = 1.0001**500 * math.sqrt(0.02)
    assert math.hypot(x, y) == pytest.approx(expected, rel=1e-12)
    xi, yi = iterate(0.1, 0.1, 0.01, 1000)
    assert math.hypot(xi, yi) == pytest.approx(expected, rel=1e-9)


def test_closed_form_rejects_origin():
    with pytest.raises(ValueError):
        closed_form_trajectory(0.0, 0.0, 0.1, 3)


@pytest.mark.parametrize("step", [0.001, 0.01, 0.1])
@pytest.mark.parametrize("start", [(0.1, 0.1), (1.0, 0.0), (0.0, -2.0), (-0.3, 0.7)])
def test_closed_form_matches_iteration(step, start):
    x, y = start
    ns = [0, 1, 2, 10, 100, 1000, 10_000]
    r0 = math.hypot(x, y)
    for n in ns:
        xi, yi = iterate(x, y, step, n)
        xc, yc = closed_form_trajectory(x, y, step, n)
        scale = r0 * (1 + step * step) ** (n / 2)
        # componentwise relative to the iterate's size (components pass through zero)
        assert abs(xc - xi) <= 1e-9 * scale
        assert abs(yc - yi) <= 1e-9 * scale


@pytest.mark.parametrize("step", [0.001, 0.01, 0.1, 0.5])
def test_one_step_norm_ratio(step):
    s = GdaState(0.3, -0.7, step)
    for _ in range(200):
        nxt = gda_step(s)
        assert nxt.norm / s.norm == pytest.approx(math.sqrt(1 + step * step), rel=1e-12)
        s = nxt


def test_run_gda_norm_grows_from_default_start():
    trace = run_gda(0.1, 0.1, 0.01, 10_000)
    # growth is only 1.0001**5000 ~ 1.65 by n = 1e4, well short of the 10x flag
    assert not trace.divergence_flag
    assert np.all(np.diff(trace.norm) > 0)
    assert trace.norm[-1] / trace.norm[0] == pytest.approx(1.0001**5000, rel=1e-9)


def test_run_gda_origin_never_moves():
    trace = run_gda(0.0, 0.0, 0.01, 500)
    assert not trace.divergence_flag
    assert np.all(trace.x == 0) and np.all(trace.y == 0)


def test_divergence_flag_trips_exactly_at_threshold():
    step = 0.01
    n0 = divergence_threshold_step(step)
    assert (1 + step**2) ** (n0 / 2) > 10 >= (1 + step**2) ** ((n0 - 1) / 2)
    assert not run_gda(0.1, 0.1, step, n0 - 1).divergence_flag
    trace = run_gda(0.1, 0.1, step, n0)
    assert trace.divergence_flag and trace.divergence_step == n0


def test_xy_changes_sign_every_window():
    step = 0.01
    trace = run_gda(0.1, 0.1, step, 10_000)
    xy = trace.xy
    window = math.ceil(2 * math.pi / math.atan(step))
    for start in range(0, xy.size - window, 97):
        w = xy[start : start + window]
        assert w.max() > 0 and w.min() < 0


def test_clipped_variant_stays_in_box():
    s = GdaState(9.0, 9.0, 0.5)
    for _ in range(100):
        s = clipped_gda_step(s)
        assert abs(s.x) <= 10 and abs(s.y) <= 10


def test_csv_header():
    text = run_gda(0.1, 0.1, 0.01, 2).to_csv().splitlines()
    assert text[0] == "n,x,y,xy,norm"
    assert len(text) == 4


def test_closed_form_path_matches_scalar():
    xs, ys = closed_form_path(0.3, -0.2, 0.05, 500)
    for n in (0, 1, 17, 500):
        x, y = closed_form_trajectory(0.3, -0.2, 0.05, n)
        assert xs[n] == pytest.approx(x, rel=1e-12, abs=1e-15)
        assert ys[n] == pytest.approx(y, rel=1e-12, abs=1e-15)
