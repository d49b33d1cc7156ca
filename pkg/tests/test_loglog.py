import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orliczdist.loglog import (LogLogFunction, RangeError, TabulatedLogLog,
                               fit_tail_slope, golden_max)


def make_power(p, c=1.0):
    logc = np.log(c)
    return LogLogFunction(lambda x: logc + p * np.asarray(x),
                          log_lo=-50.0, log_hi=50.0)


def test_eval_matches_direct():
    f = make_power(2.5, 3.0)
    t = np.logspace(-8, 8, 40)
    assert np.allclose(f.at(t), 3.0 * t ** 2.5, rtol=1e-12)


def test_extension_is_power_law():
    # beyond the declared domain the log-log extension keeps the edge slope
    f = make_power(2.0)
    assert np.isclose(f.log_at(60.0), 120.0)
    assert np.isclose(f.log_at(-60.0), -120.0)


@given(st.floats(min_value=0.3, max_value=6.0),
       st.floats(min_value=-20.0, max_value=20.0))
@settings(max_examples=40, deadline=None)
def test_inverse_log_certified(p, logy):
    f = make_power(p)
    lx = f.inverse_log(logy)
    assert abs(f.log_at(lx) - logy) < 1e-7 * max(1.0, abs(logy))


def test_inverse_against_grid_scan_oracle():
    # oracle: nearest grid preimage on a dense grid
    f = LogLogFunction(
        lambda x: np.asarray(x) + 0.5 * np.log1p(np.exp(np.asarray(x))),
        log_lo=-30.0, log_hi=30.0)
    grid = np.linspace(-30, 30, 400001)
    vals = f.log_at(grid)
    for logy in (-20.0, -3.0, 0.0, 7.5, 25.0):
        oracle = grid[np.argmin(np.abs(vals - logy))]
        assert abs(f.inverse_log(logy) - oracle) < 2e-4


def test_inverse_out_of_range_raises():
    f = make_power(2.0)
    with pytest.raises(RangeError):
        f.inverse_log(1e7, extrapolate=False)


def test_tabulated_roundtrip_and_monotone():
    f = make_power(1.7)
    tab = f.tabulate(-20, 20, 801)
    x = np.linspace(-19, 19, 500)
    assert np.max(np.abs(tab.log_at(x) - f.log_at(x))) < 1e-9
    assert tab.is_increasing()


def test_inverse_function_axis_swap():
    f = make_power(3.0)
    inv = f.inverse_function()
    x = np.linspace(-10, 10, 50)
    assert np.allclose(inv.log_at(f.log_at(x)), x, atol=1e-8)


def test_shifted():
    f = make_power(2.0)
    g = f.shifted(np.log(5.0))
    assert np.isclose(g.at(2.0), f.at(10.0))


def test_golden_max_vectorized_quadratic():
    # maxima of -(x - c)^2 for a batch of centers
    c = np.linspace(-3, 3, 7)
    xs, vals = golden_max(lambda x: -(x - c) ** 2, np.full(7, -10.0),
                          np.full(7, 10.0))
    assert np.allclose(xs, c, atol=1e-10)
    assert np.allclose(vals, 0.0, atol=1e-18)


def test_fit_tail_slope_recovers_line():
    x = np.linspace(0, 10, 50)
    slope, intercept = fit_tail_slope(x, 4.0 - 2.5 * x)
    assert np.isclose(slope, -2.5)
    assert np.isclose(intercept, 4.0)
