import numpy as np
import pytest

from orliczdist import gauge, young
from orliczdist.scaling import (classify_stability, theta, theta_value,
                                theta_right_limit, xi)
from orliczdist.sobolev import sobolev_conjugate

GRID_TOL = 1e-3


def power_fn(p):
    return gauge.power_gauge(p, 4, coeff=1.0)   # n=4 keeps validation happy


def sample_scales(rng, count):
    return np.exp(rng.uniform(np.log(1e-6), np.log(1e6), count))


def test_power_function_exact_values():
    # for h = t^p every ratio h(rt)/h(t) equals r^p
    h = power_fn(2.0)
    for r in (0.25, 0.5, 2.0, 7.5):
        assert np.isclose(theta_value(h, r, "global", kind="sup"), r ** 2,
                          rtol=1e-9)
        assert np.isclose(theta_value(h, r, "zero", kind="inf"), r ** 2,
                          rtol=1e-9)


def test_reciprocal_law(rng):
    # inf-ratio at r and sup-ratio at 1/r are exact reciprocals
    h = gauge.powerlog_gauge(1.0, 2.0, 2)
    for r in sample_scales(rng, 1000):
        lo = theta_value(h, r, "global", kind="inf")
        hi = theta_value(h, 1.0 / r, "global", kind="sup")
        assert abs(lo * hi - 1.0) < GRID_TOL


def test_submultiplicative(rng):
    # sup-ratios: theta(r1 r2) <= theta(r1) theta(r2)
    h = gauge.powerlog_gauge(1.0, 2.0, 2)
    pairs = sample_scales(rng, 2000).reshape(1000, 2)
    for r1, r2 in pairs:
        t12 = theta_value(h, r1 * r2, "global")
        t1 = theta_value(h, r1, "global")
        t2 = theta_value(h, r2, "global")
        assert t12 <= t1 * t2 * (1.0 + GRID_TOL)


def test_power_envelope(rng):
    # normalized n-dimensional gauges: ratios sit between r^n and 1 for r<1
    phi = gauge.powerlog_gauge(1.0, 1.0, 2)
    for r in np.exp(rng.uniform(np.log(1e-6), 0.0, 1000)):
        v = theta_value(phi, r, "global", kind="sup")
        assert r ** 2 * (1.0 - GRID_TOL) <= v <= 1.0 + GRID_TOL


def test_theta_regimes_distinguish():
    # h = t at zero, t^2 at infinity (log-log knee)
    from orliczdist.loglog import LogLogFunction

    def log_eval(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0, x, 2.0 * x)

    h = LogLogFunction(log_eval, -60.0, 60.0)
    r = 0.5
    assert np.isclose(theta_value(h, r, "zero", kind="sup"), 0.5, rtol=1e-6)
    assert np.isclose(theta_value(h, r, "infinity", kind="sup"), 0.25,
                      rtol=1e-6)
    # the global sup ratio still sees the knee crossing
    assert theta_value(h, 2.0, "global", kind="sup") >= 4.0 - 1e-6


def test_right_limit_close_to_value_for_smooth():
    h = power_fn(1.5)
    assert np.isclose(theta_right_limit(h, 0.3), theta_value(h, 0.3),
                      rtol=1e-4)


def test_xi_monotone():
    A = young.power(4.0)
    res = sobolev_conjugate(A, 2)
    phi = gauge.power_gauge(1.0, 2)
    from orliczdist.distortion import build_distortion
    bundle = build_distortion(A, phi, 2)
    rs = np.logspace(-8, -0.5, 40)
    vals = xi(bundle.psi, bundle.B_inverse, rs)
    assert np.all(np.diff(vals) > -1e-9 * vals[:-1])


def test_classifier_stable_vs_vanishing():
    from orliczdist.distortion import build_distortion
    # power phi: the distorted gauge keeps mass at small scales
    b1 = build_distortion(young.power(4.0), gauge.power_gauge(1.0, 2), 2)
    rep1 = classify_stability(b1.psi, b1.B_inverse)
    assert rep1.regime == "vanishing"
    assert rep1.conclusive
    # slow log gauge against power-type A: distortion cannot kill it
    b2 = build_distortion(young.power(4.0), gauge.log_gauge(1.0, 2), 2)
    rep2 = classify_stability(b2.psi, b2.B_inverse)
    assert rep2.regime == "stable"
