import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orliczdist import young
from orliczdist.young import (FieldSample, check_condition, conjugate,
                              equivalent_near_infinity, luxemburg_norm,
                              matuszewska_index, modular)


def brute_conjugate_log(A, logtau, lo=-40.0, hi=40.0, num=2_000_001):
    """Oracle: dense grid sup of tau*t - A(t), in log space."""
    x = np.linspace(lo, hi, num)
    with np.errstate(over="ignore", invalid="ignore"):
        g = np.exp(logtau + x) - A.at(np.exp(x))
    g = np.where(np.isfinite(g), g, -np.inf)
    best = np.max(g)
    return np.log(best) if best > 0 else -np.inf


def test_conjugate_of_power_closed_form():
    # (t^p / p)* = tau^p' / p'
    p = 4.0
    pp = p / (p - 1.0)
    A = young.power(p, coeff=1.0 / p)
    Ac = conjugate(A)
    tau = np.logspace(-6, 6, 25)
    expect = tau ** pp / pp
    assert np.allclose(Ac.at(tau), expect, rtol=1e-8)


def test_conjugate_matches_grid_oracle():
    A = young.powerlog(2.0, 2.0)
    Ac = conjugate(A)
    for logtau in (-5.0, -1.0, 0.5, 3.0, 10.0):
        oracle = brute_conjugate_log(A, logtau)
        # knot spacing of the tabulated conjugate limits the resolution
        assert abs(Ac.log_at(logtau) - oracle) < 5e-3


def test_biconjugate_roundtrip():
    A = young.power(3.0)
    Acc = conjugate(conjugate(A))
    t = np.logspace(-4, 4, 30)
    assert np.allclose(Acc.at(t), A.at(t), rtol=1e-7)


@given(st.floats(min_value=-8.0, max_value=8.0),
       st.floats(min_value=-8.0, max_value=8.0))
@settings(max_examples=60, deadline=None)
def test_young_inequality(logt, logtau):
    # s*t <= A(t) + A*(s), the defining property of the conjugate
    A = young.powerlog(3.0, -1.0)
    Ac = conjugate(A)
    t, tau = np.exp(logt), np.exp(logtau)
    assert t * tau <= (A.at(t) + Ac.at(tau)) * (1.0 + 1e-8)


def test_exponential_family_values():
    # realized as exp(t^g) - 1 - t^g: superlinear at zero, same tail growth
    A = young.exponential(1.0)
    t = np.array([0.5, 1.0, 3.0, 10.0])
    assert np.allclose(A.at(t), np.exp(t) - 1.0 - t, rtol=1e-10)
    g2 = young.exponential(2.0)
    assert np.allclose(g2.at(t), np.exp(t ** 2) - 1.0 - t ** 2, rtol=1e-10)


def test_exponential_extreme_arguments_finite():
    A = young.exponential(1.0)
    x = np.array([-200.0, -50.0, 0.0, 5.0, np.log(600.0)])
    v = A.log_at(x)
    assert np.all(np.isfinite(v))
    assert np.all(np.diff(v) > 0)


def test_validation_rejects_sublinear():
    with pytest.raises(ValueError):
        young.power(0.5)


def test_descriptor_roundtrip():
    for A in (young.power(3.0), young.powerlog(2.0, 1.0),
              young.exponential(1.5)):
        B = young.from_descriptor(A.descriptor())
        t = np.logspace(-3, 2, 15)
        assert np.allclose(B.at(t), A.at(t), rtol=1e-10)


def test_matuszewska_index_power():
    est = matuszewska_index(young.power(4.0), "infinity")
    assert abs(est.value - 4.0) < 0.05
    est = matuszewska_index(young.powerlog(2.0, 2.0), "infinity")
    assert abs(est.value - 2.0) < 0.15


def test_matuszewska_index_exponential_unbounded():
    est = matuszewska_index(young.exponential(1.0), "infinity")
    assert est.unbounded or est.value > 30


# -- integral growth conditions ---------------------------------------------------

def test_embedding_condition_decisions():
    # t^p with p > n passes, plain t^n fails, the boundary log case passes
    assert check_condition(young.power(4.0), 2, "embedding").holds
    assert not check_condition(young.power(2.0), 2, "embedding").holds
    assert check_condition(young.powerlog(2.0, 2.0), 2, "embedding").holds
    assert not check_condition(young.powerlog(2.0, 0.5), 2, "embedding").holds
    assert check_condition(young.exponential(1.0), 2, "embedding").holds


def test_zero_divergence_condition_decisions():
    # integrand at zero is (t/A)^{1/(n-1)} t = t^n/A for n = 2: diverges
    # whenever A grows at least as fast as t^n there, fails for p < n
    assert check_condition(young.power(4.0), 2, "zero_divergence").holds
    assert check_condition(young.power(2.0), 2, "zero_divergence").holds
    assert check_condition(young.exponential(1.0), 2,
                           "zero_divergence").holds
    assert not check_condition(young.power(1.5), 2, "zero_divergence").holds


# -- Luxemburg norm ----------------------------------------------------------------

def uniform_sample(values):
    values = np.asarray(values, dtype=float)
    w = np.full_like(values, 1.0 / len(values))
    return FieldSample(values=values, weights=w)


def test_modular_simple():
    A = young.power(2.0)
    s = uniform_sample([1.0, 2.0])
    # (1^2 + 2^2) / 2 = 2.5 at lam = 1
    assert np.isclose(modular(s, A, 1.0), 2.5)


def test_luxemburg_norm_power_closed_form():
    # for A = t^p the norm is the normalized L^p norm
    A = young.power(3.0)
    vals = np.array([0.5, 1.0, 2.0, 4.0])
    s = uniform_sample(vals)
    expect = np.mean(vals ** 3) ** (1.0 / 3.0)
    assert np.isclose(luxemburg_norm(s, A), expect, rtol=1e-8)


@given(st.floats(min_value=0.1, max_value=10.0))
@settings(max_examples=30, deadline=None)
def test_luxemburg_homogeneity(c):
    A = young.powerlog(2.0, 1.0)
    s = uniform_sample([0.3, 1.0, 2.5])
    assert np.isclose(luxemburg_norm(s.scaled(c), A),
                      c * luxemburg_norm(s, A), rtol=1e-7)


def test_luxemburg_modular_at_norm_is_one():
    A = young.powerlog(2.0, 2.0)
    s = uniform_sample([0.2, 0.9, 3.0, 7.0])
    lam = luxemburg_norm(s, A)
    assert abs(modular(s, A, lam) - 1.0) < 1e-6


def test_equivalent_near_infinity():
    A = young.exponential(1.0)          # exp(t) - 1 - t
    C = young.from_table(np.logspace(-2, 2.5, 400),
                         np.expm1(np.logspace(-2, 2.5, 400)))
    rep = equivalent_near_infinity(A, C, window=(2.0, 5.5))
    assert rep.equivalent
    assert rep.c_lower <= 1.0 + 1e-9
    assert rep.c_upper < 10.0
