import numpy as np
import pytest

from orliczdist import young
from orliczdist.sobolev import (inverse_product_bounds, phi_B,
                                reduced_ratio_nonincreasing,
                                sobolev_conjugate)


def test_power_input_gives_power_output():
    # dimensional reduction of t^p keeps the growth order p (n < p)
    res = sobolev_conjugate(young.power(4.0), 2)
    x = np.linspace(-8, 8, 200)
    slope = np.polyfit(x, res.B.log_at(x), 1)[0]
    assert abs(slope - 4.0) < 0.02


def test_dimension_one_is_identity():
    A = young.powerlog(2.0, 2.0)
    res = sobolev_conjugate(A, 1)
    t = np.logspace(-4, 3, 40)
    assert np.allclose(res.B.at(t), A.at(t), rtol=1e-10)


def test_B_inverse_consistency():
    res = sobolev_conjugate(young.power(3.0), 2)
    y = np.logspace(-5, 5, 30)
    assert np.allclose(res.B.at(res.B_inverse.at(y)), y, rtol=1e-5)


def test_reduced_ratio_nonincreasing():
    for A in (young.power(4.0), young.powerlog(2.0, 2.0),
              young.exponential(1.0)):
        res = sobolev_conjugate(A, 2)
        assert reduced_ratio_nonincreasing(res)


def test_inverse_product_bracket():
    # t/2 <= B^{-1}(t) Bt^{-1}(t) <= t
    res = sobolev_conjugate(young.power(4.0), 2)
    logt = np.linspace(-20.0, 20.0, 100)
    vals = inverse_product_bounds(res, logt)
    assert vals.min() >= 0.5 - 1e-6
    assert vals.max() <= 1.0 + 1e-6


def test_embedding_failure_raises():
    # plain t^n has no embedding gain; the tail integral diverges
    with pytest.raises(ValueError):
        sobolev_conjugate(young.power(2.0), 2)


def test_phi_B_power_case():
    # for B ~ t^p: phi_B(r) = r (B^{-1}(1/r))^n ~ r^{1 - n/p}
    res = sobolev_conjugate(young.power(4.0), 2)
    r = np.logspace(-9, -2, 50)
    v = phi_B(res, r)
    slope = np.polyfit(np.log(r), np.log(v), 1)[0]
    assert abs(slope - 0.5) < 0.01


def test_exponential_reduction_finite():
    res = sobolev_conjugate(young.exponential(1.0), 2)
    x = np.linspace(-5, 8, 100)
    v = res.B.log_at(x)
    assert np.all(np.isfinite(v))
    assert np.all(np.diff(v) > 0)
