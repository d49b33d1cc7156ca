"""The dimension-reduced Young function B attached to (A, n).

For n = 1, B = A.  For n >= 2, B is the convex conjugate of

    Bt(t) = t^{n'} * integral_t^inf  conj(A)(s) / s^{1 + n'} ds,
    n' = n / (n - 1),

computed here after the substitution s = t e^x, which turns the integral
into  integral_0^inf conj(A)(t e^x) e^{-n' x} dx  and makes it uniformly
well conditioned in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .loglog import LogLogFunction, TabulatedLogLog, fit_tail_slope
from .young import YoungFunction, TabulatedYoung, conjugate


@dataclass
class SobolevResult:
    B: YoungFunction
    B_inverse: LogLogFunction       # fast tabulated inverse of B
    A_conjugate: YoungFunction
    Bt: LogLogFunction              # the intermediate integral transform
    n: int


def _integral_transform(Aconj: LogLogFunction, n: int,
                        log_lo: float = -220.0, log_hi: float = 220.0,
                        num: int = 1400, x_max: float = 1200.0,
                        x_step: float = 0.25) -> TabulatedLogLog:
    """Tabulates Bt(t) = integral_0^inf Aconj(t e^x) e^{-n' x} dx in log-log.

    The integrand decays for every admissible A (the embedding condition);
    beyond ``x_max`` the remainder is estimated from the fitted decay rate
    and a divergent fit raises.
    """
    npr = n / (n - 1.0)
    logt = np.linspace(log_lo, log_hi, num)
    xs = np.arange(0.0, x_max + x_step, x_step)
    # log integrand, matrix (num, len(xs)); evaluated blockwise to bound memory
    vals = np.empty(num)
    tail_fracs = np.empty(num)
    block = 64
    for i in range(0, num, block):
        lt = logt[i:i + block, None]
        g = Aconj.log_at((lt + xs[None, :]).ravel()).reshape(lt.shape[0], len(xs))
        g = g - npr * xs[None, :]
        m = np.max(g, axis=1, keepdims=True)
        w = np.exp(g - m)
        # trapezoid in x
        core = x_step * (np.sum(w, axis=1) - 0.5 * (w[:, 0] + w[:, -1]))
        # tail beyond x_max from the local decay rate of the log-integrand.
        # genuine conjugates have non-decreasing log-log slope, so the decay
        # can only worsen with x; a far-window slope below the mid-window one
        # means the tabulated conjugate saturated (its maximizer left the
        # scan bracket) and the mid window is the trustworthy one
        kwin = max(8, int(20.0 / x_step))
        mid = int(len(xs) // 3)
        slope_far = (g[:, -1] - g[:, -1 - kwin]) / (kwin * x_step)
        slope_mid = (g[:, mid] - g[:, mid - kwin]) / (kwin * x_step)
        slope = np.maximum(slope_far, slope_mid)
        if np.any(slope > -1e-4):
            raise ValueError(
                "integral transform diverges: A grows too slowly for the "
                f"embedding at n = {n}")
        tail = w[:, -1] / (-slope)
        vals[i:i + block] = np.log(core + tail) + m[:, 0]
        tail_fracs[i:i + block] = tail / (core + tail)
    # the t^{n'} prefactor cancels against (t e^x)^{-n'} from the
    # substitution, leaving the bare integral
    logbt = vals
    out = TabulatedLogLog(logt, logbt)
    out.tail_fraction = float(np.max(tail_fracs))
    return out


def sobolev_conjugate(A: YoungFunction, n: int) -> SobolevResult:
    """Builds B (and its fast inverse) from A and the dimension n."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1:
        Binv = A.inverse_function()
        return SobolevResult(B=A, B_inverse=Binv, A_conjugate=conjugate(A),
                             Bt=A, n=1)
    Aconj = conjugate(A)
    Bt = _integral_transform(Aconj, n)
    B = conjugate(Bt, log_lo=-220.0, log_hi=220.0, num=2200)
    Binv = B.inverse_function()
    return SobolevResult(B=B, B_inverse=Binv, A_conjugate=Aconj, Bt=Bt, n=n)


def reduced_ratio_nonincreasing(res: SobolevResult, grid: int = 1500) -> bool:
    """Bt(t) / t^{n'} must be non-increasing (within interpolation noise)."""
    if res.n == 1:
        return True
    npr = res.n / (res.n - 1.0)
    x = np.linspace(res.Bt.log_lo + 1.0, res.Bt.log_hi - 1.0, grid)
    r = res.Bt.log_at(x) - npr * x
    return bool(np.all(np.diff(r) < 1e-6))


def inverse_product_bounds(res: SobolevResult, logt: np.ndarray):
    """Measured t / (B^{-1}(t) Bt^{-1}(t)), which must sit in [1/2, 1]."""
    b1 = res.B_inverse.log_at(logt)
    b2 = res.Bt.inverse_log(logt)
    return np.exp(logt - (b1 + b2))


def phi_B(res: SobolevResult, r):
    """The volume profile r -> r * B^{-1}(1/r)^n (finite-content transform)."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    rr = np.atleast_1d(r).astype(float)
    if np.any(rr <= 0):
        raise ValueError("r must be positive")
    out = np.exp(np.log(rr) + res.n * res.B_inverse.log_at(-np.log(rr)))
    return float(out[0]) if scalar else out
