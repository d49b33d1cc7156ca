"""Positive increasing functions represented and manipulated in log-log space.

Everything downstream (Young functions, gauges, the distortion pipeline)
composes power-like functions whose values span hundreds of decades, so the
only numerically safe representation is ``x = log t  ->  log F(t)``.  This
module provides the shared machinery: closed-form log-evaluators, tabulated
monotone (PCHIP) interpolants with power-law extension beyond the knots, and
a certified bisection inverse.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

# Bisection defaults: certified bracketing on barely-differentiable
# tabulated functions, so no Newton.
BISECT_RTOL = 1e-8
BISECT_ATOL = 1e-12
BISECT_MAXITER = 200

# Default knot range (natural log).  exp(+/-250) is far beyond anything the
# bounds need, yet leaves ample float headroom for n-th powers of values.
LOG_LO = -250.0
LOG_HI = 250.0
DEFAULT_KNOTS = 3001


class RangeError(ValueError):
    """Requested value lies outside the attainable range of a function."""

    def __init__(self, msg, attained_lo=None, attained_hi=None):
        super().__init__(msg)
        self.attained_lo = attained_lo
        self.attained_hi = attained_hi


class LogLogFunction:
    """An increasing positive function F of a positive variable.

    ``log_at`` maps log t -> log F(t), vectorized.  Outside
    ``[log_lo, log_hi]`` evaluation extends linearly in log-log coordinates
    (a power law matching the boundary slope), which is the behaviour all
    admissible functions here have asymptotically.
    """

    def __init__(self, log_eval: Callable[[np.ndarray], np.ndarray],
                 log_lo: float = LOG_LO, log_hi: float = LOG_HI,
                 extend: bool = True):
        self._log_eval = log_eval
        self.log_lo = float(log_lo)
        self.log_hi = float(log_hi)
        self._extend = extend
        self._edge_cache: Optional[tuple] = None

    # -- evaluation ---------------------------------------------------------

    def _edges(self):
        if self._edge_cache is None:
            h = 1e-4 * (self.log_hi - self.log_lo)
            x = np.array([self.log_lo, self.log_lo + h,
                          self.log_hi - h, self.log_hi])
            y = np.asarray(self._log_eval(x), dtype=float)
            slope_lo = (y[1] - y[0]) / h
            slope_hi = (y[3] - y[2]) / h
            self._edge_cache = (y[0], slope_lo, y[3], slope_hi)
        return self._edge_cache

    def log_at(self, logt):
        logt = np.asarray(logt, dtype=float)
        scalar = logt.ndim == 0
        x = np.atleast_1d(logt)
        out = np.empty_like(x)
        inside = (x >= self.log_lo) & (x <= self.log_hi)
        if inside.any():
            out[inside] = self._log_eval(x[inside])
        if not inside.all():
            if not self._extend:
                raise RangeError("evaluation outside domain "
                                 f"[{self.log_lo}, {self.log_hi}]")
            y_lo, s_lo, y_hi, s_hi = self._edges()
            below = x < self.log_lo
            above = x > self.log_hi
            out[below] = y_lo + s_lo * (x[below] - self.log_lo)
            out[above] = y_hi + s_hi * (x[above] - self.log_hi)
        return float(out[0]) if scalar else out

    def at(self, t):
        """Evaluate F(t) in linear coordinates (t > 0; F(0) = 0)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        if np.any(tt < 0):
            raise ValueError("negative argument")
        out = np.zeros_like(tt)
        pos = tt > 0
        out[pos] = np.exp(self.log_at(np.log(tt[pos])))
        return float(out[0]) if scalar else out

    __call__ = at

    # -- inversion ----------------------------------------------------------

    def inverse_log(self, logy, rtol: float = BISECT_RTOL,
                    maxiter: int = BISECT_MAXITER,
                    extrapolate: bool = True):
        """Certified bisection inverse in log coordinates.

        Returns log t with |F(t) - y| <= rtol * y in relative terms,
        i.e. |log F(t) - log y| <= ~rtol.  With ``extrapolate`` the bracket
        may extend beyond the nominal domain along the power-law tails.
        """
        logy = np.asarray(logy, dtype=float)
        scalar = logy.ndim == 0
        y = np.atleast_1d(logy).astype(float)

        pad = 500.0 if extrapolate else 0.0
        lo = np.full_like(y, self.log_lo - pad)
        hi = np.full_like(y, self.log_hi + pad)
        f_lo = self.log_at(lo)
        f_hi = self.log_at(hi)
        bad = (y < f_lo - 1e-9) | (y > f_hi + 1e-9)
        if np.any(bad):
            raise RangeError(
                "target outside attainable range",
                attained_lo=float(np.min(f_lo)), attained_hi=float(np.max(f_hi)))
        for _ in range(maxiter):
            mid = 0.5 * (lo + hi)
            f_mid = self.log_at(mid)
            too_low = f_mid < y
            lo = np.where(too_low, mid, lo)
            hi = np.where(too_low, hi, mid)
            if np.max(hi - lo) < max(rtol, 1e-15):
                break
        mid = 0.5 * (lo + hi)
        return float(mid[0]) if scalar else mid

    def inverse(self, y, rtol: float = BISECT_RTOL,
                atol: float = BISECT_ATOL, extrapolate: bool = False):
        """Solve F(t) = y for t >= 0 by certified bisection."""
        if np.ndim(y) == 0:
            if y < 0:
                raise RangeError("negative target")
            if y == 0:
                return 0.0
            if y <= atol:
                return 0.0
            return float(np.exp(self.inverse_log(np.log(y), rtol=rtol,
                                                 extrapolate=extrapolate)))
        y = np.asarray(y, dtype=float)
        return np.array([self.inverse(v, rtol=rtol, atol=atol,
                                      extrapolate=extrapolate) for v in y])

    # -- derived representations --------------------------------------------

    def tabulate(self, log_lo=None, log_hi=None, num: int = DEFAULT_KNOTS):
        lo = self.log_lo if log_lo is None else log_lo
        hi = self.log_hi if log_hi is None else log_hi
        x = np.linspace(lo, hi, num)
        return TabulatedLogLog(x, self.log_at(x))

    def inverse_function(self, num: int = DEFAULT_KNOTS) -> "TabulatedLogLog":
        """Fast inverse: swap the axes of a tabulation (F must be increasing)."""
        x = np.linspace(self.log_lo, self.log_hi, num)
        y = self.log_at(x)
        return TabulatedLogLog(y, x)

    def shifted(self, logk: float) -> "LogLogFunction":
        """The function t -> F(k t), i.e. log-argument shifted by log k."""
        return LogLogFunction(lambda x: self.log_at(x + logk),
                              self.log_lo - logk, self.log_hi - logk)


class TabulatedLogLog(LogLogFunction):
    """Shape-preserving monotone interpolant of (log t, log F) knots."""

    def __init__(self, logt: np.ndarray, logf: np.ndarray):
        logt = np.asarray(logt, dtype=float)
        logf = np.asarray(logf, dtype=float)
        keep = np.isfinite(logt) & np.isfinite(logf)
        logt, logf = logt[keep], logf[keep]
        order = np.argsort(logt)
        logt, logf = logt[order], logf[order]
        # collapse duplicate abscissae and enforce strict monotonicity of
        # the values (flat stretches get a negligible positive slope so the
        # inverse stays well defined)
        dup = np.concatenate([[True], np.diff(logt) > 1e-13])
        logt, logf = logt[dup], logf[dup]
        logf = np.maximum.accumulate(logf)
        eps = 1e-13 * np.arange(len(logf))
        logf = logf + eps
        if len(logt) < 4:
            raise ValueError("need at least 4 knots")
        self.knots_x = logt
        self.knots_y = logf
        interp = PchipInterpolator(logt, logf, extrapolate=False)
        super().__init__(lambda x: interp(x), logt[0], logt[-1])

    def is_increasing(self) -> bool:
        return bool(np.all(np.diff(self.knots_y) > 0))


def golden_max(f, lo, hi, iters: int = 80):
    """Vectorized golden-section maximization of a unimodal family.

    ``f`` maps an array of abscissae to an array of values; ``lo`` and
    ``hi`` are per-component brackets.  Returns (argmax, max).
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(iters):
        take_left = f1 >= f2
        hi = np.where(take_left, x2, hi)
        lo = np.where(take_left, lo, x1)
        x1n = hi - invphi * (hi - lo)
        x2n = lo + invphi * (hi - lo)
        # only one endpoint moves per side; re-evaluate both for simplicity
        f1 = f(x1n)
        f2 = f(x2n)
        x1, x2 = x1n, x2n
    xm = 0.5 * (lo + hi)
    return xm, f(xm)


def fit_tail_slope(x: np.ndarray, y: np.ndarray):
    """Least-squares slope of y against x (used for regime fits)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(sol[0]), float(sol[1])
