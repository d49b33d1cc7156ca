"""Closed-form small-radius asymptotics of the distorted gauge for the
standard input families, exponent fitting, and numeric-vs-form crosschecks.

The forms are log-power shapes

    C * r^a * log(1/r)^b * loglog(1/r)^c        (r -> 0+)

covering the four families of worked inputs: power-log Young functions with
super-dimensional power, the critical power with logarithmic refinement,
exponential Young functions, and the fast-growth / slowly-varying-gauge
regime where distortion leaves the gauge unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .loglog import LogLogFunction
from .young import YoungFunction, matuszewska_index
from .gauge import GaugeFunction


@dataclass
class LogPowerForm:
    """C * r^a * log(1/r)^b * loglog(1/r)^c near zero."""
    a: float
    b: float = 0.0
    c: float = 0.0
    C: float = 1.0
    flags: tuple = ()

    def log_at(self, logr):
        x = np.asarray(logr, dtype=float)
        if np.any(x > -1.1):
            raise ValueError("form is only meaningful for small radii")
        L = -x
        out = math.log(self.C) + self.a * x + self.b * np.log(L)
        if self.c != 0.0:
            out = out + self.c * np.log(np.log(L))
        return out

    def at(self, r):
        return np.exp(self.log_at(np.log(np.asarray(r, dtype=float))))

    def describe(self) -> str:
        parts = []
        if self.a:
            parts.append(f"r^{self.a:g}")
        if self.b:
            parts.append(f"log(1/r)^{self.b:g}")
        if self.c:
            parts.append(f"loglog(1/r)^{self.c:g}")
        return " * ".join(parts) if parts else "1"


def distort_form(kind: str, n: int, *, p: float = None, q: float = 0.0,
                 gamma: float = None, alpha: float = None,
                 beta: float = 0.0) -> LogPowerForm:
    """Known small-radius shape of psi for gauge r^alpha log(1/r)^beta.

    kind:
      'superdim'  A = t^p log^q (p > n)
      'critical'  A = t^n log^q (q > n-1)
      'expgrowth' A ~ exp(t^gamma)
      'stable'    fast-growth A with slowly varying gauge: psi ~ phi
    """
    if alpha is None:
        raise ValueError("alpha required")
    flags = ()
    if kind == "superdim":
        if p is None or p <= n:
            raise ValueError("needs p > n")
        if alpha == n:
            if beta > 0:
                return LogPowerForm(a=n, b=beta * (p - n) / p, c=q * n / p)
            if beta == 0:
                return LogPowerForm(a=n)
            raise ValueError("alpha = n needs beta >= 0")
        if alpha == 0 and q != 0.0:
            # logarithmic gauge with a log-refined Young function: the
            # leading shape below is the power-scaling prediction only
            flags = ("log_refinement_untracked",)
        denom = p + alpha - n
        return LogPowerForm(a=alpha * p / denom,
                            b=(alpha * q + beta * (p - n)) / denom,
                            flags=flags)
    if kind == "critical":
        if q <= n - 1:
            raise ValueError("needs q > n - 1")
        if alpha == 0:
            if beta >= 0:
                raise ValueError("alpha = 0 needs beta < 0")
            return LogPowerForm(a=n * beta / (beta + (n - 1) - q))
        if alpha == n:
            if beta > 0:
                return LogPowerForm(a=n, c=q - (n - 1))
            return LogPowerForm(a=n)
        return LogPowerForm(a=n, b=q - (n - 1))
    if kind == "expgrowth":
        if gamma is None or gamma <= 0:
            raise ValueError("needs gamma > 0")
        if alpha == n:
            if beta > 0:
                return LogPowerForm(a=n, b=beta, c=-n / gamma)
            return LogPowerForm(a=n)
        return LogPowerForm(a=alpha, b=beta - alpha / gamma)
    if kind == "stable":
        return LogPowerForm(a=alpha, b=beta)
    raise ValueError(f"unknown form kind {kind!r}")


def classify_input(A: YoungFunction, n: int) -> str:
    """Best-effort mapping of a Young function onto a form kind."""
    if A.family == "power":
        return "superdim" if A.params["p"] > n else "critical"
    if A.family == "powerlog":
        p = A.params["p"]
        if p > n:
            return "superdim"
        if p == n:
            return "critical"
        raise ValueError("power below dimension is outside the theory")
    if A.family == "exp":
        return "expgrowth"
    idx = matuszewska_index(A, "infinity")
    if idx.unbounded or idx.value > n:
        return "stable"
    raise ValueError("cannot classify this Young function")


# -- fitting and crosschecks -------------------------------------------------------

@dataclass
class ExponentFit:
    a: float
    b: float
    c: float
    logC: float
    residual: float          # rms residual of the fit in log space


def fit_exponents(r: np.ndarray, values: np.ndarray,
                  with_loglog: bool = False) -> ExponentFit:
    """Least-squares log-power fit  values ~ C r^a log(1/r)^b [loglog^c]."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(values, dtype=float)
    if np.any(r <= 0) or np.any(r >= 0.3) or np.any(v <= 0):
        raise ValueError("fit wants radii well below 1 and positive values")
    x = np.log(r)
    L = -x
    cols = [x, np.log(L), np.ones_like(x)]
    if with_loglog:
        cols.insert(2, np.log(np.log(L)))
    M = np.vstack(cols).T
    sol, *_ = np.linalg.lstsq(M, np.log(v), rcond=None)
    resid = float(np.sqrt(np.mean((M @ sol - np.log(v)) ** 2)))
    if with_loglog:
        a, b, c, logC = sol
    else:
        a, b, logC = sol
        c = 0.0
    return ExponentFit(a=float(a), b=float(b), c=float(c),
                       logC=float(logC), residual=resid)


def fit_power_slope(r: np.ndarray, values: np.ndarray) -> float:
    """Pure power-law slope of values against r in log-log."""
    x = np.log(np.asarray(r, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    M = np.vstack([x, np.ones_like(x)]).T
    sol, *_ = np.linalg.lstsq(M, y, rcond=None)
    return float(sol[0])


@dataclass
class CrosscheckReport:
    spread: float                # max - min of the log ratio over the window
    drift: float                 # fitted slope of the log ratio vs log r
    mean_log_ratio: float
    window_log10: tuple
    n_points: int


def crosscheck(numeric: LogLogFunction, form: LogPowerForm,
               r_hi: float = 1e-6, decades: float = 3.0,
               num: int = 200) -> CrosscheckReport:
    """Compares a numeric gauge against a closed form over a log window.

    The spread of the log ratio measures agreement up to a constant, which
    is the right notion for gauges defined up to equivalence.
    """
    if r_hi >= 0.3:
        raise ValueError("window must sit near zero")
    logr = np.linspace(math.log(r_hi) - decades * math.log(10.0),
                       math.log(r_hi), num)
    d = numeric.log_at(logr) - form.log_at(logr)
    from .loglog import fit_tail_slope
    drift, _ = fit_tail_slope(logr, d)
    return CrosscheckReport(spread=float(np.max(d) - np.min(d)),
                            drift=float(drift),
                            mean_log_ratio=float(np.mean(d)),
                            window_log10=(math.log10(r_hi) - decades,
                                          math.log10(r_hi)),
                            n_points=num)
