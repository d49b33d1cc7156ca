"""Young functions: convex increasing A with A(0) = 0, plus the convex
calculus around them (conjugation, inversion, growth indices, integral
growth conditions, Luxemburg norms of sampled fields).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .loglog import (LogLogFunction, TabulatedLogLog, RangeError,
                     golden_max, fit_tail_slope)

# width of the exponent band treated as numerically undecidable in the
# integral growth conditions
INCONCLUSIVE_BAND = 0.05


class YoungFunction(LogLogFunction):
    """Convex increasing function with A(0) = 0, finite on [0, inf).

    Carries the family descriptor used by serialization; ``params`` holds
    the family parameters.  Convexity and superlinearity are validated on a
    grid at construction.
    """

    def __init__(self, log_eval, family: str, params: dict,
                 log_lo=None, log_hi=None, validate: bool = True):
        from .loglog import LOG_LO, LOG_HI
        lo = LOG_LO if log_lo is None else log_lo
        hi = LOG_HI if log_hi is None else log_hi
        super().__init__(log_eval, lo, hi)
        self.family = family
        self.params = dict(params)
        if validate:
            self._validate()

    def _validate(self):
        x = np.linspace(self.log_lo, self.log_hi, 2001)
        y = self.log_at(x)
        if not np.all(np.isfinite(y)):
            raise ValueError("function must be finite and positive on (0, inf)")
        if np.any(np.diff(y) < -1e-9):
            raise ValueError("function must be increasing")
        # convexity in linear coordinates <=> slope of log A vs log t of a
        # convex function is >= 1 and A(t)/t nondecreasing; full convexity is
        # checked through second differences of A on a linear-in-log grid
        slope = np.diff(y) / np.diff(x)
        if np.any(slope < 1.0 - 1e-6):
            raise ValueError("A(t)/t must be nondecreasing (convexity)")

    def descriptor(self) -> dict:
        d = {"family": self.family}
        d.update(self.params)
        return d


class TabulatedYoung(YoungFunction, TabulatedLogLog):
    def __init__(self, logt, logf, family="table", params=None,
                 validate: bool = False):
        TabulatedLogLog.__init__(self, logt, logf)
        self.family = family
        self.params = dict(params or {})
        if validate:
            self._validate()


# -- families ----------------------------------------------------------------

def power(p: float, coeff: float = 1.0) -> YoungFunction:
    """A(t) = coeff * t**p, p >= 1."""
    if p < 1:
        raise ValueError("power family needs p >= 1")
    lc = math.log(coeff)
    return YoungFunction(lambda x: p * x + lc, "power",
                         {"p": p, "coeff": coeff})


def powerlog(p: float, q: float, coeff: float = 1.0) -> YoungFunction:
    """A(t) = coeff * t**p * log(e + t)**q.

    For q < 0 this is a genuine Young function only when p > 1 by a margin;
    the constructor validation rejects invalid combinations.
    """
    lc = math.log(coeff)

    def log_eval(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        # log(log(e + t)): stable both for tiny and huge t
        loglog = np.empty_like(x)
        big = x > 40.0
        loglog[big] = np.log(x[big])
        loglog[~big] = np.log(np.log(np.e + np.exp(x[~big])))
        return p * x + q * loglog + lc

    return YoungFunction(log_eval, "powerlog", {"p": p, "q": q, "coeff": coeff})


def exponential(gamma: float = 1.0) -> YoungFunction:
    """A(t) = exp(t**gamma) - 1 - t**gamma.

    The subtraction makes A genuinely superlinear at zero (A ~ t**(2 gamma) / 2)
    while leaving the behaviour near infinity untouched; the quantities
    computed from A only depend on that behaviour up to equivalence.
    """
    if gamma < 0.75:
        raise ValueError("gamma too small for convexity near zero")

    def log_eval(x):
        u = gamma * np.asarray(x, dtype=float)   # log of t**gamma
        out = np.empty_like(u)
        big = u > 6.4                      # v = e^u > 600
        mid = (~big) & (u > -30.0)
        small = u <= -30.0
        if big.any():
            # exp(v) - 1 - v with v > 600: the subtracted terms are
            # negligible below double precision, so log A = v
            out[big] = np.exp(np.minimum(u[big], 709.0))
        if mid.any():
            v = np.exp(u[mid])
            out[mid] = np.log(np.expm1(v) - v)
        if small.any():
            # exp(v) - 1 - v ~ v^2/2 (1 + v/3)
            out[small] = 2.0 * u[small] - math.log(2.0) + np.log1p(
                np.exp(u[small]) / 3.0)
        return out

    hi = min(700.0, 700.0 / gamma)
    return YoungFunction(log_eval, "exp", {"gamma": gamma},
                         log_lo=-600.0, log_hi=hi)


def from_table(t: np.ndarray, values: np.ndarray) -> YoungFunction:
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if np.any(t <= 0) or np.any(v <= 0):
        raise ValueError("table knots must be positive")
    return TabulatedYoung(np.log(t), np.log(v), validate=True)


def from_descriptor(d: dict) -> YoungFunction:
    fam = d.get("family")
    if fam == "power":
        return power(d["p"], d.get("coeff", 1.0))
    if fam == "powerlog":
        return powerlog(d["p"], d["q"], d.get("coeff", 1.0))
    if fam == "exp":
        return exponential(d.get("gamma", 1.0))
    if fam == "table":
        return from_table(np.asarray(d["t"]), np.asarray(d["values"]))
    raise ValueError(f"unknown function family: {fam!r}")


# -- conjugation ---------------------------------------------------------------

def conjugate(A: LogLogFunction, log_lo: float = -600.0,
              log_hi: float = 1500.0, num: int = 2400) -> YoungFunction:
    """Convex conjugate sup_tau (tau * t - A(tau)), tabulated in log-log space.

    The supremand is concave in tau, so for each t a coarse scan locates the
    peak and a golden-section pass refines it.  All arithmetic happens on
    logarithms: log(tau t - A(tau)) = log tau + log t + log1p(-exp(log A -
    log tau - log t)) wherever the difference is positive.
    """
    logt = np.linspace(log_lo, log_hi, num)
    tau_lo, tau_hi = A.log_lo - 200.0, A.log_hi + 700.0
    scan = np.linspace(tau_lo, tau_hi, 1600)
    logA_scan = A.log_at(scan)

    def log_gap(logtau, logA, lt):
        # log(tau * t - A(tau)), -inf where nonpositive
        s = logtau + lt
        d = logA - s
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = np.where(d < -1e-15, s + np.log1p(-np.exp(np.minimum(d, 0.0))),
                           -np.inf)
        return out

    # coarse scan: matrix (num_t, num_scan) would be large; loop in blocks
    best_idx = np.empty(num, dtype=int)
    block = 256
    for i in range(0, num, block):
        lt = logt[i:i + block, None]
        vals = log_gap(scan[None, :], logA_scan[None, :], lt)
        best_idx[i:i + block] = np.argmax(vals, axis=1)

    lo = scan[np.maximum(best_idx - 1, 0)]
    hi = scan[np.minimum(best_idx + 1, len(scan) - 1)]

    def f(logtau):
        return log_gap(logtau, A.log_at(logtau), logt)

    _, logconj = golden_max(f, lo, hi, iters=90)
    good = np.isfinite(logconj)
    if good.sum() < 10:
        raise ValueError("conjugate degenerate on requested range")
    out = TabulatedYoung(logt[good], logconj[good],
                         family="table", params={"kind": "conjugate"})
    return out


def inverse(A: LogLogFunction, y, rtol: float = None):
    """Certified-bisection inverse of an increasing function (op wrapper)."""
    kw = {} if rtol is None else {"rtol": rtol}
    return A.inverse(y, **kw)


# -- growth indices ------------------------------------------------------------

@dataclass
class IndexEstimate:
    value: float
    sequence: np.ndarray          # per-lambda exponent estimates
    lambdas: np.ndarray
    converged: bool
    unbounded: bool = False


def matuszewska_index(A: LogLogFunction, regime: str = "infinity",
                      max_exponent: int = 20, cap: float = 60.0,
                      depth: float = 120.0) -> IndexEstimate:
    """Lower growth exponent of A near infinity (or globally).

    For each lambda = 2, 4, ..., 2**max_exponent estimates
    inf_t log(A(lambda t)/A(t)) / log(lambda) over a deep tail grid; the
    limit as lambda grows is the index.  Reports divergence (estimate
    exceeding ``cap`` and still rising) as an unbounded index.
    """
    if regime not in ("infinity", "global"):
        raise ValueError("regime must be 'infinity' or 'global'")
    ks = np.arange(1, max_exponent + 1)
    lambdas = np.exp2(ks.astype(float))
    hi = A.log_hi
    estimates = []
    for k in ks:
        loglam = k * math.log(2.0)
        if regime == "infinity":
            # tail window just below the domain cap
            ts = np.linspace(hi - depth, hi - loglam, 400)
        else:
            ts = np.linspace(A.log_lo + 1.0, hi - loglam, 800)
        ratios = A.log_at(ts + loglam) - A.log_at(ts)
        estimates.append(float(np.min(ratios)) / loglam)
    estimates = np.array(estimates)
    tail = estimates[-4:]
    spread = float(np.max(tail) - np.min(tail))
    converged = spread < 0.02 * max(1.0, abs(tail[-1]))
    unbounded = bool(estimates[-1] > cap and estimates[-1] > estimates[-4])
    value = math.inf if unbounded else float(tail[-1])
    return IndexEstimate(value=value, sequence=estimates, lambdas=lambdas,
                         converged=converged and not unbounded,
                         unbounded=unbounded)


# -- integral growth conditions -------------------------------------------------

@dataclass
class ConditionReport:
    name: str
    holds: Optional[bool]          # None = numerically undecidable
    exponent: float                # leading log-log exponent at the window
    log_correction: float          # secondary log-of-log exponent
    detail: str = ""


def _window_exponents(g_log, window: np.ndarray):
    """Joint fit log g ~ c + m * x + kappa * log|x| over the window.

    The joint fit separates a genuine small power from a logarithmic factor,
    which sequential fitting cannot do on a finite window.
    """
    y = g_log(window)
    M = np.vstack([window, np.log(np.abs(window)),
                   np.ones_like(window)]).T
    sol, *_ = np.linalg.lstsq(M, y, rcond=None)
    return float(sol[0]), float(sol[1])


def check_condition(A: YoungFunction, n: int, which: str) -> ConditionReport:
    """Decide the integral growth conditions used by the embedding.

    ``embedding``: the tail integral of (t / A(t))**(1/(n-1)) converges
    (for n = 1: t / A(t) -> 0 at infinity).
    ``zero_divergence``: the same integrand diverges at zero
    (for n = 1: t / A(t) -> infinity at zero).
    ``positive_finite``: A positive and finite away from zero.
    """
    if which == "positive_finite":
        x = np.linspace(A.log_lo, A.log_hi, 512)
        ok = bool(np.all(np.isfinite(A.log_at(x))))
        return ConditionReport("positive_finite", ok, 0.0, 0.0)

    if n == 1:
        # slope of log(t/A) at the relevant end decides the limit
        def ratio(x):
            return x - A.log_at(x)
        if which == "embedding":
            win = np.linspace(A.log_hi - 60.0, A.log_hi - 1.0, 200)
            m, _ = fit_tail_slope(win, ratio(win))
            holds = True if m < -INCONCLUSIVE_BAND else (
                False if m > INCONCLUSIVE_BAND else None)
            return ConditionReport("embedding", holds, m, 0.0, "n=1 limit test")
        if which == "zero_divergence":
            win = np.linspace(A.log_lo + 1.0, A.log_lo + 60.0, 200)
            m, _ = fit_tail_slope(win, ratio(win))
            holds = True if m < -INCONCLUSIVE_BAND else (
                False if m > INCONCLUSIVE_BAND else None)
            return ConditionReport("zero_divergence", holds, m, 0.0,
                                   "n=1 limit test")
        raise ValueError(f"unknown condition {which!r}")

    npr = 1.0 / (n - 1.0)

    def g_log(x):
        # integrand against d(log t):  (t/A)^{1/(n-1)} * t
        return npr * (x - A.log_at(x)) + x

    if which == "embedding":
        win = np.linspace(A.log_hi - 200.0, A.log_hi - 2.0, 500)
        m, kappa = _window_exponents(g_log, win)
        if m < -INCONCLUSIVE_BAND:
            holds = True
        elif m > INCONCLUSIVE_BAND:
            holds = False
        else:
            # boundary power: decide through the log-of-log exponent
            holds = (True if kappa < -1.0 - INCONCLUSIVE_BAND else
                     False if kappa > -1.0 + INCONCLUSIVE_BAND else None)
        return ConditionReport("embedding", holds, m, kappa)

    if which == "zero_divergence":
        win = np.linspace(A.log_lo + 2.0, A.log_lo + 200.0, 500)
        m, kappa = _window_exponents(g_log, win)
        # integral toward -inf in log t diverges iff the integrand does not
        # decay in that direction (negative slope means growth as t -> 0)
        if m < -INCONCLUSIVE_BAND:
            holds = True
        elif m > INCONCLUSIVE_BAND:
            holds = False
        else:
            holds = (True if kappa > -1.0 + INCONCLUSIVE_BAND else
                     False if kappa < -1.0 - INCONCLUSIVE_BAND else None)
        return ConditionReport("zero_divergence", holds, m, kappa)

    raise ValueError(f"unknown condition {which!r}")


# -- sampled fields and Luxemburg norms -----------------------------------------

@dataclass
class FieldSample:
    """Quadrature representation of |grad u|: values with positive weights.

    ``locations`` is optional metadata (not used by the norm).
    """
    values: np.ndarray
    weights: np.ndarray
    locations: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.values.shape != self.weights.shape:
            raise ValueError("values and weights must align")
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sample values must be finite")

    def scaled(self, c: float) -> "FieldSample":
        return FieldSample(np.abs(c) * self.values, self.weights)

    @staticmethod
    def concat(samples) -> "FieldSample":
        return FieldSample(np.concatenate([s.values for s in samples]),
                           np.concatenate([s.weights for s in samples]))


def modular(sample: FieldSample, A: LogLogFunction, lam: float) -> float:
    """Integral of A(|v| / lam) against the sample weights."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    v = np.abs(sample.values)
    w = sample.weights
    pos = (v > 0) & (w > 0)
    if not pos.any():
        return 0.0
    la = A.log_at(np.log(v[pos]) - math.log(lam)) + np.log(w[pos])
    m = np.max(la)
    if m > 700.0:
        return math.inf
    return float(np.exp(m) * np.sum(np.exp(la - m)))


def luxemburg_norm(sample: FieldSample, A: LogLogFunction,
                   rtol: float = 1e-8, maxiter: int = 200) -> float:
    """inf { lam > 0 : modular(sample, A, lam) <= 1 } by bisection."""
    v = np.abs(sample.values)
    if not np.any((v > 0) & (sample.weights > 0)):
        return 0.0
    lam = max(float(np.max(v)), 1e-300)
    lo, hi = lam, lam
    for _ in range(200):
        if modular(sample, A, hi) <= 1.0:
            break
        hi *= 4.0
    else:
        raise ValueError("norm bracket expansion failed (upper)")
    for _ in range(400):
        if modular(sample, A, lo) > 1.0:
            break
        lo /= 4.0
        if lo < 1e-290:
            return 0.0
    for _ in range(maxiter):
        mid = math.sqrt(lo * hi)
        if modular(sample, A, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        if hi / lo < 1.0 + rtol:
            break
    return hi


# -- equivalence (up to constants near infinity) --------------------------------

@dataclass
class EquivalenceReport:
    equivalent: bool
    c_lower: float
    c_upper: float
    window: tuple


def equivalent_near_infinity(A: LogLogFunction, C: LogLogFunction,
                             window=(20.0, 200.0),
                             bound: float = 1e6) -> EquivalenceReport:
    """Check c1 A(t) <= C(t) <= c2 A(t) on a tail window; report best c1, c2."""
    x = np.linspace(window[0], window[1], 400)
    d = C.log_at(x) - A.log_at(x)
    c1 = float(np.exp(np.min(d)))
    c2 = float(np.exp(np.max(d)))
    ok = (c2 / max(c1, 1e-300)) < bound and c1 > 1.0 / bound and c2 < bound
    return EquivalenceReport(bool(ok), c1, c2, window)
