"""Gauges: increasing continuous functions of a radius with phi(0) = 0,
used to weigh covering sets by their diameters.

A gauge is admissible for dimension n when phi(r)/r^n stays bounded away
from zero near zero; computations additionally want the normalized version
whose ratio phi(r)/r^n is non-increasing.  Construction applies that
normalization automatically (the raw gauge is kept for reporting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .loglog import LogLogFunction, TabulatedLogLog, fit_tail_slope

RATIO_TOL = 1e-9


class GaugeFunction(LogLogFunction):
    """Increasing gauge with dimension tag n.

    ``raw`` retains the pre-normalization gauge whenever normalization
    actually changed anything.
    """

    def __init__(self, log_eval, n: int, family: str, params: dict,
                 log_lo=-160.0, log_hi=12.0, normalize: bool = True,
                 validate: bool = True):
        super().__init__(log_eval, log_lo, log_hi)
        self.n = int(n)
        self.family = family
        self.params = dict(params)
        self.raw: Optional[LogLogFunction] = None
        if validate:
            self._validate()
        if normalize:
            self._normalize_in_place()

    def _validate(self):
        x = np.linspace(self.log_lo, self.log_hi, 2001)
        y = self.log_at(x)
        if not np.all(np.isfinite(y)):
            raise ValueError("gauge must be positive and finite on its range")
        if np.any(np.diff(y) < -1e-9):
            raise ValueError("gauge must be increasing")
        # liminf phi(r)/r^n > 0 near zero: the head slope of log phi cannot
        # exceed n
        head = x[:200]
        m, _ = fit_tail_slope(head, self.log_at(head))
        if m > self.n + 1e-6:
            raise ValueError(
                f"gauge vanishes faster than r^{self.n} at zero (slope {m:.3f})")

    def _ratio_excess(self, grid=4001):
        x = np.linspace(self.log_lo, self.log_hi, grid)
        r = self.log_at(x) - self.n * x          # log of phi(r)/r^n
        return x, r, float(np.max(r - np.minimum.accumulate(r)))

    def _normalize_in_place(self):
        x, r, excess = self._ratio_excess()
        if excess <= RATIO_TOL:
            return
        self.raw = LogLogFunction(self._log_eval, self.log_lo, self.log_hi)
        fixed = np.minimum.accumulate(r) + self.n * x
        interp = TabulatedLogLog(x, fixed)
        self._log_eval = interp.log_at
        self._edge_cache = None

    def ratio_nonincreasing(self) -> bool:
        _, _, excess = self._ratio_excess()
        return excess <= 1e-7

    def scaled(self, k: float) -> "GaugeFunction":
        """The gauge t -> phi(k t)."""
        if k <= 0:
            raise ValueError("scale factor must be positive")
        lk = math.log(k)
        return GaugeFunction(lambda x: self.log_at(x + lk), self.n,
                             self.family, dict(self.params, scale=k),
                             self.log_lo - lk, self.log_hi - lk,
                             normalize=False, validate=False)

    def descriptor(self) -> dict:
        d = {"family": self.family, "n": self.n}
        d.update(self.params)
        return d


class TabulatedGauge(GaugeFunction):
    def __init__(self, logr, logphi, n, family="table", params=None,
                 normalize=True):
        interp = TabulatedLogLog(np.asarray(logr), np.asarray(logphi))
        super().__init__(interp.log_at, n, family, params or {},
                         log_lo=interp.log_lo, log_hi=interp.log_hi,
                         normalize=normalize, validate=True)


# -- families -------------------------------------------------------------------

def power_gauge(alpha: float, n: int, coeff: float = 1.0) -> GaugeFunction:
    """phi(r) = coeff * r**alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lc = math.log(coeff)
    return GaugeFunction(lambda x: alpha * x + lc, n, "power",
                         {"alpha": alpha, "coeff": coeff})


def powerlog_gauge(alpha: float, beta: float, n: int,
                   coeff: float = 1.0) -> GaugeFunction:
    """phi(r) = coeff * r**alpha * log(e + 1/r)**beta near zero.

    alpha = 0 with beta < 0 gives the purely logarithmic gauges.
    """
    lc = math.log(coeff)

    def log_eval(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        # log(log(e + 1/r)) with r = e^x: for very small r this is ~ log(-x)
        u = np.empty_like(x)
        tiny = x < -40.0
        u[tiny] = np.log(-x[tiny])
        u[~tiny] = np.log(np.log(np.e + np.exp(-x[~tiny])))
        return alpha * x + beta * u + lc

    hi = 8.0
    if alpha == 0.0:
        if beta >= 0:
            raise ValueError("alpha = 0 requires beta < 0 for an "
                             "increasing vanishing gauge")
    return GaugeFunction(log_eval, n, "powerlog",
                         {"alpha": alpha, "beta": beta, "coeff": coeff},
                         log_hi=hi)


def log_gauge(nu: float, n: int) -> GaugeFunction:
    """phi(r) = (log2 (1/r))**(-nu) for r < 1 (the slow gauges of the
    lacunary construction); implemented as a powerlog gauge with alpha = 0
    up to the base-change constant."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    return powerlog_gauge(0.0, -nu, n, coeff=math.log(2.0) ** nu)


def from_descriptor(d: dict) -> GaugeFunction:
    fam = d.get("family")
    n = int(d["n"])
    if fam == "power":
        return power_gauge(d["alpha"], n, d.get("coeff", 1.0))
    if fam == "powerlog":
        return powerlog_gauge(d["alpha"], d["beta"], n, d.get("coeff", 1.0))
    if fam == "log":
        return log_gauge(d["nu"], n)
    if fam == "table":
        r = np.asarray(d["r"], dtype=float)
        v = np.asarray(d["values"], dtype=float)
        return TabulatedGauge(np.log(r), np.log(v), n)
    raise ValueError(f"unknown gauge family: {fam!r}")


# -- checks and ops ---------------------------------------------------------------

@dataclass
class GaugeReport:
    nontrivial: Optional[bool]        # liminf phi/r^n > 0 at zero
    ratio_nonincreasing: bool
    beyond_volume: Optional[bool]     # lim phi(r)/r^n = inf at zero
    head_exponent: float
    scaling_constant: float           # measured sup phi(kr)/phi(r) bound check


def normalize_gauge(phi: GaugeFunction) -> GaugeFunction:
    """Largest gauge below phi whose ratio to r^n is non-increasing."""
    g = GaugeFunction(phi.log_at, phi.n, phi.family, phi.params,
                      phi.log_lo, phi.log_hi, normalize=True, validate=False)
    return g


def scale_gauge(phi: GaugeFunction, k: float) -> GaugeFunction:
    return phi.scaled(k)


def check_gauge(phi: GaugeFunction, k: float = 3.0) -> GaugeReport:
    x = np.linspace(phi.log_lo, phi.log_lo + 60.0, 300)
    m, _ = fit_tail_slope(x, phi.log_at(x))
    nontrivial = (True if m < phi.n - 0.02 else
                  None if m < phi.n + 0.02 else False)
    if nontrivial is None:
        # boundary power: compare the actual ratio level, not the slope
        head = phi.log_at(phi.log_lo + 1.0) - phi.n * (phi.log_lo + 1.0)
        nontrivial = bool(head > -650.0)
    # lim phi/r^n = inf at zero?
    ratio_head = phi.log_at(x) - phi.n * x
    beyond = (True if ratio_head[0] > ratio_head[-1] + 2.0 else
              False if abs(ratio_head[0] - ratio_head[-1]) < 0.5 else None)
    # scaling bound sup_r phi(kr)/phi(r) <= max(1, k^n) for normalized gauges
    grid = np.linspace(phi.log_lo, phi.log_hi - abs(math.log(k)) - 1.0, 800)
    ratios = phi.log_at(grid + math.log(k)) - phi.log_at(grid)
    const = float(np.exp(np.max(ratios)))
    return GaugeReport(nontrivial=nontrivial,
                       ratio_nonincreasing=phi.ratio_nonincreasing(),
                       beyond_volume=beyond,
                       head_exponent=m,
                       scaling_constant=const)
