"""Scaling behaviour of monotone functions: the extremal ratio functionals

    upper0(h)(r)   = limsup_{t -> 0+}  h(r t) / h(t)
    upperinf(h)(r) = limsup_{t -> inf} h(r t) / h(t)
    upper(h)(r)    = sup_{t > 0}       h(r t) / h(t)

their lower (inf / liminf) counterparts, the combined critical profile used
by the content bounds, and the small-argument dichotomy classifier: for the
functions arising here, upper0(h) near zero either tends to 0 or is
identically 1 on (0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .loglog import LogLogFunction

DEFAULT_DEPTH = 60           # dyadic probe depth for the limit ratios
RIGHT_LIMIT_BUMP = 1e-6      # relative bump for evaluating right limits


@dataclass
class ThetaResult:
    value: float
    probes_log: np.ndarray       # log t grid used
    ratios: np.ndarray           # h(rt)/h(t) on the grid (linear scale)
    regime: str
    kind: str                    # "sup" or "inf"


class MonotoneMap(LogLogFunction):
    """Plain wrapper marking a function as monotone input to the ratio ops."""
    pass


def _probe_grid(h: LogLogFunction, regime: str, depth: int) -> np.ndarray:
    ln2 = math.log(2.0)
    ks = np.arange(1, depth + 1, dtype=float)
    if regime == "zero":
        return -ks * ln2
    if regime == "infinity":
        return ks * ln2
    if regime == "global":
        return np.concatenate([-ks * ln2, [0.0], ks * ln2])
    raise ValueError("regime must be 'zero', 'infinity' or 'global'")


def theta(h: LogLogFunction, r: float, regime: str = "global",
          depth: int = DEFAULT_DEPTH, kind: str = "sup") -> ThetaResult:
    """Extremal ratio of h at scale r over a dyadic probe grid.

    ``kind='sup'`` approximates the limsup/sup ratios, ``kind='inf'`` the
    liminf/inf ones.  Deeper grids tighten the approximation; evaluation is
    in log space, so depth is essentially free.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    probes = _probe_grid(h, regime, depth)
    logr = math.log(r)
    if regime == "global":
        # shifted copies make the sup/inf candidate sets of scale r and of
        # scale 1/r exact reciprocals of each other
        probes = np.concatenate([probes, probes - logr])
    d = h.log_at(probes + logr) - h.log_at(probes)
    if kind == "sup":
        value = float(np.exp(np.max(d)))
    elif kind == "inf":
        value = float(np.exp(np.min(d)))
    else:
        raise ValueError("kind must be 'sup' or 'inf'")
    return ThetaResult(value=value, probes_log=probes, ratios=np.exp(d),
                       regime=regime, kind=kind)


def theta_value(h, r, regime="global", depth=DEFAULT_DEPTH, kind="sup"):
    return theta(h, r, regime, depth, kind).value


def theta_right_limit(h, r, regime="global", depth=DEFAULT_DEPTH,
                      kind="sup") -> float:
    """Right-sided limit of the ratio functional at r."""
    return theta_value(h, r * (1.0 + RIGHT_LIMIT_BUMP), regime, depth, kind)


def xi(psi: LogLogFunction, B_inverse: LogLogFunction, r,
       depth: int = DEFAULT_DEPTH):
    """Critical content profile  r -> r * upper(psi)(upperinf(Binv)(1/r)+).

    Non-decreasing in r for admissible inputs.
    """
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(rs)
    for i, ri in enumerate(rs):
        t1 = theta_value(B_inverse, 1.0 / ri, "infinity", depth)
        out[i] = ri * theta_right_limit(psi, t1, "global", depth)
    return float(out[0]) if np.ndim(r) == 0 else out


@dataclass
class StabilityReport:
    regime: str                       # "vanishing" or "stable"
    psi_ratio_at_probe: float         # upper0(psi) at the probe scale
    binv_ratio_at_probe: float        # upperinf(Binv) at the probe scale
    probe_scale: float
    conclusive: bool


def classify_stability(psi: LogLogFunction, B_inverse: LogLogFunction,
                       probe_scale: float = 2.0 ** -40,
                       depth: int = 3000) -> StabilityReport:
    """Decides between the vanishing and stable regimes.

    In the vanishing regime both upper0(psi) and upperinf(Binv) tend to 0 at
    small scales and images of null sets stay null; otherwise the dichotomy
    pins upper0(psi) at 1 on (0, 1] and the gauge survives distortion.
    A very deep probe grid separates the two cleanly; values landing in the
    middle are flagged inconclusive.
    """
    a = theta_value(psi, probe_scale, "zero", depth)
    b = theta_value(B_inverse, probe_scale, "infinity", depth)
    vanishing = (a < 0.5) and (b < 0.5)
    conclusive = ((a < 0.05 or a > 0.8) and (b < 0.05 or b > 0.8))
    return StabilityReport(regime="vanishing" if vanishing else "stable",
                           psi_ratio_at_probe=a, binv_ratio_at_probe=b,
                           probe_scale=probe_scale, conclusive=conclusive)
