"""The distortion pipeline: from a Young function A and a gauge phi to the
distorted gauge psi governing images of sets under maps whose gradient is
controlled in the Orlicz sense.

The chain is

    J(s)   = s * B^{-1}( phi(s) / s^n )        (radius profile)
    psi(r) = phi( J^{-1}(r) )                  (distorted gauge)

with B the dimension-reduced Young function of (A, n).  Everything is
evaluated in log-log coordinates; J^{-1} uses an axis-swapped monotone
tabulation for speed, with a certified-bisection path where tight error
control matters (the key inequality checks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .loglog import LogLogFunction, TabulatedLogLog, RangeError
from .young import YoungFunction, check_condition
from .gauge import GaugeFunction, TabulatedGauge
from .sobolev import SobolevResult, sobolev_conjugate
from .scaling import theta_value, theta_right_limit, xi, classify_stability

DEFAULT_KAPPA = 1.0


def default_geometry_constant(n: int) -> float:
    """Covering-multiplicity constant used in the measure bounds."""
    return float(6 ** n)


@dataclass
class DistortionBundle:
    """All functions derived from (A, phi, n), plus the constants in play."""
    A: YoungFunction
    phi: GaugeFunction
    n: int
    sobolev: SobolevResult
    J: LogLogFunction
    J_inverse: LogLogFunction
    psi: LogLogFunction
    kappa: float
    cn: float

    @property
    def B(self) -> YoungFunction:
        return self.sobolev.B

    @property
    def B_inverse(self) -> LogLogFunction:
        return self.sobolev.B_inverse

    def psi_at(self, r):
        """Fast evaluation of psi (tabulated-inverse path)."""
        return self.psi.at(r)

    def psi_certified_log(self, logr, rtol: float = 1e-12):
        """psi via certified bisection of J; use where gap tolerances bite."""
        logr = np.asarray(logr, dtype=float)
        ls = self.J.inverse_log(logr, rtol=rtol)
        return self.phi.log_at(ls)

    def scaled_radius_profile(self, r: float) -> LogLogFunction:
        """J_r(s) = s * B^{-1}( r * phi(s) / s^n ) for a mass budget r."""
        if r <= 0:
            raise ValueError("r must be positive")
        logr = math.log(r)
        binv = self.B_inverse

        def log_eval(ls):
            return ls + binv.log_at(logr + self.phi.log_at(ls) - self.n * ls)

        return LogLogFunction(log_eval, self.J.log_lo, self.J.log_hi)

    def config(self) -> dict:
        return {"A": self.A.descriptor(), "phi": self.phi.descriptor(),
                "n": self.n, "kappa": self.kappa, "cn": self.cn}


def build_distortion(A: YoungFunction, phi: GaugeFunction, n: int,
                     kappa: float = DEFAULT_KAPPA,
                     cn: Optional[float] = None,
                     check: bool = True) -> DistortionBundle:
    """Assembles the full pipeline; validates the admissibility conditions."""
    if phi.n != n:
        raise ValueError(f"gauge is tagged for dimension {phi.n}, not {n}")
    if check:
        emb = check_condition(A, n, "embedding")
        if emb.holds is False:
            raise ValueError("A fails the embedding growth condition "
                             f"(exponent {emb.exponent:.3f})")
        zero = check_condition(A, n, "zero_divergence")
        if zero.holds is False:
            raise ValueError("A is not superlinear enough at zero "
                             f"(exponent {zero.exponent:.3f})")
    sob = sobolev_conjugate(A, n)
    binv = sob.B_inverse

    def logJ(ls):
        return ls + binv.log_at(phi.log_at(ls) - n * ls)

    J = LogLogFunction(logJ, phi.log_lo, phi.log_hi)
    # J must be increasing for the pipeline to make sense
    grid = np.linspace(J.log_lo, J.log_hi, 2000)
    jv = J.log_at(grid)
    if np.any(np.diff(jv) < -1e-7):
        raise ValueError("radius profile J is not increasing; "
                         "inputs are outside the admissible class")
    Jinv = TabulatedLogLog(jv, grid)
    psi = TabulatedLogLog(jv, phi.log_at(grid))
    return DistortionBundle(A=A, phi=phi, n=n, sobolev=sob, J=J,
                            J_inverse=Jinv, psi=psi, kappa=kappa,
                            cn=cn if cn is not None
                            else default_geometry_constant(n))


# -- the key inequality ----------------------------------------------------------

def key_inequality_gap(bundle: DistortionBundle, s, t,
                       mass: Optional[float] = None):
    """Gap  psi(s t) - [phi(t) + t^n B(s)]  (nonpositive up to tolerance).

    With ``mass`` = r the scaled variant is used:
    phi(Jr^{-1}(s t)) - [phi(t) + t^n B(s) / r].
    Returns (gap, rhs, rel) with rel = gap / rhs computed in log space, so
    the relative gap stays meaningful even when rhs overflows a double.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    logs, logt = np.log(s), np.log(t)
    log_phi_t = bundle.phi.log_at(logt)
    log_tnB = bundle.n * logt + bundle.B.log_at(logs)
    if mass is None:
        lhs_log = bundle.psi_certified_log(logs + logt)
    else:
        Jr = bundle.scaled_radius_profile(mass)
        ls = Jr.inverse_log(logs + logt, rtol=1e-12)
        lhs_log = bundle.phi.log_at(ls)
        log_tnB = log_tnB - math.log(mass)
    log_rhs = np.logaddexp(log_phi_t, log_tnB)
    rel = np.expm1(lhs_log - log_rhs)
    with np.errstate(over="ignore"):
        rhs = np.exp(log_rhs)
        gap = rel * rhs
    return gap, rhs, rel


def equality_locus_residual(bundle: DistortionBundle, s):
    """Relative residual of  phi(J^{-1}(s)) = J^{-1}(s)^n B(s / J^{-1}(s))."""
    logs = np.log(np.asarray(s, dtype=float))
    lt = bundle.J.inverse_log(logs, rtol=1e-12)
    lhs = bundle.phi.log_at(lt)
    rhs = bundle.n * lt + bundle.B.log_at(logs - lt)
    return np.exp(lhs - rhs) - 1.0


# -- quantitative bounds ---------------------------------------------------------

@dataclass
class MeasureBound:
    value: float                  # bound on the psi-measure of the image
    factor: float                 # ratio functional evaluated at the gradient
    constant: float               # structural constant in front
    regime: str
    kappa: float
    cn: float


def measure_bound(bundle: DistortionBundle, grad_norm: float,
                  phi_measure: float, depth: int = 1500) -> MeasureBound:
    """Upper bound for the psi-measure of an image set.

    vanishing regime: the image is psi-null (bound 0) whenever the source
    has finite phi-measure; stable regime: bound =
    c * upper0(psi)(kappa * grad_norm +) * phi_measure with
    c = cn * lim_{r -> 0+} upper0(psi)(upperinf(Binv)(r)).
    """
    report = classify_stability(bundle.psi, bundle.B_inverse, depth=depth)
    if report.regime == "vanishing":
        return MeasureBound(0.0, 0.0, 0.0, "vanishing",
                            bundle.kappa, bundle.cn)
    probe = 2.0 ** -40
    inner = theta_value(bundle.B_inverse, probe, "infinity", depth)
    c = bundle.cn * theta_value(bundle.psi, inner, "zero", depth)
    factor = theta_right_limit(bundle.psi, bundle.kappa * grad_norm,
                               "zero", depth)
    return MeasureBound(c * factor * phi_measure, factor, c, "stable",
                        bundle.kappa, bundle.cn)


@dataclass
class ContentBound:
    value: float
    profile_value: float
    constant: float


def content_bound(bundle: DistortionBundle, grad_norm: float,
                  phi_content: float, depth: int = 800) -> ContentBound:
    """psi-content of the image <= c * Xi(c' * content) with the critical
    profile Xi of (psi, B)."""
    t1 = theta_right_limit(bundle.psi, bundle.kappa * grad_norm, "global",
                           depth)
    c = bundle.cn * max(t1, 1.0)
    val = xi(bundle.psi, bundle.B_inverse, max(phi_content, 1e-300),
             depth=depth)
    return ContentBound(c * val, val, c)


def kaufman_constant(n: int, p: float, alpha: float) -> float:
    """Sharp structural constant for A = t^p, phi = r^alpha (p > n,
    0 < alpha <= n): the image gauge is r^(alpha p / (p + alpha - n)) with
    this factor in front (times the ambient covering constant)."""
    if p <= n:
        raise ValueError("needs p > n")
    if not (0 < alpha <= n):
        raise ValueError("needs 0 < alpha <= n")
    npr = n / (n - 1.0) if n > 1 else math.inf
    ppr = p / (p - 1.0)
    expo = alpha * (p - 1.0) / (alpha + p - n)
    lead = p ** (alpha / (alpha + p - n))
    if n == 1:
        ratio = 1.0
    else:
        ratio = ((p - 1.0) / (npr - ppr)) ** expo
    cn = default_geometry_constant(n)
    return 2.0 * cn * lead * ratio


def lebesgue_image_bound(bundle: DistortionBundle, grad_norm: float,
                         lebesgue_measure: float) -> float:
    """Outer volume content of the image of a set of given volume:
    2 kappa^{n+1} ||grad||^n * profile(vol * n^{n/2} / kappa)."""
    from .sobolev import phi_B
    if lebesgue_measure <= 0:
        return 0.0
    kap = bundle.kappa
    arg = lebesgue_measure * (bundle.n ** (bundle.n / 2.0)) / kap
    return (2.0 * kap ** (bundle.n + 1) * grad_norm ** bundle.n
            * phi_B(bundle.sobolev, arg))
