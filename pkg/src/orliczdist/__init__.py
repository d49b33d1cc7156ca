"""Numerical toolkit for gauge distortion under Orlicz-controlled maps.

Given a Young function A constraining the gradient of a map on R^n and a
gauge phi measuring a source set, the package computes the distorted gauge
psi that controls the image, the quantitative measure/content bounds that
come with it, dyadic net pre-measures, and the nested lacunary
constructions showing the bounds are sharp.
"""

from .loglog import LogLogFunction, TabulatedLogLog, RangeError
from .young import (YoungFunction, FieldSample, power, powerlog, exponential,
                    conjugate, inverse, matuszewska_index, check_condition,
                    luxemburg_norm, modular, equivalent_near_infinity)
from .gauge import (GaugeFunction, power_gauge, powerlog_gauge, log_gauge,
                    normalize_gauge, scale_gauge, check_gauge)
from .sobolev import sobolev_conjugate, phi_B, SobolevResult
from .scaling import (MonotoneMap, theta, theta_value, xi, classify_stability)
from .distortion import (DistortionBundle, build_distortion,
                         key_inequality_gap, equality_locus_residual,
                         measure_bound, content_bound, kaufman_constant,
                         lebesgue_image_bound, default_geometry_constant)
from .asymptotics import (LogPowerForm, distort_form, fit_exponents,
                          fit_power_slope, crosscheck, classify_input)
from .netmeasure import (DyadicCube, CubeSet, net_premeasure, sandwich_check,
                         dimension_fit)
from .fractal import (CantorSpec, CantorSet, RandomMapSpec, build_cantor,
                      eta_bump, bump_gradient_sample, gradient_norm_estimate,
                      energy_integral_mc, image_cover_sums, morrey_residual,
                      RandomBumpMap, slow_target_gauge, derive_rng)

__version__ = "0.1.0"
