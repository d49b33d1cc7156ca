import numpy as np
import pytest

from orliczdist import build_distortion, gauge, young

# growth families used across the suites; n = 2 throughout
YOUNG_FAMILIES = {
    "t4": young.power(4.0),
    "t3": young.power(3.0),
    "t2log2": young.powerlog(2.0, 2.0),
    "t3log-1": young.powerlog(3.0, -1.0),
    "exp1": young.exponential(1.0),
    "exp2": young.exponential(2.0),
}


@pytest.fixture(scope="session")
def young_corpus():
    return YOUNG_FAMILIES


@pytest.fixture(scope="session")
def bundle_corpus():
    """Distortion bundles for the (A, phi) pairs exercised repeatedly."""
    pairs = {
        "t4_r1": (young.power(4.0), gauge.power_gauge(1.0, 2)),
        "t4_r2": (young.power(4.0), gauge.power_gauge(2.0, 2)),
        "t3_r2": (young.power(3.0), gauge.power_gauge(2.0, 2)),
        "t2log2_rlog": (young.powerlog(2.0, 2.0),
                        gauge.powerlog_gauge(1.0, 0.0, 2)),
        "exp1_r1": (young.exponential(1.0), gauge.power_gauge(1.0, 2)),
        "t4_log": (young.power(4.0), gauge.log_gauge(1.0, 2)),
    }
    return {name: build_distortion(A, phi, 2) for name, (A, phi) in
            pairs.items()}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260826)
