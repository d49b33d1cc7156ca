import json
import math

import numpy as np
import pytest

from orliczdist import gauge
from orliczdist.netmeasure import (CubeSet, DyadicCube, dimension_fit,
                                   net_premeasure, sandwich_check)


# -- exhaustive oracle --------------------------------------------------------------

def exhaustive_optimum(E, phi, sigma):
    """Brute force: recursively assign each cube of E to one of its dyadic
    ancestors (or itself), minimizing the total price of the distinct
    cubes chosen.  Exponential; only for small instances."""
    n = E.n

    def price(level):
        d = math.sqrt(n) * 2.0 ** -level
        return phi.at(d) if d <= sigma else math.inf

    def ancestors(c):
        out = [c]
        while c.level > 0:
            c = c.parent()
            out.append(c)
        return out

    cubes = list(E.cubes)

    best = [math.inf]

    def rec(i, chosen, acc):
        if acc >= best[0]:
            return
        if i == len(cubes):
            best[0] = acc
            return
        c = cubes[i]
        if any(a.contains(c) or a == c for a in chosen):
            rec(i + 1, chosen, acc)
            return
        for a in ancestors(c):
            p = price(a.level)
            if math.isfinite(p):
                rec(i + 1, chosen + [a], acc + p)

    rec(0, [], 0.0)
    return best[0]


def random_cubeset(rng, n=2, max_level=4, max_cubes=6):
    count = int(rng.integers(1, max_cubes + 1))
    cubes = []
    for _ in range(count):
        lv = int(rng.integers(1, max_level + 1))
        coords = tuple(int(rng.integers(0, 2 ** lv)) for _ in range(n))
        c = DyadicCube(lv, coords)
        # keep the collection an antichain: drop anything nested
        if any(a == c or a.contains(c) or c.contains(a) for a in cubes):
            continue
        cubes.append(c)
    return CubeSet(cubes) if cubes else CubeSet([DyadicCube(1, (0,) * n)])


def test_dp_matches_exhaustive_oracle(rng):
    phi = gauge.powerlog_gauge(1.0, 1.0, 2)
    for _ in range(100):
        E = random_cubeset(rng)
        # sigma must admit self-covers of the coarsest required cube
        sig_lo = math.sqrt(E.n) * 2.0 ** -min(c.level for c in E.cubes)
        sigma = float(np.exp(rng.uniform(np.log(sig_lo), np.log(8.0))))
        got = net_premeasure(E, phi, sigma).value
        oracle = exhaustive_optimum(E, phi, sigma)
        assert np.isclose(got, oracle, rtol=1e-12), (E.to_json_obj(), sigma)


def test_witness_is_a_cover():
    phi = gauge.power_gauge(1.0, 2)
    cubes = [DyadicCube(3, (i, j)) for i in range(3) for j in range(2)]
    E = CubeSet(cubes)
    res = net_premeasure(E, phi, 4.0)
    for c in cubes:
        assert any(w == c or w.contains(c) for w in res.cover)
    assert np.isclose(res.value,
                      sum(phi.at(w.diameter) for w in res.cover))


def test_cube_geometry():
    c = DyadicCube(2, (1, 3))
    assert c.side == 0.25
    assert np.isclose(c.diameter, 0.25 * math.sqrt(2))
    assert c.parent() == DyadicCube(1, (0, 1))
    assert c.parent().contains(c)
    assert not c.contains(c.parent())
    assert np.allclose(c.corner(), [0.25, 0.75])


def test_cube_validation():
    with pytest.raises(ValueError):
        DyadicCube(-1, (0,))
    with pytest.raises(ValueError):
        DyadicCube(1, (2, 0))


def test_cubeset_rejects_nested():
    parent = DyadicCube(1, (0, 0))
    child = DyadicCube(2, (1, 1))
    assert parent.contains(child)
    with pytest.raises(ValueError):
        CubeSet([parent, child])


def test_cubeset_from_points():
    pts = np.array([[0.1, 0.1], [0.9, 0.9], [0.12, 0.11]])
    E = CubeSet.from_points(pts, level=3)
    assert len(E) == 2


def test_json_roundtrip(rng):
    E = random_cubeset(rng)
    back = CubeSet.from_json_obj(json.loads(json.dumps(E.to_json_obj())))
    assert set(back.cubes) == set(E.cubes)


def test_sigma_too_fine_raises():
    E = CubeSet([DyadicCube(4, (0, 0))])
    with pytest.raises(ValueError):
        net_premeasure(E, gauge.power_gauge(1.0, 2), 1e-3)


def test_sandwich_monotone_in_sigma(rng):
    phi = gauge.powerlog_gauge(1.0, 1.0, 2)
    for _ in range(20):
        E = random_cubeset(rng, max_level=3)
        rep = sandwich_check(E, phi, 2.0)
        assert rep.holds
        assert rep.lower_bound <= rep.net_value


def test_dimension_fit_binary_tree():
    # 2^j cubes of side 2^-j: the critical power-gauge exponent is 1
    levels = []
    for j in range(1, 7):
        levels.append([DyadicCube(j, (i, 0)) for i in range(2 ** j)])
    fit = dimension_fit(levels, lambda a: gauge.power_gauge(a, 2),
                        0.3, 1.9, tol=1e-3)
    assert abs(fit.critical_param - 1.0) < 0.02
