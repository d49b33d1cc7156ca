"""Net pre-measures over dyadic cubes.

A dyadic cube at level l >= 0 inside the unit cube [0,1]^n is
2^-l * (k + [0,1]^n) with integer coordinates 0 <= k_i < 2^l.  The net
pre-measure of a finite cube family E at fineness sigma is the cheapest
cover of E by dyadic cubes of diameter <= sigma, priced by a gauge of the
diameter.  Optimal covers nest, so a bottom-up pass over the ancestor tree
computes the exact optimum together with a witness cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .gauge import GaugeFunction


@dataclass(frozen=True, order=True)
class DyadicCube:
    level: int
    coords: Tuple[int, ...]

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("cube level must be >= 0")
        if any(c < 0 or c >= (1 << self.level) for c in self.coords):
            raise ValueError("cube coordinates outside the unit cube")

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def side(self) -> float:
        return 2.0 ** -self.level

    @property
    def diameter(self) -> float:
        return math.sqrt(self.n) * self.side

    def parent(self) -> "DyadicCube":
        if self.level == 0:
            raise ValueError("unit cube has no parent here")
        return DyadicCube(self.level - 1, tuple(c >> 1 for c in self.coords))

    def contains(self, other: "DyadicCube") -> bool:
        if other.level < self.level or other.n != self.n:
            return False
        shift = other.level - self.level
        return all((c >> shift) == s for c, s in zip(other.coords, self.coords))

    def center(self) -> np.ndarray:
        return (np.asarray(self.coords, dtype=float) + 0.5) * self.side

    def corner(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float) * self.side


class CubeSet:
    """An antichain of dyadic cubes (no cube contains another)."""

    def __init__(self, cubes):
        cubes = sorted(set(cubes))
        if not cubes:
            raise ValueError("empty cube set")
        n = cubes[0].n
        if any(c.n != n for c in cubes):
            raise ValueError("mixed dimensions")
        by_key = {(c.level, c.coords) for c in cubes}
        for c in cubes:
            q = c
            while q.level > 0:
                q = q.parent()
                if (q.level, q.coords) in by_key:
                    raise ValueError(f"{c} is contained in {q}: not an antichain")
        self.cubes: List[DyadicCube] = cubes
        self.n = n

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    @property
    def max_level(self) -> int:
        return max(c.level for c in self.cubes)

    @staticmethod
    def from_points(points: np.ndarray, level: int) -> "CubeSet":
        """Snap a point cloud inside [0,1)^n to level-``level`` cubes."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-d array")
        if np.any(pts < 0) or np.any(pts >= 1):
            raise ValueError("points must lie in [0, 1)^n")
        scale = 1 << level
        coords = np.floor(pts * scale).astype(int)
        coords = np.minimum(coords, scale - 1)
        return CubeSet({DyadicCube(level, tuple(int(x) for x in row))
                        for row in coords})

    def to_json_obj(self) -> list:
        return [{"level": c.level, "coords": list(c.coords)}
                for c in self.cubes]

    @staticmethod
    def from_json_obj(obj) -> "CubeSet":
        return CubeSet(DyadicCube(int(d["level"]), tuple(int(x)
                       for x in d["coords"])) for d in obj)


@dataclass
class NetResult:
    value: float
    cover: List[DyadicCube]
    sigma: float


def net_premeasure(E: CubeSet, phi: GaugeFunction, sigma: float = math.inf,
                   ) -> NetResult:
    """Exact cheapest dyadic cover of E at fineness sigma, with witness.

    Every useful cover cube is an ancestor of (or equal to) a cube of E, so
    the optimum is a bottom-up dynamic program on the ancestor tree: a node
    is covered either by itself (if its diameter fits under sigma) or by
    covering all its relevant children.  Splitting a cube into its children
    never pays off because gauges are normalized at construction
    (phi(r)/r^n non-increasing), which is what makes this DP exact.
    """
    finest = math.sqrt(E.n) * 2.0 ** -E.max_level
    if sigma < finest:
        raise ValueError(f"sigma = {sigma} is finer than the finest cube "
                         f"diameter {finest}")
    # price of self-cover per level (diameters only depend on the level)
    def price(level: int) -> float:
        d = math.sqrt(E.n) * 2.0 ** -level
        return phi.at(d) if d <= sigma else math.inf

    # cost[cube] = (value, witness list); sweep levels bottom-up
    cost: Dict[DyadicCube, Tuple[float, List[DyadicCube]]] = {}
    nodes_by_level: Dict[int, set] = {}
    for c in E.cubes:
        nodes_by_level.setdefault(c.level, set()).add(c)
        cost[c] = (price(c.level), [c])
        if not math.isfinite(cost[c][0]):
            raise ValueError("gauge priced a required cube at infinity")
    for level in range(E.max_level, 0, -1):
        for c in nodes_by_level.get(level, ()):  # push children costs up
            par = c.parent()
            nodes_by_level.setdefault(level - 1, set()).add(par)
            v, w = cost[c]
            pv, pw = cost.get(par, (0.0, []))
            cost[par] = (pv + v, pw + w)
        for par in nodes_by_level.get(level - 1, ()):
            self_price = price(par.level)
            if self_price <= cost[par][0]:
                cost[par] = (self_price, [par])
    root = DyadicCube(0, (0,) * E.n)
    if root in cost:
        value, cover = cost[root]
    else:
        # E itself is only the root cube
        value, cover = cost[E.cubes[0]]
    return NetResult(value=float(value), cover=sorted(cover), sigma=sigma)


@dataclass
class SandwichReport:
    net_value: float
    net_value_halved: float           # at fineness sigma / 2
    lower_bound: float                # net_value / cn
    cn: float
    holds: bool


def sandwich_check(E: CubeSet, phi: GaugeFunction, sigma: float,
                   cn: Optional[float] = None) -> SandwichReport:
    """The net value at fineness sigma is pinched between the cover content
    at sigma and cn times the content at sigma / 2; here the computable
    surrogate checks monotonicity in sigma and reports the implied bracket."""
    if cn is None:
        cn = float(6 ** E.n)
    v1 = net_premeasure(E, phi, sigma).value
    v2 = net_premeasure(E, phi, sigma / 2.0).value
    holds = v1 <= v2 * (1.0 + 1e-12)
    return SandwichReport(net_value=v1, net_value_halved=v2,
                          lower_bound=v1 / cn, cn=cn, holds=holds)


@dataclass
class DimensionFit:
    critical_param: float
    bracket: Tuple[float, float]
    slopes: Dict[float, float]


def dimension_fit(levels: List[List[DyadicCube]], gauge_for,
                  lo: float, hi: float, tol: float = 1e-3) -> DimensionFit:
    """Critical gauge parameter where per-level cover sums flip regime.

    ``levels`` is a list of cube families (one per construction level);
    ``gauge_for(param)`` builds the gauge.  The level sums
    S_j = sum_Q phi(diam Q) behave like exp(slope * j); the slope crosses
    zero at the critical parameter, located by bisection.
    """
    js = np.arange(1, len(levels) + 1, dtype=float)
    diams = [np.array([c.diameter for c in fam]) for fam in levels]
    slopes: Dict[float, float] = {}

    def slope(param: float) -> float:
        phi = gauge_for(param)
        logS = np.array([
            _log_sum(phi.log_at(np.log(d))) for d in diams])
        # weight later levels: the asymptotic regime is what matters
        m = np.polyfit(js[1:], logS[1:], 1, w=np.sqrt(js[1:]))[0]
        slopes[param] = float(m)
        return float(m)

    s_lo, s_hi = slope(lo), slope(hi)
    if s_lo * s_hi > 0:
        raise ValueError("bracket does not straddle the critical parameter "
                         f"(slopes {s_lo:.3g}, {s_hi:.3g})")
    a, b = lo, hi
    for _ in range(200):
        mid = 0.5 * (a + b)
        if slope(mid) * s_lo > 0:
            a = mid
        else:
            b = mid
        if b - a < tol:
            break
    return DimensionFit(critical_param=0.5 * (a + b), bracket=(a, b),
                        slopes=slopes)


def _log_sum(log_terms: np.ndarray) -> float:
    m = float(np.max(log_terms))
    return m + math.log(float(np.sum(np.exp(log_terms - m))))
