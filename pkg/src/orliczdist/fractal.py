"""Nested lacunary cube families, logarithmic bump maps, and the Monte
Carlo experiments that probe how much such maps can inflate thin sets.

The set M is an intersection of generations A_1, A_2, ... of dyadic cubes:
generation j holds floor(2^(j nu)) cubes of side 2^(-2^j), each placed
inside a generation j-1 cube, children spread evenly and counts per parent
differing by at most one.  On top of M live random maps

    u_xi(x) = sum_j  j^(-delta) 2^(-j nu / sigma)  sum_{Q in A_j} eta_Q(x) xi_Q

where eta_Q is a logarithmic bump equal to 1 on Q and supported in the
concentric cube of the parent's side, and the xi_Q are independent uniform
vectors in the unit ball.  These maps have bounded gradient norm in the
n-log-power Orlicz class yet push the very sparse M onto sets that are
large for the matching slow gauges.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .young import FieldSample, YoungFunction, powerlog, luxemburg_norm
from .netmeasure import DyadicCube
from .sobolev import SobolevResult

MAX_DEPTH = 5   # generations; sides shrink like 2^(-2^j), so 5 is desk scale
LN2 = math.log(2.0)


def derive_rng(seed: int, tag: str) -> np.random.Generator:
    """Independent, reproducible stream per (seed, task tag)."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF,
                                 zlib.crc32(tag.encode("utf-8"))])
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class CantorSpec:
    n: int = 2
    nu: float = 1.0
    depth: int = MAX_DEPTH

    def __post_init__(self):
        if not (1 <= self.depth <= MAX_DEPTH):
            raise ValueError(f"depth must be in 1..{MAX_DEPTH}")
        if self.nu <= 0:
            raise ValueError("nu must be positive")
        if self.count(1) < 1:
            raise ValueError("nu too small: first generation is empty")

    def count(self, j: int) -> int:
        return int(math.floor(2.0 ** (j * self.nu)))

    def dyadic_level(self, j: int) -> int:
        return 2 ** j


@dataclass
class CantorSet:
    spec: CantorSpec
    levels: List[List[DyadicCube]]
    children: Dict[DyadicCube, List[DyadicCube]]
    parent: Dict[DyadicCube, Optional[DyadicCube]]

    @property
    def leaves(self) -> List[DyadicCube]:
        return self.levels[-1]

    def max_children_per_parent(self, j: int) -> int:
        if j == 1:
            return len(self.levels[0])
        fams = [self.children[p] for p in self.levels[j - 2]]
        return max(len(f) for f in fams)


def _spread_positions(count: int, cells: int, n: int) -> List[Tuple[int, ...]]:
    """``count`` lattice points spread over a cells^n grid, pairwise spaced."""
    k = max(1, math.ceil(count ** (1.0 / n)))
    if k ** n < count:
        k += 1
    if k > cells:
        raise ValueError("not enough room for the requested children")
    pos = []
    for idx in range(count):
        rem, digits = idx, []
        for _ in range(n):
            digits.append(rem % k)
            rem //= k
        pos.append(tuple(((d * 2 + 1) * cells) // (2 * k) for d in digits))
    return pos


def build_cantor(spec: CantorSpec) -> CantorSet:
    """Deterministic construction of the nested generations."""
    levels: List[List[DyadicCube]] = []
    children: Dict[DyadicCube, List[DyadicCube]] = {}
    parent: Dict[DyadicCube, Optional[DyadicCube]] = {}
    parents: List[Optional[DyadicCube]] = [None]
    parent_coords = [(0,) * spec.n]
    parent_dlevel = 0
    for j in range(1, spec.depth + 1):
        dlevel = spec.dyadic_level(j)
        cells = 1 << (dlevel - parent_dlevel)     # subgrid per axis
        total = spec.count(j)
        nprev = len(parents)
        base, extra = divmod(total, nprev)
        fam: List[DyadicCube] = []
        for i, (par, pc) in enumerate(zip(parents, parent_coords)):
            m = base + (1 if i < extra else 0)
            if m == 0:
                raise ValueError("a parent would receive no children; "
                                 "decrease depth or increase nu")
            offs = _spread_positions(m, cells, spec.n)
            for off in offs:
                coords = tuple((c << (dlevel - parent_dlevel)) + o
                               for c, o in zip(pc, off))
                cube = DyadicCube(dlevel, coords)
                fam.append(cube)
                parent[cube] = par
                if par is not None:
                    children.setdefault(par, []).append(cube)
        levels.append(fam)
        parents = list(fam)
        parent_coords = [c.coords for c in fam]
        parent_dlevel = dlevel
    return CantorSet(spec=spec, levels=levels, children=children,
                     parent=parent)


def support_overlap_count(cantor: CantorSet, j: int,
                          probes: int = 2000, seed: int = 0) -> int:
    """Max number of generation-j bump supports containing a single point."""
    fam = cantor.levels[j - 1]
    rng = derive_rng(seed, f"overlap-{j}")
    centers = np.array([c.center() for c in fam])
    half = 0.5 * 2.0 ** -(2 ** (j - 1))          # support half-side
    pts = []
    for c in centers:
        pts.append(c + rng.uniform(-half, half, size=(probes // len(fam) + 1,
                                                      cantor.spec.n)))
    pts = np.concatenate(pts)
    counts = np.zeros(len(pts), dtype=int)
    for c in centers:
        inside = np.all(np.abs(pts - c) < half, axis=1)
        counts += inside
    return int(np.max(counts))


# -- the logarithmic bumps -------------------------------------------------------

def eta_bump(j: int, Q: DyadicCube, x: np.ndarray) -> np.ndarray:
    """Bump of generation j centered on Q: 1 on Q, logarithmic decay to 0
    on the concentric cube with the parent generation's side."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    d = np.max(np.abs(x - Q.center()), axis=1)
    scale = 2.0 ** (j - 1)
    with np.errstate(divide="ignore"):
        val = (-scale + np.log2(1.0 / np.maximum(2.0 * d, 1e-300))) / scale
    return np.clip(val, 0.0, 1.0)


def bump_gradient_sample(n: int, j: int, nodes: int = 600) -> FieldSample:
    """Radial quadrature of |grad eta_j| over its annular support.

    The gradient magnitude is 1 / (2^(j-1) ln2 rho) on the sup-norm annulus
    2^(-2^j) < 2 rho < 2^(-2^(j-1)); weights are exact shell volumes.
    """
    rho_in = 0.5 * 2.0 ** -(2 ** j)
    rho_out = 0.5 * 2.0 ** -(2 ** (j - 1))
    edges = np.exp(np.linspace(math.log(rho_in), math.log(rho_out), nodes + 1))
    mids = np.sqrt(edges[:-1] * edges[1:])
    weights = (2.0 * edges[1:]) ** n - (2.0 * edges[:-1]) ** n
    values = 1.0 / (2.0 ** (j - 1) * LN2 * mids)
    return FieldSample(values=values, weights=weights)


@dataclass
class BumpNormReport:
    j: int
    single: float                # Luxemburg norm of one bump gradient
    reference: float             # 2^(j (q - n + 1) / n)
    ratio: float
    aggregate: float             # disjoint-union norm over the generation
    count: int
    aggregate_bound: float       # count^(1/n) * single


def gradient_norm_estimate(n: int, q: float, j: int,
                           cantor: Optional[CantorSet] = None,
                           coeffs: Optional[np.ndarray] = None,
                           ) -> BumpNormReport:
    """Single-bump and whole-generation gradient norms in the n-log-power
    class, against the predicted growth 2^(j (q - n + 1) / n)."""
    A = powerlog(n, q)
    base = bump_gradient_sample(n, j)
    single = luxemburg_norm(base, A)
    ref = 2.0 ** (j * (q - n + 1.0) / n)
    if cantor is not None:
        count = len(cantor.levels[j - 1])
    else:
        count = 1
    if coeffs is None:
        coeffs = np.ones(count)
    parts = [base.scaled(c) for c in coeffs]
    aggregate = luxemburg_norm(FieldSample.concat(parts), A)
    bound = count ** (1.0 / n) * float(np.max(np.abs(coeffs))) * single
    return BumpNormReport(j=j, single=single, reference=ref,
                          ratio=single / ref, aggregate=aggregate,
                          count=count, aggregate_bound=bound)


# -- random maps -----------------------------------------------------------------

@dataclass(frozen=True)
class RandomMapSpec:
    n: int = 2
    q: float = 2.0
    nu: float = 1.0
    delta: float = 1.5
    depth: int = MAX_DEPTH
    seed: int = 0

    def __post_init__(self):
        if self.q <= self.n - 1:
            raise ValueError("needs q > n - 1")
        if self.delta <= 1.0:
            raise ValueError("delta must exceed 1")

    @property
    def sigma(self) -> float:
        return self.n * self.nu / (self.q - self.n + 1.0 + self.nu)

    def coefficient(self, j: int) -> float:
        return j ** (-self.delta) * 2.0 ** (-j * self.nu / self.sigma)

    def admissible_delta_interval(self, mu: float) -> Tuple[float, float]:
        """delta must satisfy 1 < delta and 1 + delta sigma < mu."""
        return (1.0, (mu - 1.0) / self.sigma)

    def cantor_spec(self) -> CantorSpec:
        return CantorSpec(n=self.n, nu=self.nu, depth=self.depth)


def draw_ball_vectors(rng: np.random.Generator, count: int,
                      n: int) -> np.ndarray:
    """Uniform samples from the unit ball of R^n."""
    g = rng.standard_normal((count, n))
    g /= np.maximum(np.linalg.norm(g, axis=1, keepdims=True), 1e-300)
    radii = rng.uniform(size=(count, 1)) ** (1.0 / n)
    return g * radii


class RandomBumpMap:
    """A realized map u_xi for one draw of the xi vectors."""

    def __init__(self, spec: RandomMapSpec, cantor: CantorSet,
                 rng: Optional[np.random.Generator] = None):
        self.spec = spec
        self.cantor = cantor
        rng = rng if rng is not None else derive_rng(spec.seed, "xi")
        self.xi: Dict[int, np.ndarray] = {}
        for j, fam in enumerate(cantor.levels, start=1):
            self.xi[j] = draw_ball_vectors(rng, len(fam), spec.n)

    def coefficients(self, x: np.ndarray) -> List[np.ndarray]:
        """Per-generation matrices of a_Q(x) = coeff_j * eta_Q(x)."""
        out = []
        for j, fam in enumerate(self.cantor.levels, start=1):
            cj = self.spec.coefficient(j)
            out.append(cj * np.stack([eta_bump(j, Q, x) for Q in fam], axis=1))
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        u = np.zeros((len(x), self.spec.n))
        for j, amat in enumerate(self.coefficients(x), start=1):
            u += amat @ self.xi[j]
        return u


def slow_target_gauge(sigma: float, mu: float,
                      b: Optional[float] = None) -> Callable[[float], float]:
    """phi(r) = r^sigma * log2(b + 1/r)^mu with b large enough that this is
    increasing; the gauge against which the image of M stays large."""
    if b is None:
        b = 2.0 ** (math.ceil(mu / sigma) + 1)

    def phi(r):
        r = np.asarray(r, dtype=float)
        return r ** sigma * np.log2(b + 1.0 / r) ** mu

    phi.b = b
    return phi


def sample_cantor_points(cantor: CantorSet, count: int,
                         rng: np.random.Generator,
                         with_paths: bool = False):
    """Points of (the truncated) M: natural-measure leaf choice, uniform
    position inside the leaf.

    With ``with_paths`` also returns the (count, depth) matrix of ancestor
    indices (position of the generation-j ancestor within its family),
    which buckets pairs by separation level.
    """
    spec = cantor.spec
    index = [{c: i for i, c in enumerate(fam)} for fam in cantor.levels]
    leaves = []
    paths = np.empty((count, spec.depth), dtype=int)
    for k in range(count):
        cube = cantor.levels[0][rng.integers(len(cantor.levels[0]))]
        paths[k, 0] = index[0][cube]
        for j in range(2, spec.depth + 1):
            fam = cantor.children[cube]
            cube = fam[rng.integers(len(fam))]
            paths[k, j - 1] = index[j - 1][cube]
        leaves.append(cube)
    side = 2.0 ** -(2 ** spec.depth)
    corners = np.array([c.corner() for c in leaves])
    pts = corners + rng.uniform(size=(count, spec.n)) * side
    return (pts, paths) if with_paths else pts


@dataclass
class EnergyReport:
    levels: np.ndarray            # separation generation per bucket
    contributions: np.ndarray     # estimated contribution per bucket
    model: np.ndarray             # j^(delta sigma - mu), same normalization
    ratios: np.ndarray            # contributions / model
    total: float
    mu: float
    sigma: float
    b: float
    pairs_used: int
    skipped: int                  # pairs never separated before truncation


def energy_integral_mc(spec: RandomMapSpec, mu: Optional[float] = None,
                       pairs: int = 20000, resamples: int = 8,
                       b: Optional[float] = None) -> EnergyReport:
    """Monte Carlo estimate of the double energy integral

        E_xi  integral integral  1 / phi(|u_xi(x) - u_xi(y)|)  dm(x) dm(y)

    bucketed by the separation generation of the pair: the first generation
    at which x and y sit in different construction cubes.  At that
    generation the pair's bump-coefficient difference is of order coeff(j),
    so the bucket mean tracks j^(delta sigma - mu); the convergent sum of
    these is what keeps the image large for the target gauge.

    Pairs that share a cube through the final generation are unresolvable
    at the truncation depth (their true separation generation lies beyond
    it) and are excluded from the buckets; their count is reported as
    ``skipped``.
    """
    sigma = spec.sigma
    if mu is None:
        mu = 1.0 + spec.delta * sigma + 1.0
    lo, hi = spec.admissible_delta_interval(mu)
    if not (lo < spec.delta < hi):
        raise ValueError(f"delta = {spec.delta} outside the admissible "
                         f"interval ({lo:.4g}, {hi:.4g}) for mu = {mu}")
    if b is None:
        # small offset: at truncation depths this shallow a large offset
        # would swamp the log factor at the coefficient scales being probed,
        # hiding its linear-in-j growth that the level series relies on
        b = 1.0
    phi = slow_target_gauge(sigma, mu, b)
    cantor = build_cantor(spec.cantor_spec())
    rng_pts = derive_rng(spec.seed, "energy-points")
    rng_xi = derive_rng(spec.seed, "energy-xi")
    xs, px = sample_cantor_points(cantor, pairs, rng_pts, with_paths=True)
    ys, py = sample_cantor_points(cantor, pairs, rng_pts, with_paths=True)

    # first generation where the ancestor cubes differ; depth+1 = never
    differ = px != py
    sep = np.where(differ.any(axis=1), differ.argmax(axis=1) + 1,
                   spec.depth + 1)
    alive = sep <= spec.depth
    skipped = int(np.sum(~alive))

    mp = RandomBumpMap(spec, cantor, rng=rng_xi)
    ax = mp.coefficients(xs)
    ay = mp.coefficients(ys)
    diffs = [mx - my for mx, my in zip(ax, ay)]   # per-generation a_Q(x,y)

    inv_acc = np.zeros(pairs)
    for _ in range(resamples):
        disp = np.zeros((pairs, spec.n))
        for d in diffs:
            xi = draw_ball_vectors(rng_xi, d.shape[1], spec.n)
            disp += d @ xi
        mag = np.linalg.norm(disp, axis=1)
        ok = alive & (mag > 0)
        inv_acc[ok] += 1.0 / phi(mag[ok])
    inv_mean = inv_acc / resamples

    levels = np.arange(1, spec.depth + 1)
    # bucket means times the bucket's share of pairs: a stratified estimate
    # of each generation's contribution to the double integral
    contrib = np.array([np.sum(inv_mean[sep == j]) / pairs for j in levels])
    model = levels.astype(float) ** (spec.delta * sigma - mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(contrib > 0, contrib / model, np.nan)
    return EnergyReport(levels=levels, contributions=contrib, model=model,
                        ratios=ratios, total=float(np.sum(contrib)),
                        mu=mu, sigma=sigma, b=phi.b,
                        pairs_used=pairs - skipped, skipped=skipped)


@dataclass
class CoverSumReport:
    levels: np.ndarray
    sums: np.ndarray
    diam_by_level: list


def image_cover_sums(spec: RandomMapSpec, probe: Callable,
                     max_points: int = 48) -> CoverSumReport:
    """Per-generation sums of probe(diam u(Q cap M)) over the generation's
    cubes, for one realized map; rising sums witness a large image.

    Stops one generation short of the truncation depth: the truncated map
    is constant on final-generation cubes (their oscillation lives entirely
    in the generations that were cut off), so probing them says nothing.
    """
    cantor = build_cantor(spec.cantor_spec())
    mp = RandomBumpMap(spec, cantor)
    rng = derive_rng(spec.seed, "cover-points")
    sums, diams_all = [], []
    for j, fam in enumerate(cantor.levels[:-1], start=1):
        diams = []
        for Q in fam:
            pts = _points_under(cantor, Q, j, max_points, rng)
            img = mp(pts)
            d = _diameter(img)
            diams.append(d)
        diams = np.array(diams)
        sums.append(float(np.sum(probe(diams))))
        diams_all.append(diams)
    return CoverSumReport(levels=np.arange(1, spec.depth),
                          sums=np.array(sums), diam_by_level=diams_all)


def _points_under(cantor: CantorSet, Q: DyadicCube, j: int,
                  max_points: int, rng: np.random.Generator) -> np.ndarray:
    cubes = [Q]
    for _ in range(j, cantor.spec.depth):
        cubes = [ch for c in cubes for ch in cantor.children[c]]
        if len(cubes) > max_points:
            idx = rng.choice(len(cubes), size=max_points, replace=False)
            cubes = [cubes[i] for i in sorted(idx)]
    return np.array([c.center() for c in cubes])


def _diameter(points: np.ndarray) -> float:
    d = points[:, None, :] - points[None, :, :]
    return float(np.max(np.linalg.norm(d, axis=2)))


# -- pointwise oscillation control -------------------------------------------------

def morrey_residual(u: Callable, corner: np.ndarray, side: float,
                    A: YoungFunction, sob: SobolevResult, lam: float,
                    kappa: float, grid: int = 17) -> float:
    """Residual of the oscillation bound on a cube Q = corner + [0, side]^n:

        d(Q)^n * B( d(u(Q)) / (kappa lam d(Q)) ) / kappa
            <=  integral_Q A(|grad u| / lam)            (residual = LHS - RHS)

    Nonpositive residuals confirm the constant kappa for this map.
    """
    n = sob.n
    corner = np.asarray(corner, dtype=float)
    axes = [np.linspace(0.0, side, grid) for _ in range(n)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    pts = corner + mesh.reshape(-1, n)
    vals = np.atleast_2d(u(pts))
    h = side / (grid - 1)
    shape = (grid,) * n + (vals.shape[1],)
    fgrid = vals.reshape(shape)
    grads = np.stack(np.gradient(fgrid, h, axis=tuple(range(n))), axis=0)
    gnorm = np.sqrt(np.sum(grads ** 2, axis=(0, -1))).ravel()
    w = np.full(gnorm.shape, h ** n)
    from .young import modular
    rhs = modular(FieldSample(values=gnorm, weights=w), A, lam)
    dQ = side * math.sqrt(n)
    duQ = _diameter(vals)
    if duQ == 0.0:
        return -rhs
    lhs = dQ ** n / kappa * sob.B.at(duQ / (kappa * lam * dQ))
    return float(lhs - rhs)
