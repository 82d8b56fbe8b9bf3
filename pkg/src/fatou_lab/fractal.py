"""Self-similar fractional measures, box dimension, divergence sets.

The Cantor measure at depth d is the uniform measure on the 2^d level-d
intervals of a two-branch self-similar set with contraction 2^(-1/s),
so its similarity dimension is exactly s.  Ball masses are computed
from the exact piecewise-linear CDF of this approximation.  All types
here are frozen and all routines pure.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .extension import HalfSpaceField
from .grid import Grid, GridFunction
from .maximal import ApproachRegionSpec, _window_extreme


@dataclass(frozen=True)
class CantorMeasure:
    """Two-branch self-similar probability measure of dimension s on [0, 1]."""

    dim_target: float
    ratio: float
    depth: int
    lefts: np.ndarray  # sorted left endpoints of the level-depth intervals

    def __post_init__(self):
        arr = np.asarray(self.lefts, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "lefts", arr)

    @property
    def interval_length(self) -> float:
        return self.ratio ** self.depth

    @property
    def interval_mass(self) -> float:
        return 2.0 ** (-self.depth)

    @property
    def rights(self) -> np.ndarray:
        return self.lefts + self.interval_length

    def cdf(self, x) -> np.ndarray:
        """Exact CDF of the depth-approximation at points x."""
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        rights = self.rights
        full = np.searchsorted(rights, x, side="right")
        idx = np.searchsorted(self.lefts, x, side="right") - 1
        partial = np.zeros_like(x)
        inside = (idx >= 0) & (idx < self.lefts.size)
        ii = idx[inside]
        frac = (x[inside] - self.lefts[ii]) / self.interval_length
        straddle = (frac > 0) & (frac < 1)
        partial[inside] = np.where(straddle, np.clip(frac, 0, 1), 0.0)
        return (full + partial) * self.interval_mass

    def ball_mass(self, x, r) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return self.cdf(x + r) - self.cdf(x - r)


@dataclass(frozen=True)
class PointSet:
    """Coordinates on the torus together with their resolution context."""

    points: np.ndarray
    grid: Grid

    def __post_init__(self):
        arr = np.asarray(self.points, dtype=np.float64)
        if arr.size and not (arr.min() >= 0 and arr.max() < self.grid.extent):
            raise ParameterError("points must lie in [0, extent)")
        arr.flags.writeable = False
        object.__setattr__(self, "points", arr)


def cantor_measure(s: float, depth: int) -> CantorMeasure:
    """Standard two-branch construction with contraction 2^(-1/s)."""
    if not (0.0 < s <= 1.0):
        raise ParameterError(f"s must lie in (0, 1], got {s}")
    if not (1 <= depth <= 24):
        raise ParameterError(f"depth must lie in [1, 24], got {depth}")
    rho = 2.0 ** (-1.0 / s)
    lefts = np.array([0.0])
    size = 1.0
    for _ in range(depth):
        lefts = np.concatenate([lefts, lefts + size * (1.0 - rho)])
        size *= rho
    return CantorMeasure(dim_target=float(s), ratio=rho, depth=depth,
                         lefts=np.sort(lefts))


def frostman_constant(mu: CantorMeasure, radii) -> float:
    """max over radii and ball positions of mu(Delta(x, r)) / r^s.

    For each radius the map x -> mu((x-r, x+r)) is piecewise linear with
    breakpoints where x -+ r meets an interval endpoint, so scanning
    interval endpoints, midpoints, and their +-r shifts certifies the
    exact maximum at that radius.
    """
    radii = [float(r) for r in np.atleast_1d(radii)]
    lo = mu.interval_length * (1.0 - 1e-12)
    if any(r < lo or r > 1.0 + 1e-12 for r in radii):
        raise ParameterError("radii must lie in [ratio^depth, 1]")
    ends = np.concatenate([mu.lefts, mu.rights,
                           mu.lefts + mu.interval_length / 2.0])
    best = 0.0
    for r in radii:
        centers = np.concatenate([ends, ends - r, ends + r])
        best = max(best, float(np.max(mu.ball_mass(centers, r))) / r ** mu.dim_target)
    return best


def integrate_against(f: GridFunction, mu: CantorMeasure) -> float:
    """Midpoint rule: sum of interval mass times f at the nearest grid point."""
    if f.grid.extent < 1.0:
        raise ParameterError("measure support [0,1] exceeds the torus extent")
    mids = mu.lefts + mu.interval_length / 2.0
    n, h = f.grid.n, f.grid.h
    idx = np.round(mids / h).astype(int) % n
    if f.grid.dim == 2:
        idx = idx * n  # embed on the first axis row x1 = 0
    return float(np.sum(f.samples[idx]) * mu.interval_mass)


@dataclass(frozen=True)
class BoxDimension:
    slope: float
    r2: float
    counts: tuple
    scales: tuple
    empty: bool = False


def box_dimension(points: PointSet, scale_window) -> BoxDimension:
    """Dyadic box-counting slope of log2 N(2^-m) against m over the window."""
    m_lo, m_hi = int(scale_window[0]), int(scale_window[1])
    if not (0 < m_lo < m_hi):
        raise ParameterError(f"need 0 < m_lo < m_hi, got ({m_lo}, {m_hi})")
    if m_hi > points.grid.levels:
        raise ParameterError(
            f"m_hi={m_hi} exceeds grid levels {points.grid.levels}")
    pts = np.atleast_2d(points.points.reshape(-1, points.grid.dim))
    if pts.shape[0] == 0:
        return BoxDimension(slope=0.0, r2=0.0, counts=(), scales=(), empty=True)
    ms = list(range(m_lo, m_hi + 1))
    counts = []
    for m in ms:
        side = points.grid.extent * 2.0 ** (-m)
        cells = np.floor(pts / side).astype(np.int64)
        counts.append(len({tuple(row) for row in cells}))
    x = np.asarray(ms, dtype=float)
    y = np.log2(np.asarray(counts, dtype=float))
    xm, ym = x.mean(), y.mean()
    denom = np.sum((x - xm) ** 2)
    slope = float(np.sum((x - xm) * (y - ym)) / denom)
    ss_res = float(np.sum((y - ym - slope * (x - xm)) ** 2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return BoxDimension(slope=slope, r2=r2, counts=tuple(counts),
                        scales=tuple(ms), empty=False)


def divergence_set(u: HalfSpaceField, f_ref: GridFunction,
                   spec: ApproachRegionSpec, eps: float,
                   t_min: float) -> PointSet:
    """Grid points whose localized region oscillation against f_ref exceeds eps.

    Scans sampled region points with height at most t_min; the set
    shrinks as eps grows and grows as t_min grows.
    """
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if not any(abs(t - t_min) <= 1e-12 * t_min for t in u.heights):
        raise ParameterError(f"t_min={t_min} is not among the field heights")
    scan = [k for k, t in enumerate(u.heights) if t <= t_min * (1.0 + 1e-12)]
    if not scan:
        raise ParameterError(f"t_min={t_min} is below the finest height")
    g = u.grid
    osc = np.zeros(g.size)
    for k in scan:
        rad = spec.radius(u.heights[k])
        hi = _window_extreme(u.values[k], g, rad, mode="max")
        lo = _window_extreme(u.values[k], g, rad, mode="min")
        np.maximum(osc, hi - f_ref.samples, out=osc)
        np.maximum(osc, f_ref.samples - lo, out=osc)
    mask = osc > eps
    if g.dim == 1:
        coords = g.h * np.nonzero(mask)[0]
    else:
        flat = np.nonzero(mask)[0]
        coords = np.stack([g.h * (flat // g.n), g.h * (flat % g.n)], axis=1)
    return PointSet(points=coords, grid=g)
