"""Approach-region membership and the maximal operators built on them.

All suprema are over the sampled (t_k, x_i) lattice, so every operator
here is a lower bound for its continuum counterpart, monotone under
height and grid refinement.  Scans are window sweeps per height: the
region of a boundary point at height t is a centered window whose
radius follows the region law.

Operators read fields without mutating them, and the scan order per
output point is fixed, so results are independent of execution layout.
"""

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter, minimum_filter

from . import _kernels
from .errors import CoverageError, ParameterError
from .extension import HalfSpaceField, annuli_surrogate, dyadic_heights, poisson_extend
from .grid import Grid, GridFunction, ball_mean_all_centers, torus_distance, \
    window_halfwidth
from .potentials import dyadic_scales, sharp_maximal


@dataclass(frozen=True)
class ApproachRegionSpec:
    """Region law: lateral radius aperture*t^beta for t <= 1, aperture*t above.

    flavor "half_space" is the flat-boundary region; "graph_domain" marks
    specs destined for Lipschitz-graph use, where the widening constant c
    replaces the aperture via a = 1 + c.
    """

    beta: float
    aperture: float = 1.0
    t_max: float = 1.0
    flavor: str = "half_space"
    c: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise ParameterError(f"beta must lie in (0, 1], got {self.beta}")
        if self.aperture <= 0:
            raise ParameterError(f"aperture must be positive, got {self.aperture}")
        if self.flavor not in ("half_space", "graph_domain"):
            raise ParameterError(f"unknown flavor {self.flavor!r}")
        if self.flavor == "graph_domain" and self.c <= 0:
            raise ParameterError("graph_domain flavor needs c > 0")

    def radius(self, t: float) -> float:
        return self.aperture * (t ** self.beta if t <= 1.0 else t)


def region_contains(spec: ApproachRegionSpec, x0, t: float, x,
                    grid: Grid | None = None, extent: float = 1.0) -> bool:
    """Membership of (t, x) in the region with vertex x0, torus metric."""
    if t <= 0:
        raise ParameterError(f"t must be positive, got {t}")
    if grid is not None:
        dist = torus_distance(grid, x, x0)
    else:
        a = np.atleast_1d(np.asarray(x, dtype=np.float64))
        b = np.atleast_1d(np.asarray(x0, dtype=np.float64))
        d = np.abs(a - b)
        d = np.minimum(d, extent - d)
        dist = float(np.hypot(*d) if d.size == 2 else d[0])
    return dist < spec.radius(t)


def _window_extreme(slice_vals: np.ndarray, grid: Grid, radius: float,
                    mode: str = "max") -> np.ndarray:
    """Window max/min of a slice over torus balls of the given radius."""
    k = window_halfwidth(radius, grid.h)
    if grid.dim == 1:
        fn = _kernels.circ_max_1d if mode == "max" else _kernels.circ_min_1d
        return fn(slice_vals, k)
    arr = slice_vals.reshape(grid.shape)
    o = np.arange(-k, k + 1)
    o0, o1 = np.meshgrid(o, o, indexing="ij")
    disc = (o0 * o0 + o1 * o1) * grid.h * grid.h < radius * radius * (1.0 - 1e-12)
    fn = maximum_filter if mode == "max" else minimum_filter
    return fn(arr, footprint=disc, mode="wrap").reshape(-1)


def _usable_heights(u: HalfSpaceField, t_max: float) -> list:
    return [k for k, t in enumerate(u.heights) if t <= t_max * (1.0 + 1e-12)]


def _coverage_check(u: HalfSpaceField, spec: ApproachRegionSpec) -> list:
    usable = _usable_heights(u, spec.t_max)
    if len(usable) < 2:
        h = u.grid.h
        t_ref = min(u.heights)
        a_min = h / (t_ref ** spec.beta if t_ref <= 1 else t_ref)
        raise CoverageError(
            f"fewer than 2 field heights at or below t_max={spec.t_max}; "
            f"smallest aperture with a lateral sample at t={t_ref} is {a_min:.4g}")
    return usable


def tangential_max(u: HalfSpaceField, spec: ApproachRegionSpec) -> GridFunction:
    """sup over sampled region points of |u|, per boundary point."""
    usable = _coverage_check(u, spec)
    out = np.zeros(u.grid.size)
    for k in usable:
        wm = _window_extreme(np.abs(u.values[k]), u.grid,
                             spec.radius(u.heights[k]))
        np.maximum(out, wm, out=out)
    return GridFunction(u.grid, out)


def tangential_argmax(u: HalfSpaceField, spec: ApproachRegionSpec):
    """(maximal values, witnesses): per x0 the lowest (k, i) attaining the sup.

    Direct scan, intended for diagnostic output at CLI scale.
    """
    usable = _coverage_check(u, spec)
    g = u.grid
    n = g.n
    best = np.full(g.size, -np.inf)
    wit_k = np.zeros(g.size, dtype=int)
    wit_i = np.zeros(g.size, dtype=int)
    if g.dim != 1:
        raise ParameterError("argmax witnesses are implemented for dim=1")
    for k in usable:
        absrow = np.abs(u.values[k])
        hw = window_halfwidth(spec.radius(u.heights[k]), g.h)
        for x0 in range(n):
            lo = x0 - hw
            idxs = np.arange(lo, x0 + hw + 1) % n
            vals = absrow[idxs]
            top = vals.max()
            if top > best[x0]:
                best[x0] = top
                wit_k[x0] = k
                # ties resolve to the lowest sample index, wrap included
                wit_i[x0] = int(idxs[vals == top].min())
    return GridFunction(g, best), list(zip(wit_k.tolist(), wit_i.tolist()))


def mitigated_max(u: HalfSpaceField, p: float, beta: float) -> GridFunction:
    """sup of t^{n(1-beta)/p} |u(t,x)| over the beta-region with t <= 1."""
    if p <= 0:
        raise ParameterError(f"p must be positive, got {p}")
    spec = ApproachRegionSpec(beta=beta, aperture=1.0, t_max=1.0)
    usable = _coverage_check(u, spec)
    g = u.grid
    expo = g.dim * (1.0 - beta) / p
    out = np.zeros(g.size)
    for k in usable:
        t = u.heights[k]
        wm = _window_extreme(np.abs(u.values[k]), g, spec.radius(t))
        np.maximum(out, t ** expo * wm, out=out)
    return GridFunction(g, out)


def dilated_mitigated_max(v: HalfSpaceField, p: float, beta: float,
                          j: int) -> GridFunction:
    """Dilated local maximal function: slice at height t_k stands for the
    dilated height t = t_k / 2^j, scanned while t < 2^{-j/(1-beta)}."""
    if p <= 0:
        raise ParameterError(f"p must be positive, got {p}")
    if j < 0:
        raise ParameterError(f"j must be >= 0, got {j}")
    if not (0.0 < beta < 1.0):
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")
    g = v.grid
    threshold = 2.0 ** (-j / (1.0 - beta))
    scan = [(k, t * 2.0 ** (-j)) for k, t in enumerate(v.heights)
            if t * 2.0 ** (-j) < threshold]
    if not scan:
        raise CoverageError(
            f"no field heights give dilated heights below {threshold:.4g} for j={j}")
    expo = g.dim * (1.0 - beta) / p
    pref = 2.0 ** (g.dim * j / p)
    out = np.zeros(g.size)
    for k, t in scan:
        wm = _window_extreme(np.abs(v.values[k]), g, t ** beta)
        np.maximum(out, pref * t ** expo * wm, out=out)
    return GridFunction(g, out)


def _dyadic_radii(grid: Grid, floor: float) -> list:
    radii = []
    r = grid.extent / 4.0
    while r >= floor * (1.0 - 1e-12):
        radii.append(r)
        r /= 2.0
    return radii


def fractional_power_max(f: GridFunction, s: float = 1.0,
                         alpha: float = 0.0) -> GridFunction:
    """sup over dyadic radii in [4h, extent/4] of r^alpha (avg_Delta |f|^s)^{1/s}.

    alpha = 0, s = 1 is the (restricted-radius) Hardy-Littlewood maximal
    function; positive alpha gives the fractional variant.
    """
    if s < 1:
        raise ParameterError(f"s must be >= 1, got {s}")
    if not (0 <= alpha < f.grid.dim):
        raise ParameterError(f"alpha must lie in [0, {f.grid.dim}), got {alpha}")
    return _radius_family_max(f, s, alpha, floor=4.0 * f.grid.h)


def hl_max_q(f: GridFunction, q: float = 1.0) -> GridFunction:
    """Hardy-Littlewood q-power maximal function over dyadic radii in [h, extent/4]."""
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    return _radius_family_max(f, q, 0.0, floor=f.grid.h)


def _radius_family_max(f: GridFunction, s: float, alpha: float,
                       floor: float) -> GridFunction:
    out = np.zeros(f.grid.size)
    for rad in _dyadic_radii(f.grid, floor):
        vals = rad ** alpha * ball_mean_all_centers(f, rad, s)
        np.maximum(out, vals, out=out)
    return GridFunction(f.grid, out)


def composite_max(f: GridFunction, p: float, r: float, beta: float,
                  alpha_L: float = 0.5, J: int = 20) -> GridFunction:
    """Weighted assembly dominating tangential maxima of annuli-model fields.

    sum_j 2^{-alpha_L j} M_{p,beta,j}(w)  +  (sum_j 2^{-alpha_L j}) *
    (N_{*,beta} applied to the Poisson extension of f  +  M_r f),
    with w the annuli surrogate built on the sharp maximal function of f
    at smoothness alpha = n(1-beta)/p.  Terms whose dilated scan range is
    empty at this grid's height ladder contribute zero.
    """
    if not (1.0 < r < p):
        raise ParameterError(f"need 1 < r < p, got r={r}, p={p}")
    if not (0.0 < beta < 1.0):
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")
    g = f.grid
    alpha = g.dim * (1.0 - beta) / p
    heights = dyadic_heights(1.0, grid=g)
    sharp = sharp_maximal(f, alpha, dyadic_scales(g))
    w_field = annuli_surrogate(sharp, heights, alpha_L, r, J)
    total = np.zeros(g.size)
    geo = 0.0
    for j in range(J + 1):
        weight = 2.0 ** (-alpha_L * j)
        geo += weight
        try:
            term = dilated_mitigated_max(w_field, p, beta, j)
        except CoverageError:
            continue
        total += weight * term.samples
    u = poisson_extend(f, heights)
    spec = ApproachRegionSpec(beta=beta, aperture=1.0, t_max=heights[0])
    ntan = tangential_max(u, spec)
    mr = hl_max_q(f, r)
    total += geo * (ntan.samples + mr.samples)
    return GridFunction(g, total)
