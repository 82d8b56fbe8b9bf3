"""Lipschitz graph domains: distance, corkscrew points, flattening,
domain approach regions, surface measure, and boundary norms.

The domain is the epigraph of a sampled profile phi on the periodic
base grid.  The certified Lipschitz constant is the maximum discrete
slope between adjacent samples; profiles violating a declared constant
are rejected at construction.  Boundary scans only read the graph data.
"""

import math
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ParameterError
from .extension import annuli_surrogate, dyadic_heights
from .grid import GridFunction, load_grid_function, lp_norm, save_grid_function
from .maximal import ApproachRegionSpec, region_contains, tangential_max
from .potentials import multi_indices, slobodeckij_seminorm, spectral_derivative
from .rng import stream


@dataclass(frozen=True)
class LipschitzGraph:
    """Sampled boundary profile with certified Lipschitz constant M."""

    phi: GridFunction
    M: float
    smooth_class: int = 0


@dataclass(frozen=True)
class BoundaryPoint:
    """Q = (lift, x) with lift = phi(x) at grid resolution."""

    x: np.ndarray
    lift: float


def _max_discrete_slope(phi: GridFunction) -> float:
    g = phi.grid
    if g.dim == 1:
        d = np.abs(np.diff(phi.samples, append=phi.samples[0]))
        return float(d.max() / g.h)
    arr = phi.as_array()
    d0 = np.abs(arr - np.roll(arr, -1, axis=0))
    d1 = np.abs(arr - np.roll(arr, -1, axis=1))
    return float(max(d0.max(), d1.max()) / g.h)


def lipschitz_graph(phi: GridFunction, M: float | None = None,
                    smooth_class: int = 0) -> LipschitzGraph:
    """Certify the discrete Lipschitz constant; reject declared-M violations."""
    slope = _max_discrete_slope(phi)
    if M is None:
        M = slope
    elif slope > M * (1.0 + 1e-9):
        raise ParameterError(
            f"profile has discrete slope {slope:.6g} exceeding declared M={M}")
    if smooth_class < 0:
        raise ParameterError("smooth_class must be >= 0")
    return LipschitzGraph(phi=phi, M=float(M), smooth_class=int(smooth_class))


def phi_at(graph: LipschitzGraph, x) -> float:
    """Profile value at the grid sample nearest to a base point."""
    from .grid import nearest_index

    return float(graph.phi.samples[nearest_index(graph.phi.grid, x)])


def boundary_point(graph: LipschitzGraph, x) -> BoundaryPoint:
    xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return BoundaryPoint(x=xa, lift=phi_at(graph, x))


def graph_distance(graph: LipschitzGraph, X) -> float:
    """Distance from X = (t, x) to the sampled boundary points (phi(x_i), x_i).

    An upper bound of the true distance, within O(h (1 + M)).
    """
    X = np.asarray(X, dtype=np.float64).reshape(-1)
    g = graph.phi.grid
    if g.dim == 1:
        out = _kernels.min_dist_graph_1d(np.array([X[0]]), np.array([X[1]]),
                                         graph.phi.samples, g.h, g.extent)
        return float(out[0])
    xs = g.axis_coords()
    x0, x1 = np.meshgrid(xs, xs, indexing="ij")
    d0 = np.abs(x0 - X[1])
    d0 = np.minimum(d0, g.extent - d0)
    d1 = np.abs(x1 - X[2])
    d1 = np.minimum(d1, g.extent - d1)
    dt = graph.phi.as_array() - X[0]
    return float(np.sqrt(np.min(d0 * d0 + d1 * d1 + dt * dt)))


def graph_distance_batch(graph: LipschitzGraph, ts, xs) -> np.ndarray:
    """Vector version of graph_distance for dim-1 bases."""
    g = graph.phi.grid
    if g.dim != 1:
        raise ParameterError("batch distance is implemented for dim=1 bases")
    return _kernels.min_dist_graph_1d(np.asarray(ts, float), np.asarray(xs, float),
                                      graph.phi.samples, g.h, g.extent)


def corkscrew_kappa(M: float) -> float:
    """Interior-clearance constant of the explicit corkscrew point."""
    if M <= 1.0:
        return 0.5
    return min(0.25, 1.0 / (2.0 * (M - 1.0)))


def corkscrew(graph: LipschitzGraph, x0, t: float) -> np.ndarray:
    """(phi(x0) + t, x0): an interior point with clearance at least kappa(M) t."""
    if t <= 0:
        raise ParameterError(f"t must be positive, got {t}")
    x0a = np.atleast_1d(np.asarray(x0, dtype=np.float64))
    return np.concatenate([[phi_at(graph, x0) + t], x0a])


def flatten(graph: LipschitzGraph, X, direction: str = "forward") -> np.ndarray:
    """(t, x) <-> (t -+ phi(x), x); forward requires X strictly above the graph."""
    X = np.asarray(X, dtype=np.float64).reshape(-1)
    lift = phi_at(graph, X[1:])
    if direction == "forward":
        if X[0] <= lift:
            raise DomainError("point is not strictly above the graph")
        return np.concatenate([[X[0] - lift], X[1:]])
    if direction == "inverse":
        return np.concatenate([[X[0] + lift], X[1:]])
    raise ParameterError(f"unknown direction {direction!r}")


def domain_region_contains(graph: LipschitzGraph, beta: float, c: float,
                           Q0: BoundaryPoint, X) -> bool:
    """Membership in the domain approach region with widening constant c."""
    if not (0.0 < beta <= 1.0):
        raise ParameterError(f"beta must lie in (0, 1], got {beta}")
    if c <= 0:
        raise ParameterError(f"c must be positive, got {c}")
    X = np.asarray(X, dtype=np.float64).reshape(-1)
    if X[0] <= phi_at(graph, X[1:]):
        return False
    d = graph_distance(graph, X)
    if d <= 0.0:
        return False
    g = graph.phi.grid
    dx = X[1:] - Q0.x
    dx = np.abs((dx + g.extent / 2.0) % g.extent - g.extent / 2.0)
    gap = float(np.hypot(*dx) if dx.size == 2 else dx[0])
    sep = math.hypot(gap, X[0] - Q0.lift)
    bound = (1.0 + c) * (d ** beta if d <= 1.0 else d)
    return sep < bound


@dataclass(frozen=True)
class InclusionReport:
    checked: int
    violations: int
    witnesses: tuple


def region_inclusion_check(graph: LipschitzGraph, beta: float, c: float,
                           samples: int, seed: int = 0,
                           target_aperture: float | None = None
                           ) -> InclusionReport:
    """Sample the domain region and verify it flattens into the widened
    half-space region.

    Sample base coordinates sit on the grid, where the sampled-boundary
    distance is exactly dominated by the vertical gap, so the inclusion
    holds without discretization slack.  target_aperture overrides the
    aperture 1 + c of the flattened target region; shrinking it serves
    as a negative control.
    """
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    g = graph.phi.grid
    if g.dim != 1:
        raise ParameterError("inclusion sampling is implemented for dim=1 bases")
    rng = stream(seed)
    checked = 0
    violations = 0
    witnesses = []
    attempts = 0
    max_attempts = 60 * samples
    n = g.n
    phi = graph.phi.samples
    if target_aperture is None:
        target_aperture = 1.0 + c
    while checked < samples and attempts < max_attempts:
        batch = min(65536, max_attempts - attempts)
        attempts += batch
        i0 = rng.integers(0, n, size=batch)
        gap = np.exp(rng.uniform(np.log(g.h / 4.0), 0.0, size=batch))
        reach = (1.0 + c) * gap ** beta * 1.2
        lateral = rng.uniform(-1.0, 1.0, size=batch) * reach
        ix = ((i0 * g.h + lateral) / g.h).round().astype(int) % n
        x = ix * g.h
        t = phi[ix] + gap
        d = graph_distance_batch(graph, t, x)
        q0x = i0 * g.h
        dx = np.abs(x - q0x)
        dx = np.minimum(dx, g.extent - dx)
        sep = np.hypot(dx, t - phi[i0])
        member = (d > 0) & (sep < (1.0 + c) * np.where(d <= 1.0, d ** beta, d))
        # flattened coordinates: the vertical gap is exact for on-grid x
        tp = gap
        ok = dx < target_aperture * np.where(tp <= 1.0, tp ** beta, tp)
        member_idx = np.nonzero(member)[0]
        take = member_idx[: samples - checked]
        checked += take.size
        bad = take[~ok[take]]
        violations += bad.size
        for b in bad[: max(0, 16 - len(witnesses))]:
            witnesses.append((float(q0x[b]), float(t[b]), float(x[b])))
    return InclusionReport(checked=checked, violations=violations,
                           witnesses=tuple(witnesses))


def _grad_norm_sq(phi: GridFunction) -> np.ndarray:
    g = phi.grid
    if g.dim == 1:
        grad = (np.roll(phi.samples, -1) - np.roll(phi.samples, 1)) / (2 * g.h)
        return grad * grad
    arr = phi.as_array()
    g0 = (np.roll(arr, -1, axis=0) - np.roll(arr, 1, axis=0)) / (2 * g.h)
    g1 = (np.roll(arr, -1, axis=1) - np.roll(arr, 1, axis=1)) / (2 * g.h)
    return (g0 * g0 + g1 * g1).reshape(-1)


def surface_density(graph: LipschitzGraph) -> np.ndarray:
    """Area-formula density sqrt(1 + |grad phi|^2) at every base sample."""
    return np.sqrt(1.0 + _grad_norm_sq(graph.phi))


def surface_ball_measure(graph: LipschitzGraph, Q: BoundaryPoint,
                         r: float) -> float:
    """sigma of the surface ball: area-formula sum over base samples whose
    lifts fall inside the ambient ball around Q."""
    g = graph.phi.grid
    if not (4.0 * g.h * (1.0 - 1e-12) <= r <= g.extent / 4.0 * (1.0 + 1e-12)):
        raise ParameterError(f"r must lie in [4h, extent/4], got {r}")
    dens = surface_density(graph)
    if g.dim == 1:
        xs = g.axis_coords()
        dx = np.abs(xs - Q.x[0])
        dx = np.minimum(dx, g.extent - dx)
        inside = dx * dx + (graph.phi.samples - Q.lift) ** 2 < r * r
    else:
        xs = g.axis_coords()
        x0, x1 = np.meshgrid(xs, xs, indexing="ij")
        d0 = np.abs(x0 - Q.x[0])
        d0 = np.minimum(d0, g.extent - d0)
        d1 = np.abs(x1 - Q.x[1])
        d1 = np.minimum(d1, g.extent - d1)
        d2 = (d0 * d0 + d1 * d1).reshape(-1)
        inside = d2 + (graph.phi.samples - Q.lift) ** 2 < r * r
    return float(np.sum(dens[inside]) * g.h ** g.dim)


def lp_norm_sigma(graph: LipschitzGraph, f: GridFunction, p: float) -> float:
    """L^p norm of boundary data against the surface measure."""
    dens = surface_density(graph)
    hpow = f.grid.h ** f.grid.dim
    return float((hpow * np.sum(np.abs(f.samples) ** p * dens)) ** (1.0 / p))


def boundary_seminorm(graph: LipschitzGraph, f: GridFunction, s: float,
                      p: float) -> float:
    """Chart-pullback Sobolev norm of boundary data on the base grid.

    Integer part through spectral derivatives, fractional part through
    the Slobodeckij pair sum; s = 0 reduces to the L^p norm.
    """
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    if s < 0 or s >= 4:
        raise ParameterError(f"s must lie in [0, 4), got {s}")
    m = int(math.floor(s))
    sigma = s - m
    g = f.grid
    total = 0.0
    for gam in multi_indices(g.dim, m):
        df = spectral_derivative(f, gam) if sum(gam) else f
        total += lp_norm(df, p) ** p
        if sigma > 0 and sum(gam) == m:
            total += slobodeckij_seminorm(df, sigma, p) ** p
    return float(total ** (1.0 / p))


@dataclass(frozen=True)
class SurrogateParams:
    alpha_L: float = 0.5
    p0: float = 1.5
    J: int = 20


def boundary_tangential_max(graph: LipschitzGraph, f: GridFunction,
                            beta: float, c: float,
                            params: SurrogateParams = SurrogateParams()
                            ) -> GridFunction:
    """Flattened localization bound: annuli surrogate of the chart pullback,
    swept by the tangential maximal operator at aperture 1 + c."""
    if c <= 0:
        raise ParameterError(f"c must be positive, got {c}")
    heights = dyadic_heights(1.0, grid=f.grid)
    w = annuli_surrogate(f, heights, params.alpha_L, params.p0, params.J)
    spec = ApproachRegionSpec(beta=beta, aperture=1.0 + c, t_max=heights[0],
                              flavor="graph_domain", c=c)
    return tangential_max(w, spec)


def save_lipschitz_graph(path, graph: LipschitzGraph) -> None:
    """Profile in the grid-function binary format plus (M, smooth_class)."""
    save_grid_function(path, graph.phi)
    with open(path, "ab") as fh:
        fh.write(struct.pack("<dI", graph.M, graph.smooth_class))


def load_lipschitz_graph(path) -> LipschitzGraph:
    phi = load_grid_function(path)
    with open(path, "rb") as fh:
        data = fh.read()
    M, smooth_class = struct.unpack("<dI", data[-12:])
    return lipschitz_graph(phi, M=M, smooth_class=smooth_class)
