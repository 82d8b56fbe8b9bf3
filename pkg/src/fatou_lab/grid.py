"""Periodic sampled-function substrate.

Functions live on the torus [0, extent)^dim sampled on a uniform grid of
N = 2^levels points per axis.  Everything downstream (kernels, maximal
operators, boundary geometry) is built on the primitives here: norms,
ball averages with wrap-around metric, and scaled circular convolution.

Grids and grid functions are immutable once built and every operation is
a pure function, so concurrent callers need no synchronization.
"""

import csv
import math
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GridMismatchError, ParameterError

_MAGIC = b"FLGF"
_VERSION = 1


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, extent)^dim with 2^levels points per axis."""

    dim: int
    levels: int
    extent: float

    @property
    def n(self) -> int:
        return 1 << self.levels

    @property
    def h(self) -> float:
        return self.extent / self.n

    @property
    def size(self) -> int:
        return self.n ** self.dim

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dim

    def axis_coords(self) -> np.ndarray:
        return self.h * np.arange(self.n)


class GridFunction:
    """Immutable real samples on a Grid, stored flat (row-major for dim=2)."""

    __slots__ = ("grid", "samples")

    def __init__(self, grid: Grid, samples):
        arr = np.asarray(samples, dtype=np.float64).reshape(-1).copy()
        if arr.size != grid.size:
            raise ParameterError(
                f"expected {grid.size} samples for {grid}, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "samples", arr)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    def as_array(self) -> np.ndarray:
        """Samples reshaped to (N,)*dim; a read-only view."""
        return self.samples.reshape(self.grid.shape)


def make_grid(dim: int, levels: int, extent: float) -> Grid:
    """Build a grid; index i maps to coordinate x_i = i*h per axis."""
    if dim not in (1, 2):
        raise ParameterError(f"dim must be 1 or 2, got {dim}")
    max_levels = 24 if dim == 1 else 12
    if not (2 <= levels <= max_levels):
        raise ParameterError(
            f"levels must lie in [2, {max_levels}] for dim={dim}, got {levels}")
    if not (extent > 0 and math.isfinite(extent)):
        raise ParameterError(f"extent must be positive, got {extent}")
    return Grid(dim=dim, levels=levels, extent=float(extent))


def from_callable(grid: Grid, fn) -> GridFunction:
    """Sample fn on the grid.  dim=1: fn(x); dim=2: fn(x0, x1), vectorized."""
    x = grid.axis_coords()
    if grid.dim == 1:
        return GridFunction(grid, fn(x))
    x0, x1 = np.meshgrid(x, x, indexing="ij")
    return GridFunction(grid, fn(x0, x1))


def lp_norm(f: GridFunction, p: float) -> float:
    """Discrete L^p norm (h^dim * sum |f|^p)^(1/p); p = inf gives max |f|."""
    if p == np.inf or p == math.inf:
        return float(np.max(np.abs(f.samples))) if f.samples.size else 0.0
    if p < 1:
        raise ParameterError(f"p must be >= 1 or inf, got {p}")
    hpow = f.grid.h ** f.grid.dim
    return float((hpow * np.sum(np.abs(f.samples) ** p)) ** (1.0 / p))


def wrapped_abs_delta(a, b, extent: float):
    """Torus distance per axis: min(|a-b|, extent-|a-b|)."""
    d = np.abs(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64))
    return np.minimum(d, extent - d)


def torus_distance(grid: Grid, x, y) -> float:
    """Euclidean distance on the torus between points x, y."""
    if grid.dim == 1:
        return float(wrapped_abs_delta(float(np.ravel(x)[0]), float(np.ravel(y)[0]),
                                       grid.extent))
    dx = wrapped_abs_delta(np.asarray(x, float), np.asarray(y, float), grid.extent)
    return float(np.hypot(dx[0], dx[1]))


def window_halfwidth(radius: float, h: float) -> int:
    """Largest integer K with K*h strictly below radius (K >= 0)."""
    if radius <= 0:
        return -1
    return max(0, int(math.ceil(radius / h * (1.0 - 1e-12))) - 1)


def _ball_indices(grid: Grid, center, radius: float):
    """Flat indices of grid points strictly inside the torus ball."""
    h, n = grid.h, grid.n
    if grid.dim == 1:
        c = float(np.ravel(center)[0])
        base = int(math.floor(c / h))
        kmax = int(math.ceil(radius / h)) + 1
        offs = np.arange(base - kmax, base + kmax + 1)
        xs = offs * h
        keep = wrapped_abs_delta(xs, c, grid.extent) < radius
        return np.unique(offs[keep] % n)
    c = np.asarray(center, dtype=np.float64).reshape(2)
    base = np.floor(c / h).astype(int)
    kmax = int(math.ceil(radius / h)) + 1
    o = np.arange(-kmax, kmax + 1)
    i0, i1 = np.meshgrid(base[0] + o, base[1] + o, indexing="ij")
    d0 = wrapped_abs_delta(i0 * h, c[0], grid.extent)
    d1 = wrapped_abs_delta(i1 * h, c[1], grid.extent)
    keep = d0 * d0 + d1 * d1 < radius * radius
    flat = (i0[keep] % n) * n + (i1[keep] % n)
    return np.unique(flat)


def nearest_index(grid: Grid, point) -> int:
    """Flat index of the grid point nearest to a torus point."""
    n = grid.n
    if grid.dim == 1:
        c = float(np.ravel(point)[0])
        return int(round(c / grid.h)) % n
    c = np.asarray(point, dtype=np.float64).reshape(2)
    idx = np.round(c / grid.h).astype(int) % n
    return int(idx[0] * n + idx[1])


def ball_average(f: GridFunction, center, radius: float, q: float = 1.0) -> float:
    """q-power mean of |f| over grid points in the torus ball Delta(center, radius).

    Falls back to the nearest grid point's value when no grid point lies
    strictly inside the ball.
    """
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    if radius <= 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    idx = _ball_indices(f.grid, center, radius)
    if idx.size == 0:
        return float(np.abs(f.samples[nearest_index(f.grid, center)]))
    vals = np.abs(f.samples[idx]) ** q
    return float(np.mean(vals) ** (1.0 / q))


def ball_mean_signed(f: GridFunction, center, radius: float) -> float:
    """Plain (signed) mean of f over the ball; same fallback rule as ball_average."""
    idx = _ball_indices(f.grid, center, radius)
    if idx.size == 0:
        return float(f.samples[nearest_index(f.grid, center)])
    return float(np.mean(f.samples[idx]))


def _disc_mask_embedded(grid: Grid, radius: float) -> tuple:
    """(wrap-embedded 0/1 disc mask, point count) for batch 2-D ball sums."""
    n, h = grid.n, grid.h
    k = window_halfwidth(radius, h)
    o = np.arange(-k, k + 1)
    d0, d1 = np.meshgrid(o * h, o * h, indexing="ij")
    disc = (d0 * d0 + d1 * d1) < radius * radius * (1.0 - 1e-12)
    mask = np.zeros((n, n))
    ii = np.arange(-k, k + 1) % n
    mask[np.ix_(ii, ii)] += disc
    return mask, int(disc.sum())


def ball_mean_all_centers(f: GridFunction, radius: float, q: float = 1.0) -> np.ndarray:
    """ball_average(f, x_i, radius, q) for every grid point x_i at once.

    On the torus every grid-centered ball holds the same number of points,
    so this is a windowed sum: cumulative sums in dim 1, an FFT disc
    correlation in dim 2.  Returns a flat array aligned with f.samples.
    """
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    if radius <= 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    g = f.grid
    power = np.abs(f.samples) ** q
    if g.dim == 1:
        k = window_halfwidth(radius, g.h)
        sums = _kernels.circ_sum_1d(power, k)
        count = min(2 * k + 1, g.n)
    else:
        mask, count = _disc_mask_embedded(g, radius)
        arr = power.reshape(g.shape)
        sums = np.fft.irfft2(np.fft.rfft2(arr) * np.fft.rfft2(mask), s=g.shape)
        sums = np.maximum(sums, 0.0).reshape(-1)
    return (sums / count) ** (1.0 / q)


def fft_convolve(f: GridFunction, k: GridFunction) -> GridFunction:
    """Circular convolution scaled by h^dim, approximating integral convolution."""
    if f.grid != k.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {k.grid}")
    g = f.grid
    fa, ka = f.as_array(), k.as_array()
    if g.dim == 1:
        out = np.fft.irfft(np.fft.rfft(fa) * np.fft.rfft(ka), n=g.n)
    else:
        out = np.fft.irfft2(np.fft.rfft2(fa) * np.fft.rfft2(ka), s=g.shape)
    return GridFunction(g, out * (g.h ** g.dim))


def save_grid_function(path, f: GridFunction) -> None:
    """Binary format: magic FLGF, u32 version/dim/levels, f64 extent, f64 samples."""
    g = f.grid
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IIId", _VERSION, g.dim, g.levels, g.extent))
        fh.write(f.samples.astype("<f8").tobytes())


def load_grid_function(path) -> GridFunction:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ParameterError(f"bad magic {magic!r}, expected {_MAGIC!r}")
        version, dim, levels, extent = struct.unpack("<IIId", fh.read(20))
        if version != _VERSION:
            raise ParameterError(f"unsupported version {version}")
        grid = make_grid(dim, levels, extent)
        data = np.frombuffer(fh.read(8 * grid.size), dtype="<f8")
        return GridFunction(grid, data)


def grid_function_to_csv(path, f: GridFunction) -> None:
    """CSV interop format: header then (index coords, value) rows."""
    g = f.grid
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if g.dim == 1:
            w.writerow(["i", "value"])
            for i, v in enumerate(f.samples):
                w.writerow([i, format(v, ".17g")])
        else:
            w.writerow(["i", "j", "value"])
            arr = f.as_array()
            for i in range(g.n):
                for j in range(g.n):
                    w.writerow([i, j, format(arr[i, j], ".17g")])


def grid_function_from_csv(path, extent: float) -> GridFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    dim = len(header) - 1
    count = len(body)
    n = count if dim == 1 else int(round(math.sqrt(count)))
    levels = int(round(math.log2(n)))
    if (1 << levels) != n or n ** dim != count:
        raise ParameterError(f"row count {count} is not a full 2^m grid")
    grid = make_grid(dim, levels, extent)
    samples = np.zeros(grid.size)
    for row in body:
        if dim == 1:
            samples[int(row[0])] = float(row[1])
        else:
            samples[int(row[0]) * n + int(row[1])] = float(row[2])
    return GridFunction(grid, samples)
