"""NumPy reference implementations of the hot kernels.

These mirror the Cython core exactly; every function is deterministic
and single-threaded.  Windows are circular (torus wrap) and given by an
integer halfwidth ``K``: the window at index ``i`` is the 2K+1 samples
``i-K .. i+K`` modulo N.
"""

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d


def circ_max_1d(values: np.ndarray, halfwidth: int) -> np.ndarray:
    v = np.ascontiguousarray(values, dtype=np.float64)
    if halfwidth <= 0:
        return v.copy()
    size = 2 * halfwidth + 1
    if size >= v.shape[0]:
        return np.full_like(v, v.max())
    return maximum_filter1d(v, size=size, mode="wrap")


def circ_min_1d(values: np.ndarray, halfwidth: int) -> np.ndarray:
    v = np.ascontiguousarray(values, dtype=np.float64)
    if halfwidth <= 0:
        return v.copy()
    size = 2 * halfwidth + 1
    if size >= v.shape[0]:
        return np.full_like(v, v.min())
    return minimum_filter1d(v, size=size, mode="wrap")


def circ_sum_1d(values: np.ndarray, halfwidth: int) -> np.ndarray:
    """Windowed circular sum; window capped at the full circle."""
    v = np.ascontiguousarray(values, dtype=np.float64)
    n = v.shape[0]
    if halfwidth <= 0:
        return v.copy()
    if 2 * halfwidth + 1 >= n:
        return np.full_like(v, v.sum())
    k = halfwidth
    ext = np.concatenate([v[-k:], v, v[:k]])
    cs = np.concatenate([[0.0], np.cumsum(ext)])
    return cs[2 * k + 1:] - cs[:n]


def slobodeckij_1d(f: np.ndarray, h: float, extent: float, sigma: float, p: float,
                   mask: np.ndarray | None = None) -> float:
    """Double sum over distinct pairs of |f_i-f_j|^p / d_ij^{1+sigma p} * h^2."""
    v = np.ascontiguousarray(f, dtype=np.float64)
    n = v.shape[0]
    if mask is not None:
        m = np.ascontiguousarray(mask, dtype=np.float64)
    else:
        m = None
    total = 0.0
    for d in range(1, n):
        dist = h * min(d, n - d)
        w = dist ** (-(1.0 + sigma * p))
        diff = np.abs(v - np.roll(v, -d)) ** p
        if m is not None:
            diff = diff * m * np.roll(m, -d)
        total += w * float(diff.sum())
    return total * h * h


def slobodeckij_2d(f: np.ndarray, h: float, extent: float, sigma: float, p: float,
                   mask: np.ndarray | None = None) -> float:
    """Same pair sum on the 2-torus; weight h^4 / d^{2+sigma p}."""
    v = np.ascontiguousarray(f, dtype=np.float64)
    n = v.shape[0]
    m = np.ascontiguousarray(mask, dtype=np.float64) if mask is not None else None
    total = 0.0
    for d0 in range(n):
        a0 = h * min(d0, n - d0)
        r0 = np.roll(v, -d0, axis=0)
        rm0 = np.roll(m, -d0, axis=0) if m is not None else None
        for d1 in range(n):
            if d0 == 0 and d1 == 0:
                continue
            a1 = h * min(d1, n - d1)
            dist = np.hypot(a0, a1)
            w = dist ** (-(2.0 + sigma * p))
            diff = np.abs(v - np.roll(r0, -d1, axis=1)) ** p
            if m is not None:
                diff = diff * m * np.roll(rm0, -d1, axis=1)
            total += w * float(diff.sum())
    return total * h ** 4


def min_dist_graph_1d(qt: np.ndarray, qx: np.ndarray, phi: np.ndarray,
                      h: float, extent: float) -> np.ndarray:
    """Min Euclidean distance from (t, x) queries to graph samples (phi_j, j*h).

    Base displacements use the torus metric on [0, extent).
    """
    qt = np.ascontiguousarray(qt, dtype=np.float64)
    qx = np.ascontiguousarray(qx, dtype=np.float64)
    phi = np.ascontiguousarray(phi, dtype=np.float64)
    n = phi.shape[0]
    xs = h * np.arange(n)
    out = np.empty(qt.shape[0], dtype=np.float64)
    chunk = max(1, int(2_000_000 // max(n, 1)))
    for lo in range(0, qt.shape[0], chunk):
        hi = min(lo + chunk, qt.shape[0])
        dx = np.abs(qx[lo:hi, None] - xs[None, :])
        dx = np.minimum(dx, extent - dx)
        dt = qt[lo:hi, None] - phi[None, :]
        out[lo:hi] = np.sqrt(np.min(dx * dx + dt * dt, axis=1))
    return out
