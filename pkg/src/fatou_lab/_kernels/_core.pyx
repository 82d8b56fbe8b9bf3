# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Semantics match fatou_lab._kernels._fallback exactly; see that module
for the window conventions.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, hypot, pow, sqrt

cnp.import_array()


def circ_max_1d(values, int halfwidth):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.require(values, dtype=np.float64, requirements=['C', 'W'])
    cdef Py_ssize_t n = v.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    if halfwidth <= 0:
        out[:] = v
        return out
    if 2 * halfwidth + 1 >= n:
        out[:] = v.max()
        return out
    _sliding_extreme(v, out, halfwidth, 1)
    return out


def circ_min_1d(values, int halfwidth):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.require(values, dtype=np.float64, requirements=['C', 'W'])
    cdef Py_ssize_t n = v.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    if halfwidth <= 0:
        out[:] = v
        return out
    if 2 * halfwidth + 1 >= n:
        out[:] = v.min()
        return out
    _sliding_extreme(v, out, halfwidth, -1)
    return out


cdef void _sliding_extreme(cnp.float64_t[:] v, cnp.float64_t[:] out,
                           Py_ssize_t k, int sign) noexcept:
    # Monotone-deque sliding extreme over the circularly extended array.
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t m = n + 2 * k
    cdef Py_ssize_t[::1] idx = np.empty(m, dtype=np.intp)
    cdef cnp.float64_t[::1] ext = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t head = 0, tail = 0, j, src
    cdef double x
    for j in range(m):
        src = j - k
        if src < 0:
            src += n
        elif src >= n:
            src -= n
        ext[j] = v[src]
    for j in range(m):
        x = ext[j]
        while tail > head and ((sign > 0 and ext[idx[tail - 1]] <= x) or
                               (sign < 0 and ext[idx[tail - 1]] >= x)):
            tail -= 1
        idx[tail] = j
        tail += 1
        if idx[head] <= j - (2 * k + 1):
            head += 1
        if j >= 2 * k:
            out[j - 2 * k] = ext[idx[head]]


def circ_sum_1d(values, int halfwidth):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.require(values, dtype=np.float64, requirements=['C', 'W'])
    cdef Py_ssize_t n = v.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t k = halfwidth
    cdef Py_ssize_t j
    cdef double acc
    if halfwidth <= 0:
        out[:] = v
        return out
    if 2 * k + 1 >= n:
        acc = 0.0
        for j in range(n):
            acc += v[j]
        out[:] = acc
        return out
    # cumulative sum over the circularly extended array, identical
    # accumulation order to the fallback
    cdef Py_ssize_t m = n + 2 * k
    cdef cnp.float64_t[::1] cs = np.empty(m + 1, dtype=np.float64)
    cdef Py_ssize_t src
    cs[0] = 0.0
    for j in range(m):
        src = j - k
        if src < 0:
            src += n
        elif src >= n:
            src -= n
        cs[j + 1] = cs[j] + v[src]
    for j in range(n):
        out[j] = cs[j + 2 * k + 1] - cs[j]
    return out


def slobodeckij_1d(f, double h, double extent, double sigma, double p, mask=None):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.require(f, dtype=np.float64, requirements=['C', 'W'])
    cdef Py_ssize_t n = v.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m
    cdef bint has_mask = mask is not None
    if has_mask:
        m = np.require(mask, dtype=np.float64, requirements=['C', 'W'])
    else:
        m = np.empty(0, dtype=np.float64)
    cdef double total = 0.0, w, dist, row, diff
    cdef Py_ssize_t d, i, j
    cdef bint p_is_2 = p == 2.0
    cdef bint p_is_1 = p == 1.0
    for d in range(1, n):
        dist = h * (d if d <= n - d else n - d)
        w = pow(dist, -(1.0 + sigma * p))
        row = 0.0
        for i in range(n):
            j = i + d
            if j >= n:
                j -= n
            if has_mask and (m[i] == 0.0 or m[j] == 0.0):
                continue
            diff = v[i] - v[j]
            if p_is_2:
                row += diff * diff
            elif p_is_1:
                row += fabs(diff)
            else:
                row += pow(fabs(diff), p)
        total += w * row
    return total * h * h


def slobodeckij_2d(f, double h, double extent, double sigma, double p, mask=None):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.require(f, dtype=np.float64, requirements=['C', 'W'])
    cdef Py_ssize_t n = v.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] m
    cdef bint has_mask = mask is not None
    if has_mask:
        m = np.require(mask, dtype=np.float64, requirements=['C', 'W'])
    else:
        m = np.empty((0, 0), dtype=np.float64)
    cdef double total = 0.0, w, dist, a0, a1, row, diff
    cdef Py_ssize_t d0, d1, i0, i1, j0, j1
    cdef bint p_is_2 = p == 2.0
    cdef bint p_is_1 = p == 1.0
    for d0 in range(n):
        a0 = h * (d0 if d0 <= n - d0 else n - d0)
        for d1 in range(n):
            if d0 == 0 and d1 == 0:
                continue
            a1 = h * (d1 if d1 <= n - d1 else n - d1)
            dist = hypot(a0, a1)
            w = pow(dist, -(2.0 + sigma * p))
            row = 0.0
            for i0 in range(n):
                j0 = i0 + d0
                if j0 >= n:
                    j0 -= n
                for i1 in range(n):
                    j1 = i1 + d1
                    if j1 >= n:
                        j1 -= n
                    if has_mask and (m[i0, i1] == 0.0 or m[j0, j1] == 0.0):
                        continue
                    diff = v[i0, i1] - v[j0, j1]
                    if p_is_2:
                        row += diff * diff
                    elif p_is_1:
                        row += fabs(diff)
                    else:
                        row += pow(fabs(diff), p)
            total += w * row
    return total * h * h * h * h


def min_dist_graph_1d(qt, qx, phi, double h, double extent):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.require(qt, dtype=np.float64, requirements=['C', 'W'])
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.require(qx, dtype=np.float64, requirements=['C', 'W'])
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ph = np.require(phi, dtype=np.float64, requirements=['C', 'W'])
    cdef Py_ssize_t nq = t.shape[0]
    cdef Py_ssize_t n = ph.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nq, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double best, dx, dt, d2
    for i in range(nq):
        best = 1e300
        for j in range(n):
            dx = fabs(x[i] - h * j)
            if dx > extent - dx:
                dx = extent - dx
            dt = t[i] - ph[j]
            d2 = dx * dx + dt * dt
            if d2 < best:
                best = d2
        out[i] = sqrt(best)
    return out
