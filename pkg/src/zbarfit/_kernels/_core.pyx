# cython: language_level=3
"""Compiled hot kernels: winding/min-distance scans, Shortley-Weller
matvec, and the Cauchy-kernel summation.  Signatures match _purepy.py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, fabs, sqrt

cnp.import_array()

BACKEND = "compiled"


def winding_mindist(cnp.float64_t[::1] px, cnp.float64_t[::1] py,
                    cnp.float64_t[::1] ax, cnp.float64_t[::1] ay,
                    cnp.float64_t[::1] bx, cnp.float64_t[::1] by):
    """Winding numbers and min distances of points against polyline edges."""
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t m = ax.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] wind = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dist = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] wv = wind
    cdef cnp.float64_t[::1] dv = dist
    cdef Py_ssize_t i, j
    cdef double x, y, ux, uy, vx, vy, ex, ey, ee, t, dx, dy, d2, best, total
    for i in range(n):
        x = px[i]
        y = py[i]
        total = 0.0
        best = 1e300
        for j in range(m):
            ux = ax[j] - x
            uy = ay[j] - y
            vx = bx[j] - x
            vy = by[j] - y
            total += atan2(ux * vy - uy * vx, ux * vx + uy * vy)
            ex = vx - ux
            ey = vy - uy
            ee = ex * ex + ey * ey
            if ee > 0.0:
                t = -(ux * ex + uy * ey) / ee
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            dx = ux + t * ex
            dy = uy + t * ey
            d2 = dx * dx + dy * dy
            if d2 < best:
                best = d2
        wv[i] = <cnp.int64_t>(total / 6.283185307179586 +
                              (0.5 if total > 0 else -0.5))
        dv[i] = sqrt(best)
    return wind, dist


def sw_matvec(cnp.float64_t[::1] x, cnp.float64_t[::1] diag,
              cnp.int64_t[:, ::1] nbr_idx, cnp.float64_t[:, ::1] nbr_coef):
    """y = diag*x - sum_k nbr_coef[:,k] * x[nbr_idx[:,k]]  (idx<0 -> skip)."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t kmax = nbr_idx.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.empty(n, dtype=np.float64)
    cdef cnp.float64_t[::1] yv = y
    cdef Py_ssize_t i, k
    cdef cnp.int64_t j
    cdef double acc
    for i in range(n):
        acc = diag[i] * x[i]
        for k in range(kmax):
            j = nbr_idx[i, k]
            if j >= 0:
                acc -= nbr_coef[i, k] * x[j]
        yv[i] = acc
    return y


def cauchy_sum(cnp.complex128_t[::1] targets, cnp.complex128_t[::1] nodes,
               cnp.complex128_t[::1] weights):
    """out[j] = sum_i weights[i] / (nodes[i] - targets[j])."""
    cdef Py_ssize_t nt = targets.shape[0]
    cdef Py_ssize_t nn = nodes.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(
        nt, dtype=np.complex128)
    cdef cnp.complex128_t[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double complex acc, t
    for j in range(nt):
        t = targets[j]
        acc = 0
        for i in range(nn):
            acc = acc + weights[i] / (nodes[i] - t)
        ov[j] = acc
    return out
