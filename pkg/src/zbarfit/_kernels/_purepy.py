"""NumPy implementations of the hot kernels.

Signature-compatible with the compiled versions in ``_core``; chunked so the
temporaries stay cache-friendly.
"""

import numpy as np

BACKEND = "purepy"

_CHUNK = 1 << 22  # target elements per (points x edges) block


def winding_mindist(px, py, ax, ay, bx, by):
    """Winding numbers and min distances of points against polyline edges.

    px, py : point coordinates, shape (n,)
    ax, ay, bx, by : edge endpoint coordinates, shape (m,), every closed
        component contributes its full edge cycle.

    Returns (winding, mindist): summed signed angles / 2pi rounded to the
    nearest integer, and the unsigned distance to the closest edge.
    """
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    n = px.size
    m = ax.size
    winding = np.empty(n, dtype=np.int64)
    mindist = np.empty(n, dtype=np.float64)
    ex = bx - ax
    ey = by - ay
    ee = ex * ex + ey * ey
    ee_safe = np.where(ee > 0.0, ee, 1.0)
    step = max(1, _CHUNK // max(m, 1))
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        ux = ax[None, :] - px[lo:hi, None]
        uy = ay[None, :] - py[lo:hi, None]
        vx = bx[None, :] - px[lo:hi, None]
        vy = by[None, :] - py[lo:hi, None]
        ang = np.arctan2(ux * vy - uy * vx, ux * vx + uy * vy)
        total = ang.sum(axis=1) / (2.0 * np.pi)
        winding[lo:hi] = np.rint(total).astype(np.int64)
        # point-segment distances
        t = -(ux * ex[None, :] + uy * ey[None, :]) / ee_safe[None, :]
        np.clip(t, 0.0, 1.0, out=t)
        dx = ux + t * ex[None, :]
        dy = uy + t * ey[None, :]
        mindist[lo:hi] = np.sqrt((dx * dx + dy * dy).min(axis=1))
    return winding, mindist


def sw_matvec(x, diag, nbr_idx, nbr_coef):
    """y = diag*x - sum_k nbr_coef[:,k] * x[nbr_idx[:,k]].

    Missing neighbours are encoded as index 0 with coefficient 0, so the
    gather is unconditional.
    """
    y = diag * x
    for k in range(nbr_idx.shape[1]):
        y -= nbr_coef[:, k] * x[nbr_idx[:, k]]
    return y


def cauchy_sum(targets, nodes, weights):
    """out[j] = sum_i weights[i] / (nodes[i] - targets[j]), all complex."""
    targets = np.asarray(targets, dtype=np.complex128)
    out = np.empty(targets.shape, dtype=np.complex128)
    m = nodes.size
    step = max(1, _CHUNK // max(m, 1))
    for lo in range(0, targets.size, step):
        hi = min(targets.size, lo + step)
        block = weights[None, :] / (nodes[None, :] - targets[lo:hi, None])
        out[lo:hi] = block.sum(axis=1)
    return out
