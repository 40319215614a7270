"""Planar domains bounded by parametric curve pieces.

A :class:`Domain` is an outer Jordan curve plus zero or more hole curves,
each a chain of :class:`Segment` / :class:`Arc` / :class:`ParametricPath`
pieces.  The module provides membership tests (winding number), area and
perimeter by boundary quadrature, Gauss-Legendre boundary sampling for the
moment machinery, and midpoint interior grids for the brute-force checks.

Conventions
-----------
* the outer component is positively (counterclockwise) oriented, holes are
  negatively oriented;
* closure and membership tolerances are relative to the domain diameter, so
  behaviour is invariant under rescaling;
* every component keeps a fine polyline proxy (vertices exactly on the
  curve) used for winding numbers, simplicity validation and as the seed
  for exact crossing refinement.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import (
    AmbiguousMembershipError,
    EmptyGridError,
    GeometryError,
)

CLOSURE_RTOL = 1e-12       # per-junction gap, relative to diameter
MEMBERSHIP_RTOL = 1e-9     # ambiguous-membership band, relative to diameter
_PROXY_PER_CURVED_PIECE = 512


# ---------------------------------------------------------------------------
# curve pieces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Straight piece z(t) = start + t*(end-start), t in [0, 1]."""

    start: complex
    end: complex

    kind = "segment"
    t0 = 0.0
    t1 = 1.0

    def point(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.full(t.shape, self.end - self.start, dtype=np.complex128)

    def subdivide(self, k):
        pts = [self.point(i / k) for i in range(k + 1)]
        return [Segment(pts[i], pts[i + 1]) for i in range(k)]

    @property
    def proxy_count(self):
        return 1


@dataclass(frozen=True)
class Arc:
    """Circular arc z(t) = center + radius*exp(i t), t from t0 to t1.

    t1 > t0 runs counterclockwise, t1 < t0 clockwise.
    """

    center: complex
    radius: float
    t0: float
    t1: float

    kind = "arc"

    def point(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.center + self.radius * np.exp(1j * t)

    def velocity(self, t):
        t = np.asarray(t, dtype=np.float64)
        return 1j * self.radius * np.exp(1j * t)

    def subdivide(self, k):
        ts = np.linspace(self.t0, self.t1, k + 1)
        return [Arc(self.center, self.radius, ts[i], ts[i + 1]) for i in range(k)]

    @property
    def proxy_count(self):
        frac = abs(self.t1 - self.t0) / (2 * math.pi)
        return max(16, int(_PROXY_PER_CURVED_PIECE * min(frac, 1.0) * 4))


@dataclass(frozen=True)
class ParametricPath:
    """Polynomial/trigonometric path.

    z(t) = sum_j poly[j] t^j + sum_k trig[k] exp(i k t),  t from t0 to t1.

    ``poly`` maps integer powers >= 0 to complex coefficients, ``trig`` maps
    nonzero integer frequencies to complex coefficients.  An ellipse with
    semi-axes (a, b) about c is trig={1: (a+b)/2, -1: (a-b)/2}, poly={0: c}.
    """

    poly: tuple = ()     # ((power, coeff), ...)
    trig: tuple = ()     # ((freq, coeff), ...)
    t0: float = 0.0
    t1: float = 2 * math.pi

    kind = "path"

    def point(self, t):
        t = np.asarray(t, dtype=np.float64)
        z = np.zeros(t.shape, dtype=np.complex128)
        for p, c in self.poly:
            z += c * t ** p
        for k, c in self.trig:
            z += c * np.exp(1j * k * t)
        return z

    def velocity(self, t):
        t = np.asarray(t, dtype=np.float64)
        v = np.zeros(t.shape, dtype=np.complex128)
        for p, c in self.poly:
            if p > 0:
                v += p * c * t ** (p - 1)
        for k, c in self.trig:
            v += 1j * k * c * np.exp(1j * k * t)
        return v

    def subdivide(self, k):
        ts = np.linspace(self.t0, self.t1, k + 1)
        return [ParametricPath(self.poly, self.trig, ts[i], ts[i + 1])
                for i in range(k)]

    @property
    def proxy_count(self):
        frac = abs(self.t1 - self.t0) / (2 * math.pi)
        return max(16, int(_PROXY_PER_CURVED_PIECE * min(frac, 1.0) * 4))


# ---------------------------------------------------------------------------
# boundary components
# ---------------------------------------------------------------------------

class BoundaryComponent:
    """A closed chain of curve pieces with a cached polyline proxy."""

    def __init__(self, pieces):
        if not pieces:
            raise GeometryError("boundary component needs at least one piece")
        self.pieces = tuple(pieces)
        self._proxy = None

    def proxy(self):
        """(vertices, piece_index, params): closed polyline exactly on the curve.

        vertices[j] = pieces[piece_index[j]].point(params[j]); the polyline is
        closed implicitly (edge from the last vertex back to vertices[0]).
        """
        if self._proxy is None:
            verts, pidx, ts = [], [], []
            for i, pc in enumerate(self.pieces):
                n = pc.proxy_count
                tt = np.linspace(pc.t0, pc.t1, n + 1)[:-1]  # drop shared endpoint
                verts.append(pc.point(tt))
                pidx.append(np.full(n, i, dtype=np.int32))
                ts.append(tt)
            self._proxy = (np.concatenate(verts), np.concatenate(pidx),
                           np.concatenate(ts))
        return self._proxy

    def closure_gap(self):
        """Largest junction gap between consecutive pieces (absolute)."""
        gap = 0.0
        for a, b in zip(self.pieces, self.pieces[1:] + self.pieces[:1]):
            end = complex(a.point(np.asarray(a.t1)))
            start = complex(b.point(np.asarray(b.t0)))
            gap = max(gap, abs(end - start))
        return gap

    def signed_area(self):
        v = self.proxy()[0]
        w = np.roll(v, -1)
        return 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))

    def is_simple(self):
        from shapely.geometry import LineString

        v = self.proxy()[0]
        coords = np.column_stack([v.real, v.imag])
        coords = np.vstack([coords, coords[:1]])
        return LineString(coords).is_simple

    def reversed(self):
        rev = []
        for pc in self.pieces[::-1]:
            if isinstance(pc, Segment):
                rev.append(Segment(pc.end, pc.start))
            elif isinstance(pc, Arc):
                rev.append(Arc(pc.center, pc.radius, pc.t1, pc.t0))
            else:
                # reparametrize t -> t0+t1-t by flipping interval direction
                rev.append(ParametricPath(pc.poly, pc.trig, pc.t1, pc.t0))
        return BoundaryComponent(rev)


# ---------------------------------------------------------------------------
# quadrature sample
# ---------------------------------------------------------------------------

@dataclass
class BoundaryQuadrature:
    """Gauss-Legendre boundary sample: points z_i and weights dz_i.

    Contour integrals become (integrand(points) * dz).sum(); the weights
    carry the parametrization velocity and orientation.  component_slices
    gives the node range of each boundary component (outer first).
    """

    points: np.ndarray
    dz: np.ndarray
    speed_weights: np.ndarray   # |z'| * w, for arclength integrals
    component_slices: tuple
    order: int


_GL_CACHE = {}


def _gauss_nodes(order):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


# ---------------------------------------------------------------------------
# domain
# ---------------------------------------------------------------------------

class Domain:
    """Bounded domain: outer component, holes, and one marker point per hole."""

    def __init__(self, outer, holes=(), hole_points=None, validate=True):
        self.outer = outer if isinstance(outer, BoundaryComponent) \
            else BoundaryComponent(outer)
        self.holes = tuple(h if isinstance(h, BoundaryComponent)
                           else BoundaryComponent(h) for h in holes)
        self._quad_cache = {}
        self._edges = None
        self._hull = None
        self._centroid = None
        verts = self.outer.proxy()[0]
        self._bbox = (verts.real.min(), verts.real.max(),
                      verts.imag.min(), verts.imag.max())
        if hole_points is None:
            hole_points = tuple(_interior_marker(h) for h in self.holes)
        self.hole_points = tuple(complex(p) for p in hole_points)
        if validate:
            self._validate()

    # -- basic metrics ------------------------------------------------------

    @property
    def components(self):
        return (self.outer,) + self.holes

    @property
    def bbox(self):
        return self._bbox

    @property
    def diameter(self):
        """Max distance between boundary points (convex hull of the proxy)."""
        if self._hull is None:
            from scipy.spatial import ConvexHull

            v = self.outer.proxy()[0]
            pts = np.column_stack([v.real, v.imag])
            if len(pts) > 16:
                pts = pts[ConvexHull(pts).vertices]
            d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
            self._hull = math.sqrt(float(d2.max()))
        return self._hull

    @property
    def centroid(self):
        """Area centroid of the proxy polygon (holes subtract).

        A stable centering convention for basis construction; exact moments
        come from the quadrature machinery instead.
        """
        if self._centroid is None:
            a_tot = 0.0
            c_tot = 0.0 + 0.0j
            for comp in self.components:
                v = comp.proxy()[0]
                w = np.roll(v, -1)
                cross = v.real * w.imag - w.real * v.imag
                a = 0.5 * cross.sum()
                if abs(a) < 1e-300:
                    continue
                c = ((v + w) * cross).sum() / (6.0 * a)
                a_tot += a
                c_tot += c * a
            self._centroid = c_tot / a_tot if a_tot else 0j
        return self._centroid

    # -- validation ----------------------------------------------------------

    def _validate(self):
        scale = max(self.diameter, 1e-300)
        for name, comp in [("outer", self.outer)] + \
                [(f"hole {i}", h) for i, h in enumerate(self.holes)]:
            gap = comp.closure_gap()
            if gap > CLOSURE_RTOL * scale:
                raise GeometryError(
                    f"{name} component is not closed: junction gap {gap:.3e} "
                    f"exceeds {CLOSURE_RTOL:.0e} x diameter")
            if not comp.is_simple():
                raise GeometryError(f"{name} component self-intersects")
        if self.outer.signed_area() <= 0:
            raise GeometryError("outer component must be counterclockwise")
        for i, h in enumerate(self.holes):
            if h.signed_area() >= 0:
                raise GeometryError(f"hole {i} must be clockwise")
        for i, p in enumerate(self.hole_points):
            w = self._winding(np.array([p]))[0]
            if w != 0:
                raise GeometryError(
                    f"hole {i} marker point {p} is not inside the hole")
            wo = _component_winding(self.outer, np.array([p]))[0]
            if wo != 1:
                raise GeometryError(f"hole {i} is not inside the outer curve")

    # -- winding machinery ----------------------------------------------------

    def edge_arrays(self):
        """Concatenated proxy edges of all components: (ax, ay, bx, by)."""
        if self._edges is None:
            axs, ays, bxs, bys = [], [], [], []
            for comp in self.components:
                v = comp.proxy()[0]
                w = np.roll(v, -1)
                axs.append(v.real)
                ays.append(v.imag)
                bxs.append(w.real)
                bys.append(w.imag)
            self._edges = tuple(np.ascontiguousarray(np.concatenate(a))
                                for a in (axs, ays, bxs, bys))
        return self._edges

    def _winding(self, z):
        ax, ay, bx, by = self.edge_arrays()
        w, _ = _kernels.winding_mindist(np.ascontiguousarray(z.real),
                                        np.ascontiguousarray(z.imag),
                                        ax, ay, bx, by)
        return w

    def winding_and_distance(self, z):
        """Winding numbers and proxy distances for an array of points."""
        z = np.asarray(z, dtype=np.complex128).ravel()
        ax, ay, bx, by = self.edge_arrays()
        return _kernels.winding_mindist(np.ascontiguousarray(z.real),
                                        np.ascontiguousarray(z.imag),
                                        ax, ay, bx, by)

    def boundary_distance(self, z):
        return self.winding_and_distance(z)[1]

    # -- quadrature -----------------------------------------------------------

    def quadrature(self, order):
        """Cached Gauss-Legendre boundary sample at the given per-piece order."""
        if order not in self._quad_cache:
            self._quad_cache[order] = boundary_quadrature(self, order)
        return self._quad_cache[order]


def _component_winding(comp, z):
    v = comp.proxy()[0]
    w = np.roll(v, -1)
    wind, _ = _kernels.winding_mindist(
        np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag),
        np.ascontiguousarray(v.real), np.ascontiguousarray(v.imag),
        np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag))
    return wind


def _interior_marker(comp):
    """Default marker for a hole: polygon centroid, or a guaranteed interior
    point when the centroid falls outside (crescent-shaped holes)."""
    v = comp.proxy()[0]
    w = np.roll(v, -1)
    cross = v.real * w.imag - w.real * v.imag
    a = 0.5 * cross.sum()
    c = complex(((v + w) * cross).sum() / (6.0 * a))
    if _component_winding(comp, np.array([c]))[0] != 0:
        return c
    from shapely.geometry import Polygon

    p = Polygon(np.column_stack([v.real, v.imag])).representative_point()
    return complex(p.x, p.y)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def ray_hits_edges(origin, direction, ax, ay, bx, by, tol=1e-12):
    """Does the ray origin + t*direction (t >= 0) cross any segment?"""
    o = complex(origin)
    d = complex(direction)
    ex = bx - ax
    ey = by - ay
    denom = d.real * ey - d.imag * ex
    wx = ax - o.real
    wy = ay - o.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (wx * ey - wy * ex) / denom
        s = (wx * d.imag - wy * d.real) / (-denom)
    hit = (np.abs(denom) > tol) & (t >= -tol) & (s >= -tol) & (s <= 1 + tol)
    return bool(hit.any())


def ray_hits_boundary(domain, origin, direction):
    """Does the ray from origin in the given direction meet the boundary?"""
    ax, ay, bx, by = domain.edge_arrays()
    return ray_hits_edges(origin, direction, ax, ay, bx, by)


def boundary_quadrature(domain, order):
    """Composite Gauss-Legendre sample of the full oriented boundary.

    order is the node count per curve piece.  Validates that the dz weights
    of every component sum to ~0 (closed curves).
    """
    xs, ws = _gauss_nodes(order)
    pts, dzs, sps = [], [], []
    slices = []
    pos = 0
    for comp in domain.components:
        start = pos
        for pc in comp.pieces:
            half = 0.5 * (pc.t1 - pc.t0)
            mid = 0.5 * (pc.t1 + pc.t0)
            t = mid + half * xs
            z = pc.point(t)
            v = pc.velocity(t) * half
            pts.append(z)
            dzs.append(v * ws)
            sps.append(np.abs(v) * ws)
            pos += order
        slices.append(slice(start, pos))
    q = BoundaryQuadrature(np.concatenate(pts), np.concatenate(dzs),
                           np.concatenate(sps), tuple(slices), order)
    scale = max(np.abs(q.points).max(), 1.0)
    for sl in q.component_slices:
        gap = abs(q.dz[sl].sum())
        if gap > 1e-9 * scale * order:
            raise GeometryError(
                f"quadrature dz-sum {gap:.2e} is not ~0; component not closed")
    return q


def area(domain, rtol=1e-12):
    """Domain area via (1/2i) contour integral of conj(z) dz, adaptive order."""
    prev = None
    for order in (16, 32, 64, 128, 256):
        q = domain.quadrature(order)
        val = float((np.conj(q.points) * q.dz).sum().imag) * 0.5
        if prev is not None and abs(val - prev) <= rtol * max(abs(val), 1e-30):
            return val
        prev = val
    return prev


def perimeter(domain, rtol=1e-12):
    """Total boundary arclength (all components), adaptive order."""
    prev = None
    for order in (16, 32, 64, 128, 256):
        q = domain.quadrature(order)
        val = float(q.speed_weights.sum())
        if prev is not None and abs(val - prev) <= rtol * max(abs(val), 1e-30):
            return val
        prev = val
    return prev


def contains(domain, z):
    """Winding-number membership for one point or an array of points.

    Raises AmbiguousMembershipError when a query point sits within
    MEMBERSHIP_RTOL x diameter of the boundary proxy.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    wind, dist = domain.winding_and_distance(z_arr)
    tol = MEMBERSHIP_RTOL * domain.diameter
    if (dist < tol).any():
        bad = z_arr[dist < tol][0]
        raise AmbiguousMembershipError(
            f"point {bad} is within {tol:.2e} of the boundary")
    inside = wind == 1
    if np.isscalar(z) or np.asarray(z).shape == ():
        return bool(inside[0])
    return inside


def contains_many(domain, z, on_boundary="exclude"):
    """Vectorized membership that treats near-boundary points as outside
    instead of raising.  Used by grid builders."""
    z = np.asarray(z, dtype=np.complex128)
    wind, dist = domain.winding_and_distance(z.ravel())
    inside = wind == 1
    if on_boundary == "exclude":
        inside &= dist >= MEMBERSHIP_RTOL * domain.diameter
    return inside.reshape(z.shape)


# ---------------------------------------------------------------------------
# scanline rasterization (shared by interior grids and the stencil builder)
# ---------------------------------------------------------------------------

def scanline_crossings(domain, ys, axis="y"):
    """Boundary crossings of horizontal lines y=ys[j] (or vertical x=xs[j]).

    Returns a list over lines of (positions, directions) with positions the
    crossing coordinates (refined to the exact pieces, ascending) and
    directions +-1 (the sign of the crossing's d(axis)/dt, i.e. winding
    contribution for a point with larger coordinate).

    Uses the half-open rule on proxy edges so vertices are counted once, then
    polishes each crossing onto the exact parametrization by bisection.
    """
    ys = np.asarray(ys, dtype=np.float64)
    per_line_pos = [[] for _ in ys]
    per_line_dir = [[] for _ in ys]
    all_pieces = []
    for comp in domain.components:
        all_pieces.extend(comp.pieces)

    piece_offsets = {}
    k = 0
    for comp in domain.components:
        for i, pc in enumerate(comp.pieces):
            piece_offsets[(id(comp), i)] = k
            k += 1

    y0g = ys[0]
    dy = ys[1] - ys[0] if len(ys) > 1 else 1.0

    # batched per piece: refine all its crossings at once
    for comp in domain.components:
        verts, pidx, ts = comp.proxy()
        nv = len(verts)
        v0 = verts
        v1 = np.roll(verts, -1)
        t0 = ts
        t1 = np.roll(ts, -1)
        # parameter of the wrap vertex is the piece end, not the start
        last_of_piece = pidx != np.roll(pidx, -1)
        t1 = t1.copy()
        for j in np.nonzero(last_of_piece)[0]:
            t1[j] = all_pieces_param_end(comp.pieces[pidx[j]])
        if axis == "y":
            c0, c1 = v0.imag, v1.imag
            o0, o1 = v0.real, v1.real
        else:
            c0, c1 = v0.real, v1.real
            o0, o1 = v0.imag, v1.imag
        up = c1 > c0
        lo = np.where(up, c0, c1)
        hi = np.where(up, c1, c0)
        jlo = np.ceil((lo - y0g) / dy - 1e-13).astype(np.int64)
        jhi = np.floor((hi - y0g) / dy + 1e-13).astype(np.int64)
        for e in np.nonzero(jhi >= jlo)[0]:
            if c0[e] == c1[e]:
                continue  # parallel edge, half-open rule skips it
            for j in range(max(jlo[e], 0), min(jhi[e], len(ys) - 1) + 1):
                yv = ys[j]
                # half-open: [min, max) for up edges, (min, max] for down
                if up[e]:
                    if not (c0[e] <= yv < c1[e]):
                        continue
                else:
                    if not (c1[e] < yv <= c0[e]):
                        continue
                pc = comp.pieces[pidx[e]]
                if isinstance(pc, Segment):
                    t = (yv - c0[e]) / (c1[e] - c0[e])
                    x = o0[e] + t * (o1[e] - o0[e])
                else:
                    x = _refine_crossing(pc, t0[e], t1[e], axis, yv)
                per_line_pos[j].append(x)
                per_line_dir[j].append(1 if up[e] else -1)

    out = []
    for pos, dirs in zip(per_line_pos, per_line_dir):
        if pos:
            p = np.asarray(pos)
            d = np.asarray(dirs)
            o = np.argsort(p, kind="stable")
            out.append((p[o], d[o]))
        else:
            out.append((np.empty(0), np.empty(0, dtype=np.int64)))
    return out


def all_pieces_param_end(pc):
    return pc.t1


def _refine_crossing(pc, ta, tb, axis, target):
    """Root of <axis-coord of pc.point(t)> - target on [ta, tb], bisection
    followed by a few Newton polish steps.  The proxy guarantees a bracket."""
    def g(t):
        z = pc.point(np.asarray(t))
        return (z.imag if axis == "y" else z.real) - target

    ga, gb = float(g(ta)), float(g(tb))
    if ga == 0.0:
        t = ta
    elif gb == 0.0:
        t = tb
    else:
        if ga * gb > 0:  # proxy resolution missed curvature; fall back to chord
            t = ta + (tb - ta) * abs(ga) / (abs(ga) + abs(gb))
        else:
            lo_, hi_ = ta, tb
            glo = ga
            for _ in range(48):
                mid = 0.5 * (lo_ + hi_)
                gm = float(g(mid))
                if gm == 0.0:
                    lo_ = hi_ = mid
                    break
                if glo * gm < 0:
                    hi_ = mid
                else:
                    lo_ = mid
                    glo = gm
            t = 0.5 * (lo_ + hi_)
    for _ in range(3):  # Newton polish
        z = pc.point(np.asarray(t))
        v = pc.velocity(np.asarray(t))
        gv = (z.imag if axis == "y" else z.real) - target
        dv = v.imag if axis == "y" else v.real
        if dv == 0:
            break
        t_new = t - gv / dv
        if not (min(ta, tb) - 1e-12 <= t_new <= max(ta, tb) + 1e-12):
            break
        t = t_new
    z = pc.point(np.asarray(t))
    return float(z.real if axis == "y" else z.imag)


def grid_inside_mask(domain, xs, ys, boundary_tol=None, return_crossings=False):
    """Winding-number membership of the tensor grid (ys rows x xs cols).

    Points within boundary_tol of the boundary are classified outside; the
    check runs only near scanline crossings so aligned rectangle edges and
    node-on-boundary cases come out exterior, as the solvers expect.

    With return_crossings the per-row and per-column crossing lists are
    returned too (the cut-cell grid builder reuses them for arm fractions).
    """
    if boundary_tol is None:
        boundary_tol = MEMBERSHIP_RTOL * domain.diameter
    rows = scanline_crossings(domain, ys, axis="y")
    nx, ny = len(xs), len(ys)
    mask = np.zeros((ny, nx), dtype=bool)
    suspects = []
    for j, (pos, dirs) in enumerate(rows):
        if len(pos) == 0:
            continue
        idx = np.searchsorted(pos, xs, side="right")
        # winding = sum of directions of crossings right of the point
        # = -(cumulative sum of directions left of it), since the total is 0
        wind = -np.concatenate([[0], np.cumsum(dirs)])[idx]
        mask[j, :] = wind == 1
        near = np.abs(xs[:, None] - pos[None, :]).min(axis=1) < boundary_tol
        for i in np.nonzero(near)[0]:
            suspects.append((j, i))
    # columns pass only for on-boundary detection along horizontal edges
    cols = scanline_crossings(domain, xs, axis="x")
    for i, (pos, dirs) in enumerate(cols):
        if len(pos) == 0:
            continue
        near = np.abs(ys[:, None] - pos[None, :]).min(axis=1) < boundary_tol
        for j in np.nonzero(near)[0]:
            suspects.append((j, i))
    for j, i in suspects:
        mask[j, i] = False
    if return_crossings:
        return mask, rows, cols
    return mask


def interior_grid(domain, spacing):
    """Midpoint interior grid: cell centers inside the domain.

    Returns (points, cell_area); the summed areas converge to area(domain)
    as spacing -> 0.  Raises EmptyGridError when nothing fits.
    """
    if spacing <= 0:
        raise GeometryError("spacing must be positive")
    if spacing > domain.diameter:
        raise EmptyGridError(
            f"spacing {spacing} exceeds the domain diameter {domain.diameter}")
    x0, x1, y0, y1 = domain.bbox
    nx = max(1, int(math.ceil((x1 - x0) / spacing - 1e-12)))
    ny = max(1, int(math.ceil((y1 - y0) / spacing - 1e-12)))
    xs = x0 + (np.arange(nx) + 0.5) * spacing
    ys = y0 + (np.arange(ny) + 0.5) * spacing
    mask = grid_inside_mask(domain, xs, ys)
    jj, ii = np.nonzero(mask)
    if len(jj) == 0:
        raise EmptyGridError("no interior cells at this spacing")
    pts = xs[ii] + 1j * ys[jj]
    return pts, spacing * spacing


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def disk(radius=1.0, center=0j):
    """Disk of given radius, boundary split into four arcs."""
    if radius <= 0:
        raise GeometryError("radius must be positive")
    qs = [Arc(center, radius, k * math.pi / 2, (k + 1) * math.pi / 2)
          for k in range(4)]
    return Domain(BoundaryComponent(qs))


def annulus(inner_radius, outer_radius, center=0j):
    """Concentric annulus; the hole marker defaults to the center."""
    if not 0 < inner_radius < outer_radius:
        raise GeometryError("need 0 < inner_radius < outer_radius")
    out = [Arc(center, outer_radius, k * math.pi / 2, (k + 1) * math.pi / 2)
           for k in range(4)]
    hole = [Arc(center, inner_radius, -k * math.pi / 2, -(k + 1) * math.pi / 2)
            for k in range(4)]
    return Domain(BoundaryComponent(out), [BoundaryComponent(hole)], [center])


def ellipse(a, b, center=0j):
    """Ellipse with semi-axes a (x) and b (y)."""
    if a <= 0 or b <= 0:
        raise GeometryError("semi-axes must be positive")
    trig = ((1, (a + b) / 2.0 + 0j), (-1, (a - b) / 2.0 + 0j))
    poly = ((0, complex(center)),) if center != 0 else ()
    qs = [ParametricPath(poly, trig, k * math.pi / 2, (k + 1) * math.pi / 2)
          for k in range(4)]
    return Domain(BoundaryComponent(qs))


def rectangle(width, height, center=0j):
    if width <= 0 or height <= 0:
        raise GeometryError("rectangle sides must be positive")
    c = complex(center)
    w2, h2 = width / 2.0, height / 2.0
    corners = [c + complex(-w2, -h2), c + complex(w2, -h2),
               c + complex(w2, h2), c + complex(-w2, h2)]
    segs = [Segment(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    return Domain(BoundaryComponent(segs))


def square(side=1.0, center=0j):
    return rectangle(side, side, center)


def polygon(vertices, holes=(), hole_points=None):
    """Simple polygon from vertices (counterclockwise or clockwise; the
    orientation is normalized).  holes: list of vertex lists."""
    outer = _component_from_vertices(vertices, orientation=+1)
    hcs = [_component_from_vertices(h, orientation=-1) for h in holes]
    return Domain(outer, hcs, hole_points)


def _component_from_vertices(vertices, orientation):
    v = np.asarray(vertices, dtype=np.complex128)
    if len(v) < 3:
        raise GeometryError("polygon needs at least 3 vertices")
    if abs(v[0] - v[-1]) < 1e-15 * max(1.0, np.abs(v).max()):
        v = v[:-1]
    w = np.roll(v, -1)
    sa = 0.5 * np.sum(v.real * w.imag - w.real * v.imag)
    if sa * orientation < 0:
        v = v[::-1]
        w = np.roll(v, -1)
    return BoundaryComponent([Segment(v[i], w[i]) for i in range(len(v))])


def outer_domain(domain):
    """The simply connected domain bounded by the outer curve alone."""
    if not domain.holes:
        return domain
    return Domain(domain.outer, validate=False)


def translated(domain, b):
    """The domain shifted by the complex offset b."""
    b = complex(b)

    def shift(comp):
        pieces = []
        for pc in comp.pieces:
            if isinstance(pc, Segment):
                pieces.append(Segment(pc.start + b, pc.end + b))
            elif isinstance(pc, Arc):
                pieces.append(Arc(pc.center + b, pc.radius, pc.t0, pc.t1))
            else:
                poly = dict(pc.poly)
                poly[0] = poly.get(0, 0j) + b
                pieces.append(ParametricPath(tuple(sorted(poly.items())),
                                             pc.trig, pc.t0, pc.t1))
        return BoundaryComponent(pieces)

    return Domain(shift(domain.outer), [shift(h) for h in domain.holes],
                  [p + b for p in domain.hole_points], validate=False)


def scaled(domain, a):
    """The domain dilated by the real factor a > 0 about the origin."""
    a = float(a)
    if a <= 0:
        raise GeometryError("scale factor must be positive")

    def dilate(comp):
        pieces = []
        for pc in comp.pieces:
            if isinstance(pc, Segment):
                pieces.append(Segment(a * pc.start, a * pc.end))
            elif isinstance(pc, Arc):
                pieces.append(Arc(a * pc.center, a * pc.radius, pc.t0, pc.t1))
            else:
                poly = tuple((p, a * c) for p, c in pc.poly)
                trig = tuple((k, a * c) for k, c in pc.trig)
                pieces.append(ParametricPath(poly, trig, pc.t0, pc.t1))
        return BoundaryComponent(pieces)

    return Domain(dilate(domain.outer), [dilate(h) for h in domain.holes],
                  [a * p for p in domain.hole_points], validate=False)


def refined(domain, k):
    """Copy of the domain with every curve piece split into k sub-pieces
    (same geometry, finer composite quadrature)."""
    def split(comp):
        pieces = []
        for pc in comp.pieces:
            pieces.extend(pc.subdivide(k))
        return BoundaryComponent(pieces)

    return Domain(split(domain.outer), [split(h) for h in domain.holes],
                  domain.hole_points, validate=False)
