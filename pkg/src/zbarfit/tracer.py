"""Implicit-curve tracing for |z|^2 - c0 = 2 Re F(z).

The field G(z) = |z|^2 - c0 - 2 Re F(z) is sampled on a regular grid over a
window, its zero set is extracted by marching squares, and every crossing is
then pushed onto the exact curve by a safeguarded secant iteration along its
grid edge, so the resulting polyline vertices satisfy |G| < 1e-10.  Closed
chains become curves; chains that run into the window edge are dropped with
a warning (enlarge the window).

The traced curves can be re-assembled into a Domain (outer curve + holes)
and the projection run on it; ``roundtrip`` closes the loop and compares the
recovered best approximation against F'.
"""

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bergman
from .basis import AnalyticExpansion, AnalyticTerm, expansion_from_pairs
from .errors import BranchCutError, EmptyTraceError, GeometryError
from .geometry import BoundaryComponent, Domain, Segment
from ._kernels import winding_mindist

_CLIP = 1e30


@dataclass
class LevelSetFamily:
    """F (antiderivative of the target f), level constant, and grid window."""

    F: AnalyticExpansion
    c0: float = 1.0
    window: tuple = (-2.5, 2.5, -2.5, 2.5)
    resolution: int = 512

    def __post_init__(self):
        x0, x1, y0, y1 = self.window
        if not (math.isfinite(x0) and math.isfinite(x1)
                and math.isfinite(y0) and math.isfinite(y1)
                and x0 < x1 and y0 < y1):
            raise GeometryError("window must be a bounded rectangle")
        if self.resolution < 64:
            raise GeometryError("resolution must be at least 64")

    def values(self, z):
        """G(z) = |z|^2 - c0 - 2 Re F(z), clipped, NaN treated as exterior."""
        if self.F.has_complex_log:
            raise BranchCutError(
                "level-set family needs real log coefficients; Re F is "
                "multivalued otherwise")
        z = np.asarray(z, dtype=np.complex128)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            g = np.abs(z) ** 2 - self.c0 - 2.0 * self.F.real_part(z)
        g = np.nan_to_num(g, nan=_CLIP, posinf=_CLIP, neginf=-_CLIP)
        return np.clip(g, -_CLIP, _CLIP)

    def gradient(self, z):
        """grad G as a complex number: 2z - 2 conj(F'(z))."""
        z = np.asarray(z, dtype=np.complex128)
        return 2.0 * z - 2.0 * np.conj(self.F.derivative().evaluate(z))


@dataclass
class TracedCurve:
    vertices: np.ndarray          # complex, closed implicitly
    signed_area: float            # shoelace of the vertex polygon
    is_simple: bool
    sagitta_correction: float = 0.0

    @property
    def orientation(self):
        return "ccw" if self.signed_area > 0 else "cw"

    @property
    def area(self):
        """Enclosed area: polygon area plus the parabolic-segment correction
        for the chords' deviation from the curve (vertices are exact, so the
        polygon alone is biased by the sagittas)."""
        return abs(self.signed_area + self.sagitta_correction)

    def interior_point(self):
        v = self.vertices
        w = np.roll(v, -1)
        cross = v.real * w.imag - w.real * v.imag
        c = complex(((v + w) * cross).sum() / (3.0 * cross.sum()))
        wind, _ = _curve_winding(self, np.array([c]))
        if wind[0] != 0:
            return c
        from shapely.geometry import Polygon

        p = Polygon(np.column_stack([v.real, v.imag])).representative_point()
        return complex(p.x, p.y)


@dataclass
class TracedCurveSet:
    curves: list
    family: LevelSetFamily
    n_discarded_open: int = 0

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)


def _curve_winding(curve, z):
    v = curve.vertices
    w = np.roll(v, -1)
    z = np.asarray(z, dtype=np.complex128)
    return winding_mindist(
        np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag),
        np.ascontiguousarray(v.real), np.ascontiguousarray(v.imag),
        np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag))


# ---------------------------------------------------------------------------
# marching squares
# ---------------------------------------------------------------------------

# edge pairings per 4-bit corner code (bit set = corner value < 0), corners
# ordered bl, br, tr, tl; edges are B(ottom), R(ight), T(op), L(eft).
# codes 5 and 10 are saddles, resolved by the cell-center sign at runtime.
_SEGMENTS = {
    1: [("L", "B")], 2: [("B", "R")], 3: [("L", "R")], 4: [("T", "R")],
    6: [("B", "T")], 7: [("L", "T")], 8: [("L", "T")], 9: [("B", "T")],
    11: [("T", "R")], 12: [("L", "R")], 13: [("B", "R")], 14: [("L", "B")],
}


def trace(family):
    """Extract the zero level set of the family's G over its window."""
    x0, x1, y0, y1 = family.window
    n = family.resolution
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    zg = xs[None, :] + 1j * ys[:, None]
    g = family.values(zg)
    neg = g < 0

    # crossed edges; keys ("h", i, j) bottom-left-indexed
    hx = neg[:, :-1] != neg[:, 1:]       # horizontal edges, shape (n+1, n)
    vx = neg[:-1, :] != neg[1:, :]       # vertical edges, shape (n, n+1)
    if not hx.any() and not vx.any():
        raise EmptyTraceError("no zero crossings of G in the window")

    edge_points = {}
    _refine_edges(family, edge_points, hx, xs, ys, horizontal=True)
    _refine_edges(family, edge_points, vx, xs, ys, horizontal=False)

    # cell codes; corners bl=(j,i) br=(j,i+1) tr=(j+1,i+1) tl=(j+1,i)
    code = (neg[:-1, :-1].astype(np.int8)
            | (neg[:-1, 1:].astype(np.int8) << 1)
            | (neg[1:, 1:].astype(np.int8) << 2)
            | (neg[1:, :-1].astype(np.int8) << 3))
    jj, ii = np.nonzero((code != 0) & (code != 15))
    saddle = (code[jj, ii] == 5) | (code[jj, ii] == 10)
    if saddle.any():
        centers = (xs[ii[saddle]] + xs[ii[saddle] + 1]) / 2 + \
            1j * (ys[jj[saddle]] + ys[jj[saddle] + 1]) / 2
        center_neg = family.values(centers) < 0
    adjacency = {}
    k_saddle = 0
    for t in range(len(jj)):
        j, i = int(jj[t]), int(ii[t])
        c = int(code[j, i])
        if c == 5 or c == 10:
            cn = bool(center_neg[k_saddle])
            k_saddle += 1
            if c == 5:
                pairs = [("L", "T"), ("B", "R")] if cn else \
                    [("L", "B"), ("T", "R")]
            else:
                pairs = [("L", "B"), ("T", "R")] if cn else \
                    [("B", "R"), ("L", "T")]
        else:
            pairs = _SEGMENTS[c]
        for a, b in pairs:
            ka = _edge_key(a, i, j)
            kb = _edge_key(b, i, j)
            adjacency.setdefault(ka, []).append(kb)
            adjacency.setdefault(kb, []).append(ka)

    curves, discarded = _chain(adjacency, edge_points)
    if discarded:
        warnings.warn(
            f"{discarded} open chain(s) hit the window edge and were "
            "discarded; enlarge the window", stacklevel=2)
    if not curves:
        raise EmptyTraceError(
            "no closed curves in the window (only clipped chains)")
    out = []
    from shapely.geometry import LineString

    for verts in curves:
        v = np.asarray(verts)
        w = np.roll(v, -1)
        area = 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))
        coords = np.column_stack([v.real, v.imag])
        simple = LineString(np.vstack([coords, coords[:1]])).is_simple
        out.append(TracedCurve(v, area, simple,
                               _sagitta_correction(family, v)))
    out.sort(key=lambda c: -c.area)
    return TracedCurveSet(out, family, discarded)


def _sagitta_correction(family, v):
    """Signed area between the vertex polygon's chords and the true curve.

    Each chord midpoint is pushed onto G = 0 by Newton steps along grad G;
    the parabolic segment over chord Delta with midpoint offset d has signed
    area -(2/3) cross(Delta, d).  Steps that misbehave (flat gradient, large
    jump) contribute nothing rather than garbage.
    """
    delta = np.roll(v, -1) - v
    mid = v + 0.5 * delta
    z = mid.copy()
    for _ in range(3):
        gz = family.values(z)
        grad = family.gradient(z)
        norm2 = np.abs(grad) ** 2
        step = np.where(norm2 > 1e-30, gz * grad / np.where(norm2 > 0, norm2, 1.0), 0.0)
        z = z - step
    d = z - mid
    bad = (np.abs(d) > np.abs(delta)) | (np.abs(family.values(z))
                                         > np.abs(family.values(mid)))
    d = np.where(bad, 0.0, d)
    cross = delta.real * d.imag - delta.imag * d.real
    return -(2.0 / 3.0) * float(cross.sum())


def _edge_key(side, i, j):
    if side == "B":
        return ("h", i, j)
    if side == "T":
        return ("h", i, j + 1)
    if side == "L":
        return ("v", i, j)
    return ("v", i + 1, j)


def _refine_edges(family, edge_points, crossed, xs, ys, horizontal):
    jj, ii = np.nonzero(crossed)
    if len(jj) == 0:
        return
    if horizontal:
        za = xs[ii] + 1j * ys[jj]
        zb = xs[ii + 1] + 1j * ys[jj]
        keys = [("h", int(i), int(j)) for i, j in zip(ii, jj)]
    else:
        za = xs[ii] + 1j * ys[jj]
        zb = xs[ii] + 1j * ys[jj + 1]
        keys = [("v", int(i), int(j)) for i, j in zip(ii, jj)]
    pts = _refine_crossings(family, za, zb)
    for k, p in zip(keys, pts):
        edge_points[k] = p


def _refine_crossings(family, za, zb, tol=1e-10, max_iter=60):
    """Safeguarded secant along each edge until |G| < tol (vectorized)."""
    ga = family.values(za)
    gb = family.values(zb)
    # keep a sign bracket [lo, hi]; relabel so g(lo) < 0 <= g(hi)
    swap = ga > 0
    lo = np.where(swap, zb, za)
    hi = np.where(swap, za, zb)
    glo = np.where(swap, gb, ga)
    ghi = np.where(swap, ga, gb)
    t = glo / (glo - ghi)  # secant from linear interpolation
    z = lo + t * (hi - lo)
    for _ in range(max_iter):
        gz = family.values(z)
        done = np.abs(gz) < tol
        if done.all():
            break
        neg = gz < 0
        lo = np.where(neg, z, lo)
        glo = np.where(neg, gz, glo)
        hi = np.where(neg, hi, z)
        ghi = np.where(neg, ghi, gz)
        # a sample landing exactly on G = 0 collapses the bracket; those
        # lanes are done and keep z, so any finite t placeholder works
        den = glo - ghi
        t = np.divide(glo, den, out=np.full_like(glo, 0.5),
                      where=den != 0)
        t = np.clip(t, 0.05, 0.95)  # safeguard against stagnation
        znew = lo + t * (hi - lo)
        z = np.where(done, z, znew)
    return z


def _chain(adjacency, edge_points):
    visited = set()
    curves = []
    discarded = 0
    # consume open chains from their degree-1 endpoints first so each is
    # dropped whole (and counted once); what remains is closed cycles
    for start, nbrs in adjacency.items():
        if len(nbrs) != 2 and start not in visited:
            _walk(adjacency, start, visited)
            discarded += 1
    for start in adjacency:
        if start in visited:
            continue
        chain = _walk(adjacency, start, visited)
        if chain is None:
            discarded += 1
            continue
        curves.append([edge_points[k] for k in chain])
    return curves, discarded


def rotation_symmetry_defect(curve, k, center=0j):
    """Symmetric Hausdorff distance between the curve and itself rotated by
    2 pi / k about center (point-to-polyline in both directions)."""
    rot = np.exp(2j * math.pi / k)
    a = curve.vertices
    b = (a - center) * rot + center

    def directed(pts, poly):
        w = np.roll(poly, -1)
        _, dist = winding_mindist(
            np.ascontiguousarray(pts.real), np.ascontiguousarray(pts.imag),
            np.ascontiguousarray(poly.real), np.ascontiguousarray(poly.imag),
            np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag))
        return float(dist.max())

    return max(directed(b, a), directed(a, b))


# ---------------------------------------------------------------------------
# domains from traces
# ---------------------------------------------------------------------------

def to_domain(curves, select="outer-with-holes"):
    """Assemble a Domain from traced curves.

    select = "outer-with-holes": the largest interior-enclosing curve
    (G < 0 inside) becomes the outer boundary; interior-excluding curves
    (G > 0 inside) contained in it become holes.  select = integer: that
    curve (area-sorted index) is the outer boundary instead.
    """
    fam = curves.family
    info = []
    for c in curves:
        info.append((c, c.interior_point(), _interior_sign_probe(fam, c)))
    if select == "outer-with-holes":
        enclosing = [t for t in info if t[2] < 0]
        if not enclosing:
            raise GeometryError(
                "no traced curve encloses domain interior (G < 0)")
        outer = max(enclosing, key=lambda t: t[0].area)[0]
    else:
        outer = info[int(select)][0]
    if not outer.is_simple:
        raise GeometryError("selected outer curve self-intersects")
    holes = []
    hole_points = []
    for c, p, gval in info:
        if c is outer:
            continue
        wind, _ = _curve_winding(outer, np.array([p]))
        if wind[0] == 0:
            continue
        if gval > 0:
            if not c.is_simple:
                raise GeometryError("hole curve self-intersects")
            holes.append(c)
            hole_points.append(p)
    # islands (G < 0 curves nested inside holes) are separate components of
    # the level set and are simply not part of this domain
    outer_comp = _curve_component(outer, ccw=True)
    hole_comps = [_curve_component(h, ccw=False) for h in holes]
    return Domain(outer_comp, hole_comps, hole_points)


def _curve_component(curve, ccw):
    v = curve.vertices
    if (curve.signed_area > 0) != ccw:
        v = v[::-1]
    w = np.roll(v, -1)
    return BoundaryComponent([Segment(a, b) for a, b in zip(v, w)])


def _interior_sign_probe(fam, curve):
    """G sampled just inside the curve, a quarter edge-length off an edge
    midpoint.  The polygon centroid is useless here: for pocket curves
    around a pole of F it sits on the singularity, where clipped G says
    nothing about the region the curve actually bounds."""
    v = curve.vertices
    w = np.roll(v, -1)
    edges = w - v
    order = np.argsort(-np.abs(edges))
    for k in order[:8]:
        t = edges[k]
        mid = v[k] + 0.5 * t
        normal = 1j * t / abs(t)
        for cand in (mid + 0.25 * abs(t) * normal,
                     mid - 0.25 * abs(t) * normal):
            wind, _ = _curve_winding(curve, np.array([cand]))
            if wind[0] != 0:
                return float(fam.values(np.array([cand]))[0])
    return float(fam.values(np.array([curve.interior_point()]))[0])


def roundtrip(family, basis=None, n_points=50, seed=0):
    """Trace, rebuild the domain, project, compare against F'.

    Returns (max pointwise |f_recovered - F'|, boundary defect of the
    recovered antiderivative), with the pointwise comparison taken on
    n_points interior points at distance > 0.05 * diameter from the
    boundary.
    """
    dom = to_domain(trace(family))
    result = bergman.project_zbar(dom, basis)
    f_known = family.F.derivative()
    pts = _interior_samples(dom, n_points, seed)
    err = float(np.abs(bergman.evaluate_f(result, pts)
                       - f_known.evaluate(pts)).max())
    c0, defect = bergman.boundary_defect(dom, bergman.antiderivative(result))
    return err, defect


def _interior_samples(domain, n, seed):
    rng = np.random.default_rng(seed)
    x0, x1, y0, y1 = domain.bbox
    keep = []
    guard = 0.05 * domain.diameter
    while len(keep) < n:
        z = (rng.uniform(x0, x1, 4 * n)
             + 1j * rng.uniform(y0, y1, 4 * n))
        wind, dist = domain.winding_and_distance(z)
        good = z[(wind == 1) & (dist > guard)]
        keep.extend(good.tolist())
    return np.asarray(keep[:n], dtype=np.complex128)


# ---------------------------------------------------------------------------
# the worked examples
# ---------------------------------------------------------------------------

def _power(p, coeff):
    return (AnalyticTerm("power", p), complex(coeff))


def _logt(location, coeff):
    return (AnalyticTerm("log", 0, complex(location)), complex(coeff))


def _invpow(p, location, coeff):
    return (AnalyticTerm("invpow", p, complex(location)), complex(coeff))


def _partial_fraction_reciprocal(poles, scale):
    """1/(scale * prod (z - p_k)) as simple fractions (distinct roots)."""
    pairs = []
    for k, p in enumerate(poles):
        denom = 1.0 + 0j
        for j, q in enumerate(poles):
            if j != k:
                denom *= (p - q)
        pairs.append(_invpow(1, p, 1.0 / (scale * denom)))
    return pairs


def figure_families(resolution=512):
    """The named level-set families: a circle control plus the polynomial,
    simple-pole, and higher-order-pole example groups."""
    cubic_poles = (0.5 + 0j, 1j / 3, -0.25 + 0j)
    fams = {
        "circle": [_power(0, 0.0)],
        "fig3.1": [_power(3, 0.1)],
        "fig3.2": [_power(4, 0.1)],
        "fig3.3": [_power(5, 1.0 / 14)],
        "fig3.4": [_logt(0, 1.0 / 3), _logt(0.5, 1.0 / 5)],
        "fig3.5": [_logt(0, 1.0 / 7), _logt(0.5, 1.0 / 10)],
        "fig3.6": _partial_fraction_reciprocal(cubic_poles, 40.0),
        "fig3.7": _partial_fraction_reciprocal(cubic_poles, 10.0),
        "fig3.8": _partial_fraction_reciprocal(cubic_poles, 8.0),
        "fig3.9": [_invpow(6, 0, 1.0 / 20)],
    }
    return {name: LevelSetFamily(expansion_from_pairs(pairs),
                                 resolution=resolution)
            for name, pairs in fams.items()}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def curves_csv(curveset, path):
    """curve id, vertex index, x, y rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["curve", "vertex", "x", "y"])
        for ci, c in enumerate(curveset):
            for vi, z in enumerate(c.vertices):
                w.writerow([ci, vi, "%.17g" % z.real, "%.17g" % z.imag])


def curves_svg(curveset, path):
    """One SVG path per curve, viewBox = the trace window, y flipped up."""
    x0, x1, y0, y1 = curveset.family.window
    wd, ht = x1 - x0, y1 - y0
    sw = wd / 512.0
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{x0:g} {-y1:g} {wd:g} {ht:g}">',
        f'<g fill="none" stroke="black" stroke-width="{sw:g}">',
    ]
    for c in curveset:
        coords = " L ".join(f"{z.real:.6g} {-z.imag:.6g}" for z in c.vertices)
        lines.append(f'<path d="M {coords} Z"/>')
    lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _walk(adjacency, start, visited):
    """Follow the chain from start; returns the cycle's keys, or None if the
    walk terminates at a degree-1 endpoint (open chain)."""
    chain = [start]
    visited.add(start)
    prev = None
    cur = start
    while True:
        cands = list(adjacency[cur])
        if prev is not None and prev in cands:
            cands.remove(prev)  # one occurrence: a 2-cycle keeps the other
        if not cands:
            return None
        nxt = cands[0]
        if nxt == start:
            return chain
        if nxt in visited:
            return None
        chain.append(nxt)
        visited.add(nxt)
        prev, cur = cur, nxt
