"""Assembled reports: the rigidity/area sandwich around the projection
distance, the St. Venant inequality, and the Cauchy-transform norm bound.

The three quantities of the sandwich come from three different machines —
sqrt(rho) from the embedded-boundary Poisson solve, lambda from the boundary
Gram projection, and the upper bound Area/sqrt(2 pi) from plain quadrature —
so the ordering check is a genuine cross-validation, asserted only up to the
propagated error estimates.

The Cauchy transform of 1 is evaluated through the boundary identity
(1/pi) int_W dA(z)/(z - zeta) = (1/2 pi i) oint zbar/(z - zeta) dz - conj(zeta)
with the contour split into panels that are refined geometrically toward any
nearby evaluation point, so values stay accurate arbitrarily close to the
boundary (the L2 grid for the norm needs them there).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import bergman, geometry, poisson
from .errors import AccuracyError, GeometryError, InequalityError
from .geometry import _gauss_nodes
from ._kernels import cauchy_sum

PANEL_ORDER = 24
PANEL_RATIO = 2.0        # refine while panel length > ratio * distance
PANEL_MAX_DEPTH = 48
NEAR_FACTOR = 2.0        # grid cells nearer than this * h get subdivided


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class SandwichReport:
    label: str
    sqrt_rho: float
    lam: float
    upper: float
    margin_lower: float       # lam - sqrt_rho
    margin_upper: float       # upper - lam
    basis_size: int
    rho_error: float          # propagated into sqrt_rho units
    lambda_error: float
    satisfied: bool


@dataclass
class StVenantReport:
    label: str
    rho: float
    bound: float              # Area^2 / (2 pi)
    margin: float
    estimated_error: float
    satisfied: bool


@dataclass
class CauchyNormReport:
    label: str
    norm: float
    bound: float              # Area / sqrt(2 pi)
    satisfied: bool
    h: float

    @property
    def margin(self):
        return self.bound - self.norm


def _lambda_error(result):
    """Crude but honest: roundoff through the Gram solve, plus the clamp."""
    zz = result.zbar_norm_sq
    err_sq = 1e-15 * (1.0 + result.gram_condition) * zz + result.clamp_magnitude
    if result.lam * result.lam > err_sq:
        return err_sq / (2.0 * result.lam)
    return math.sqrt(err_sq)


def sandwich(domain, basis=None, h=None, label=""):
    """sqrt(rho) <= lambda <= Area/sqrt(2 pi), checked within the combined
    error estimates; raises InequalityError if violated beyond them."""
    if h is None:
        h = domain.diameter / 128.0
    proj = bergman.project_zbar(domain, basis)
    rig = poisson.torsional_rigidity(domain, h)
    sqrt_rho = math.sqrt(rig.rho)
    upper = geometry.area(domain) / math.sqrt(2.0 * math.pi)
    lam_err = _lambda_error(proj)
    rho_err = rig.estimated_error / (2.0 * sqrt_rho)
    slack = lam_err + rho_err + 1e-12 * upper
    rep = SandwichReport(label, sqrt_rho, proj.lam, upper,
                         proj.lam - sqrt_rho, upper - proj.lam,
                         len(proj.basis), rho_err, lam_err,
                         satisfied=(proj.lam >= sqrt_rho - slack
                                    and upper >= proj.lam - slack))
    if not rep.satisfied:
        raise InequalityError(
            f"sandwich ordering violated beyond error estimates on "
            f"{label or 'domain'}: sqrt_rho={sqrt_rho!r} lam={proj.lam!r} "
            f"upper={upper!r} slack={slack!r}")
    return rep


def st_venant_check(domain, h=None, label=""):
    """rho <= Area^2/(2 pi) for simply connected domains (the corollary's
    hypothesis; holes are rejected)."""
    if domain.holes:
        raise GeometryError(
            "St. Venant check applies to simply connected domains only")
    if h is None:
        h = domain.diameter / 128.0
    rig = poisson.torsional_rigidity(domain, h)
    a = geometry.area(domain)
    bound = a * a / (2.0 * math.pi)
    margin = bound - rig.rho
    ok = margin >= -rig.estimated_error
    rep = StVenantReport(label, rig.rho, bound, margin,
                         rig.estimated_error, ok)
    if not ok:
        raise InequalityError(
            f"St. Venant violated beyond the error estimate on "
            f"{label or 'domain'}: rho={rig.rho!r} bound={bound!r}")
    return rep


# ---------------------------------------------------------------------------
# Cauchy transform of 1
# ---------------------------------------------------------------------------

def cauchy_transform(domain, zeta):
    """(1/pi) int_W dA(z)/(z - zeta) for zeta inside W, via the boundary
    reduction; accepts a scalar or an array of interior points."""
    z = np.atleast_1d(np.asarray(zeta, dtype=np.complex128))
    wind, dist = domain.winding_and_distance(z)
    if np.any(wind != 1):
        raise GeometryError("cauchy_transform needs interior evaluation "
                            "points (winding 1)")
    if np.any(dist < 1e-12 * domain.diameter):
        raise AccuracyError("evaluation point is on the boundary to within "
                            "tolerance")
    vals = _boundary_cauchy(domain, z) - np.conj(z)
    if np.isscalar(zeta) or np.asarray(zeta).ndim == 0:
        return complex(vals[0])
    return vals


def _boundary_cauchy(domain, targets):
    """(1/2 pi i) oint zbar/(z - t) dz at each target, by composite panels
    refined toward close targets; two orders are compared for an error
    check."""
    coarse = _panel_sum(domain, targets, PANEL_ORDER)
    fine = _panel_sum(domain, targets, 2 * PANEL_ORDER)
    scale = np.maximum(np.abs(fine), 1.0)
    bad = np.abs(fine - coarse) > 1e-9 * scale
    if bad.any():
        raise AccuracyError(
            f"near-boundary Cauchy quadrature unsettled at "
            f"{int(bad.sum())} of {len(targets)} points")
    return fine


def _panel_sum(domain, targets, order):
    xs, ws = _gauss_nodes(order)
    total = np.zeros(len(targets), dtype=np.complex128)
    for comp in domain.components:
        for pc in comp.pieces:
            for a, b in _panels(pc, targets, pc.t0, pc.t1, 0):
                half = 0.5 * (b - a)
                t = 0.5 * (a + b) + half * xs
                z = pc.point(t)
                dz = pc.velocity(t) * (half * ws)
                w = dz * np.conj(z) / (2j * math.pi)
                total += cauchy_sum(np.ascontiguousarray(targets),
                                    np.ascontiguousarray(z),
                                    np.ascontiguousarray(w))
    return total


def _panels(pc, targets, a, b, depth):
    """Bisect [a, b] until each panel is short against its own distance to
    the nearest evaluation point, so close targets get geometric
    refinement and remote stretches stay coarse."""
    za = pc.point(np.asarray(a))
    zb = pc.point(np.asarray(b))
    zm = pc.point(np.asarray(0.5 * (a + b)))
    length = abs(zm - za) + abs(zb - zm)
    if depth >= PANEL_MAX_DEPTH:
        return [(a, b)]
    # distance from the whole panel, not just its midpoint
    dist = (np.abs(targets - zm).min() if len(targets) else np.inf) \
        - 0.5 * length
    if length <= PANEL_RATIO * dist:
        return [(a, b)]
    mid = 0.5 * (a + b)
    return (_panels(pc, targets, a, mid, depth + 1)
            + _panels(pc, targets, mid, b, depth + 1))


def cauchy_norm_conjecture(domain, h, label=""):
    """L2(W) norm of the Cauchy transform of 1 against Area/sqrt(2 pi).

    Midpoint sum over an h-grid; every cell whose center lies within 2h of
    the boundary (on either side) is refined once 4x and its children kept
    by membership, so the covered region tracks the true boundary at the
    h/2 scale instead of the h scale.
    """
    x0, x1, y0, y1 = domain.bbox
    nx = max(1, int(math.ceil((x1 - x0) / h - 1e-12)))
    ny = max(1, int(math.ceil((y1 - y0) / h - 1e-12)))
    xs = x0 + (np.arange(nx) + 0.5) * h
    ys = y0 + (np.arange(ny) + 0.5) * h
    pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    wind, dist = domain.winding_and_distance(pts)
    near = dist <= NEAR_FACTOR * h
    far_in = (wind == 1) & ~near
    integral = 0.0
    if far_in.any():
        vals = cauchy_transform(domain, pts[far_in])
        integral += h * h * float((vals.real ** 2 + vals.imag ** 2).sum())
    if near.any():
        q = 0.25 * h
        off = np.array([q + 1j * q, q - 1j * q, -q + 1j * q, -q - 1j * q])
        children = (pts[near][:, None] + off[None, :]).ravel()
        cw, _ = domain.winding_and_distance(children)
        kept = children[cw == 1]
        if len(kept):
            vals = cauchy_transform(domain, kept)
            integral += 0.25 * h * h * float(
                (vals.real ** 2 + vals.imag ** 2).sum())
    norm = math.sqrt(integral)
    bound = geometry.area(domain) / math.sqrt(2.0 * math.pi)
    return CauchyNormReport(label, norm, bound, norm <= bound, h)


# ---------------------------------------------------------------------------
# the section-5 chain
# ---------------------------------------------------------------------------

def faber_krahn_chain(lam1, area):
    """(2/sqrt(Lam1), (2/j0) sqrt(A/pi), satisfied, relative gap)."""
    j0 = poisson.bessel_j0_first_zero()
    lhs = 2.0 / math.sqrt(lam1)
    rhs = (2.0 / j0) * math.sqrt(area / math.pi)
    return lhs, rhs, lhs <= rhs * (1 + 1e-12), (rhs - lhs) / rhs


def st_venant_bound(area):
    return area * area / (2.0 * math.pi)


def coarse_rigidity_bound(area):
    """4 A^2/(j0^2 pi); strictly weaker than St. Venant since j0^2 < 8."""
    j0 = poisson.bessel_j0_first_zero()
    return 4.0 * area * area / (j0 * j0 * math.pi)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = ["label", "area", "perimeter", "sqrt_rho", "lambda",
                 "upper", "cauchy_norm", "margin_lower", "margin_upper",
                 "cauchy_margin", "rho_error", "lambda_error"]


def sweep_rows(named_domains, h=None, norm_h=None, bases=None):
    """One report row per (label, domain); deterministic order.

    bases: optional dict label -> BasisSpec for the projection step.
    """
    rows = []
    for label, dom in named_domains:
        basis = (bases or {}).get(label)
        rep = sandwich(dom, basis, h=h, label=label)
        nh = norm_h if norm_h is not None else dom.diameter / 128.0
        cn = cauchy_norm_conjecture(dom, nh, label=label)
        rows.append({
            "label": label,
            "area": geometry.area(dom),
            "perimeter": geometry.perimeter(dom),
            "sqrt_rho": rep.sqrt_rho,
            "lambda": rep.lam,
            "upper": rep.upper,
            "cauchy_norm": cn.norm,
            "margin_lower": rep.margin_lower,
            "margin_upper": rep.margin_upper,
            "cauchy_margin": cn.margin,
            "rho_error": rep.rho_error,
            "lambda_error": rep.lambda_error,
        })
    return rows
