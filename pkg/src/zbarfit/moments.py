"""Area moments and Bergman inner products via boundary integrals.

Every area integral here is reduced to a contour integral with Green's
theorem:  for g with dg/dzbar = h,

    integral_Omega h dA = (1/2i)  ointegral_Gamma g dz .

The reductions in use:

* moment  w^m wbar^n   ->  g = w^m wbar^(n+1)/(n+1)
* <f, g> for analytic f, g        ->  f * Gc_g          (Gc from basis)
* <zbar, g>                       ->  zbar*Gc_g - H2_g  (H2 from basis)
* ||zbar||^2 = moment(1, 1)

Quadrature order is doubled per boundary piece until successive estimates
agree entrywise; disagreement at the order cap raises AccuracyError.  A 2-D
midpoint-grid path exists as a slow cross-check for callables and tests.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .basis import BasisElement, validate_basis
from .errors import AccuracyError, BasisError
from .geometry import interior_grid

MAX_MOMENT_DEGREE = 64

#: relative agreement demanded between successive quadrature orders
CONVERGE_RTOL = 1e-10
#: acceptable disagreement at the order cap before raising
FAIL_RTOL = 1e-9
#: fraction of the integrand's L1 mass used as the absolute-scale floor
#: (entries that cancel to ~0 are judged against this, not against 0)
SCALE_FLOOR = 1e-3


def _order_ladder(domain):
    n_pieces = sum(len(c.pieces) for c in domain.components)
    if n_pieces > 100:
        # many-piece polyline boundaries: low order per piece is already
        # accurate and the node count is what hurts
        return (4, 8, 16, 32, 64)
    return (16, 32, 64, 128, 256)


def adaptive_contour(domain, evaluate, rtol=CONVERGE_RTOL,
                     fail_rtol=FAIL_RTOL):
    """Drive ``evaluate(quadrature) -> (values, l1_scale)`` to convergence.

    values and l1_scale are arrays of the same shape; each entry converges
    when its change under order doubling drops below
    rtol * max(|value|, SCALE_FLOOR * l1_scale).
    """
    prev = None
    vals = scale = None
    for order in _order_ladder(domain):
        q = domain.quadrature(order)
        vals, scale = evaluate(q)
        vals = np.asarray(vals)
        scale = np.asarray(scale)
        if prev is not None:
            ref = np.maximum(np.abs(vals), SCALE_FLOOR * scale)
            ref = np.maximum(ref, 1e-300)
            err = np.abs(vals - prev)
            if np.all(err <= rtol * ref):
                return vals, order
        prev = vals
    if np.all(err <= fail_rtol * ref):
        return vals, order
    worst = float((err / ref).max())
    raise AccuracyError(
        f"contour quadrature did not converge: relative change {worst:.2e} "
        f"after order {order} per piece")


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentKey:
    m: int
    n: int
    center: complex = 0j

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("moment powers must be nonnegative")
        if self.m > MAX_MOMENT_DEGREE or self.n > MAX_MOMENT_DEGREE:
            raise ValueError(
                f"moment powers capped at {MAX_MOMENT_DEGREE}")


class MomentTable:
    """Immutable map MomentKey -> integral of w^m wbar^n over the domain."""

    def __init__(self, domain, values):
        self.domain = domain
        self._values = dict(values)

    def __len__(self):
        return len(self._values)

    def __contains__(self, key):
        return key in self._values

    def value(self, m, n, center=0j):
        return self._values[MomentKey(m, n, complex(center))]

    def items(self):
        return self._values.items()

    def save_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["m", "n", "center", "re", "im"])
            keys = sorted(self._values,
                          key=lambda k: (k.m + k.n, k.m, k.center.real,
                                         k.center.imag))
            for k in keys:
                v = self._values[k]
                w.writerow([k.m, k.n, repr(k.center),
                            "%.17g" % v.real, "%.17g" % v.imag])

    @classmethod
    def load_csv(cls, path, domain=None):
        values = {}
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                key = MomentKey(int(row["m"]), int(row["n"]),
                                complex(row["center"]))
                values[key] = complex(float(row["re"]), float(row["im"]))
        return cls(domain, values)


def complex_moment(domain, m, n, center=0j):
    """integral over the domain of w^m * conj(w)^n dA, w = z - center."""
    MomentKey(m, n, complex(center))  # range validation
    c = complex(center)

    def evaluate(q):
        w = q.points - c
        integrand = w ** m * np.conj(w) ** (n + 1)
        pref = 1.0 / (2j * (n + 1))
        val = pref * (integrand * q.dz).sum()
        scale = abs(pref) * (np.abs(integrand) * np.abs(q.dz)).sum()
        return np.array([val]), np.array([scale])

    vals, _ = adaptive_contour(domain, evaluate)
    return complex(vals[0])


def moment_table(domain, max_total_degree, center=0j):
    """All moments with m + n <= max_total_degree, one adaptive pass."""
    c = complex(center)
    keys = [MomentKey(m, n, c)
            for tot in range(max_total_degree + 1)
            for m in range(tot + 1)
            for n in [tot - m]]

    def evaluate(q):
        w = q.points - c
        adz = np.abs(q.dz)
        vals = np.empty(len(keys), dtype=np.complex128)
        scales = np.empty(len(keys))
        maxpow = max_total_degree + 1
        wp = np.vstack([w ** k for k in range(maxpow + 1)])
        wc = np.conj(wp)
        for i, k in enumerate(keys):
            integrand = wp[k.m] * wc[k.n + 1]
            pref = 1.0 / (2j * (k.n + 1))
            vals[i] = pref * (integrand * q.dz).sum()
            scales[i] = abs(pref) * (np.abs(integrand) * adz).sum()
        return vals, scales

    vals, _ = adaptive_contour(domain, evaluate)
    return MomentTable(domain, dict(zip(keys, vals)))


def area_moment(domain):
    """integral of 1 dA = area, through the same machinery."""
    return complex_moment(domain, 0, 0).real


def zbar_norm_sq(domain):
    """||zbar||^2 = integral of |z|^2 dA (real)."""
    return complex_moment(domain, 1, 1, 0j).real


# ---------------------------------------------------------------------------
# inner products
# ---------------------------------------------------------------------------

def inner_product(domain, f, g):
    """<f, g> = integral of f * conj(g) dA.

    BasisElement arguments go through the boundary reduction; plain
    callables fall back to interior-grid quadrature with a Richardson
    consistency check (slow; mainly a test oracle).
    """
    if isinstance(f, BasisElement) and isinstance(g, BasisElement):
        validate_basis(domain, [f, g])

        def evaluate(q):
            fv = f.evaluate(q.points)
            gc = g.conj_antiderivative(q.points)
            integrand = fv * gc
            val = (integrand * q.dz).sum() / 2j
            scale = 0.5 * (np.abs(integrand) * np.abs(q.dz)).sum()
            return np.array([val]), np.array([scale])

        vals, _ = adaptive_contour(domain, evaluate)
        return complex(vals[0])
    fc = f.evaluate if isinstance(f, BasisElement) else f
    gc = g.evaluate if isinstance(g, BasisElement) else g
    return _grid_integral(domain, lambda z: fc(z) * np.conj(gc(z)))


def zbar_inner_product(domain, g):
    """<zbar, g> = integral of zbar * conj(g) dA."""
    if isinstance(g, BasisElement):
        validate_basis(domain, [g])

        def evaluate(q):
            zb = np.conj(q.points)
            gc = g.conj_antiderivative(q.points)
            h2 = g.conj_antiderivative2(q.points)
            integrand = zb * gc - h2
            val = (integrand * q.dz).sum() / 2j
            scale = 0.5 * ((np.abs(zb * gc) + np.abs(h2))
                           * np.abs(q.dz)).sum()
            return np.array([val]), np.array([scale])

        vals, _ = adaptive_contour(domain, evaluate)
        return complex(vals[0])
    return _grid_integral(domain, lambda z: np.conj(z) * np.conj(g(z)))


def _grid_integral(domain, fn, rtol=2e-5):
    """Midpoint-grid area integral at two spacings + Richardson check."""
    vals = []
    for divisor in (220, 440):
        pts, cell = interior_grid(domain, domain.diameter / divisor)
        vals.append(complex(np.sum(fn(pts)) * cell))
    coarse, fine = vals
    extrap = fine + (fine - coarse)  # first-order boundary-cell error
    drift = abs(fine - coarse)
    if drift > max(1e3 * rtol * max(abs(fine), 1e-30), 1e-12):
        # not converged enough to trust even the extrapolation
        raise AccuracyError(
            f"grid quadrature drift {drift:.2e} too large at spacing "
            f"{domain.diameter / 440:.3e}")
    return extrap
