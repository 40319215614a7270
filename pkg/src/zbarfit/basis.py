"""Analytic basis elements and antiderivative expansions.

Elements are the building blocks the projection works with:

* ``monomial``  ((z - center)/scale)^k, k >= 0
* ``pole``      1/(z - center - location)^j, j >= 1
* ``logderiv``  1/(z - center - location)  (alias for a first-order pole,
  kept distinct so callers can request "the element whose antiderivative
  is a logarithm" explicitly)

Each element knows, besides its own values, two auxiliary functions used to
turn area integrals into boundary integrals (Green's theorem):

* ``conj_antiderivative`` (Gc): dGc/dzbar = conj(element)
* ``conj_antiderivative2`` (H2): dH2/dzbar = Gc

Everything here is chosen single-valued on any domain avoiding the pole
location, so the boundary reduction never meets a branch cut.  The only
multivalued object is the complex logarithm appearing in *antiderivatives*
of first-order poles; its branch cut runs along the ray from the pole in
``cut_direction``, and Re log = ln|.| stays single-valued regardless.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BasisError, BranchCutError, EvaluationError

_KINDS = ("monomial", "pole", "logderiv")


@dataclass(frozen=True)
class BasisElement:
    kind: str
    exponent: int = 0
    center: complex = 0j
    scale: float = 1.0
    location: complex = 0j
    # preferred branch-cut direction for the antiderivative's log term;
    # set away from the domain centroid by default_basis
    cut_direction: complex = 1 + 0j

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise BasisError(f"unknown element kind {self.kind!r}")
        if self.kind == "monomial":
            if self.exponent < 0:
                raise BasisError("monomial exponent must be >= 0")
            if not self.scale > 0:
                raise BasisError("monomial scale must be positive")
        elif self.kind == "pole":
            if self.exponent < 1:
                raise BasisError("pole order must be >= 1")

    @property
    def pole_position(self):
        return self.center + self.location

    @property
    def order(self):
        """Pole order (1 for logderiv, 0 for monomials)."""
        if self.kind == "monomial":
            return 0
        return 1 if self.kind == "logderiv" else self.exponent

    # -- pointwise values ---------------------------------------------------

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "monomial":
            w = (z - self.center) / self.scale
            return w ** self.exponent
        w = z - self.pole_position
        if np.any(w == 0):
            raise EvaluationError(
                f"evaluation at the pole {self.pole_position}")
        return w ** (-self.order)

    def conj_antiderivative(self, z):
        """Gc with dGc/dzbar = conj(self); single-valued off the pole."""
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "monomial":
            k = self.exponent
            w = (z - self.center) / self.scale
            return np.conj(self.scale * w ** (k + 1) / (k + 1))
        w = z - self.pole_position
        j = self.order
        if j == 1:
            return (np.log(np.abs(w) ** 2) + 0j)
        wc = np.conj(w)
        if j == 2:
            return -1.0 / wc
        return -wc ** (1 - j) / (j - 1)

    def conj_antiderivative2(self, z):
        """H2 with dH2/dzbar = Gc; single-valued off the pole."""
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "monomial":
            k = self.exponent
            w = (z - self.center) / self.scale
            return np.conj(self.scale ** 2 * w ** (k + 2)
                           / ((k + 1) * (k + 2)))
        w = z - self.pole_position
        wc = np.conj(w)
        j = self.order
        if j == 1:
            return wc * (np.log(np.abs(w) ** 2) - 1.0)
        if j == 2:
            return -(np.log(np.abs(w) ** 2) + 0j)
        return wc ** (2 - j) / ((j - 1) * (j - 2))

    def antiderivative_terms(self):
        """[(AnalyticTerm, multiplier)]: termwise primitive with constant 0.

        monomial (w/R)^k -> R (w/R)^(k+1)/(k+1); 1/(w-a) -> log(w-a);
        1/(w-a)^j, j >= 2 -> -(w-a)^(1-j)/(j-1).
        """
        if self.kind == "monomial":
            k = self.exponent
            term = AnalyticTerm("power", k + 1, self.center, self.scale)
            return [(term, self.scale / (k + 1))]
        j = self.order
        if j == 1:
            term = AnalyticTerm("log", 0, self.pole_position,
                                cut_direction=self.cut_direction)
            return [(term, 1.0 + 0j)]
        term = AnalyticTerm("invpow", j - 1, self.pole_position)
        return [(term, -1.0 / (j - 1))]

    def label(self):
        if self.kind == "monomial":
            return f"((z-{self.center:g})/{self.scale:g})^{self.exponent}"
        return f"(z-{self.pole_position:g})^-{self.order}"


def monomial(exponent, center=0j, scale=1.0):
    return BasisElement("monomial", exponent, complex(center), float(scale))


def pole(order, location, cut_direction=1 + 0j):
    return BasisElement("pole", order, 0j, 1.0, complex(location),
                        complex(cut_direction))


def logderiv(location, cut_direction=1 + 0j):
    return BasisElement("logderiv", 1, 0j, 1.0, complex(location),
                        complex(cut_direction))


@dataclass(frozen=True)
class BasisSpec:
    """Ordered element list; flags whether element 0 is the constant."""

    elements: tuple
    constant_first: bool = field(default=False)

    def __post_init__(self):
        if not self.elements:
            raise BasisError("basis needs at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise BasisError("basis elements must be pairwise distinct")
        is_const = (self.elements[0].kind == "monomial"
                    and self.elements[0].exponent == 0)
        object.__setattr__(self, "constant_first", is_const)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


def validate_basis(domain, basis):
    """Check every pole sits strictly outside closure(domain)."""
    locs = [el.pole_position for el in basis if el.kind != "monomial"]
    if not locs:
        return
    wind, dist = domain.winding_and_distance(np.asarray(locs))
    tol = 1e-9 * domain.diameter
    for el_loc, w, d in zip(locs, wind, dist):
        if w == 1 or d <= tol:
            raise BasisError(
                f"pole at {el_loc} lies inside or on the closure of the "
                f"domain (winding {w}, boundary distance {d:.2e})")


# ---------------------------------------------------------------------------
# antiderivative expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnalyticTerm:
    """One primitive term: power ((z-c)/R)^p, invpow (z-c)^-p, or log(z-c).

    Log terms use the branch cut along {c + t*cut_direction, t >= 0}; their
    real part ln|z-c| never needs the cut.
    """

    kind: str            # "power" | "invpow" | "log"
    exponent: int = 0
    center: complex = 0j
    scale: float = 1.0
    cut_direction: complex = 1 + 0j

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "power":
            return ((z - self.center) / self.scale) ** self.exponent
        w = z - self.center
        if self.kind == "invpow":
            return w ** (-self.exponent)
        return _directed_log(w, self.cut_direction)

    def real_part(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "log":
            with np.errstate(divide="ignore"):
                return np.log(np.abs(z - self.center))
        return self.evaluate(z).real

    def imag_basis_part(self, z):
        """Imaginary part of the term itself (for complex coefficients)."""
        if self.kind == "log":
            return _directed_log(np.asarray(z, np.complex128) - self.center,
                                 self.cut_direction).imag
        return self.evaluate(z).imag

    def derivative_terms(self):
        if self.kind == "power":
            if self.exponent == 0:
                return []
            return [(AnalyticTerm("power", self.exponent - 1, self.center,
                                  self.scale),
                     self.exponent / self.scale)]
        if self.kind == "log":
            return [(AnalyticTerm("invpow", 1, self.center), 1.0 + 0j)]
        return [(AnalyticTerm("invpow", self.exponent + 1, self.center),
                 -float(self.exponent) + 0j)]


def _directed_log(w, direction):
    """log with the branch cut along arg(w) = arg(direction)."""
    d = complex(direction)
    if d == 0:
        d = 1 + 0j
    alpha = math.atan2(d.imag, d.real)
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = alpha - math.pi + np.angle(-w * np.exp(-1j * alpha))
        return np.log(np.abs(w)) + 1j * theta


class AnalyticExpansion:
    """Finite sum  sum_k  coeff_k * term_k  of primitive terms."""

    def __init__(self, terms):
        self.terms = tuple((t, complex(c)) for t, c in terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def log_coefficients(self):
        return [c for t, c in self.terms if t.kind == "log"]

    @property
    def has_complex_log(self):
        """True when a log term carries a coefficient with a non-negligible
        imaginary part, making Re(expansion) jump across that term's cut."""
        scale = max((abs(c) for _, c in self.terms), default=0.0)
        return any(abs(c.imag) > 1e-12 * max(scale, 1e-30)
                   for c in self.log_coefficients)

    def complex_log_cut_rays(self):
        """(origin, direction) of each cut that actually carries a jump,
        i.e. belongs to a log term with a non-real coefficient."""
        scale = max((abs(c) for _, c in self.terms), default=0.0)
        tol = 1e-12 * max(scale, 1e-30)
        return [(t.center, t.cut_direction) for t, c in self.terms
                if t.kind == "log" and abs(c.imag) > tol]

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape, dtype=np.complex128)
        for t, c in self.terms:
            out += c * t.evaluate(z)
        return out

    def real_part(self, z):
        """Re(expansion), single-valued away from the log branch cuts.

        Real log coefficients contribute c * ln|w| (no cut at all); complex
        coefficients additionally contribute -Im(c) * arg(w) with the arg
        measured against each term's cut direction, so the value is
        well-defined everywhere off the cut rays.  Callers that need a cut-
        free guarantee (tracer, boundary sampling) must check the cut rays
        against their region themselves.
        """
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape, dtype=np.float64)
        for t, c in self.terms:
            if t.kind == "log":
                out += c.real * t.real_part(z)
                if c.imag != 0.0:
                    out -= c.imag * t.imag_basis_part(z)
            else:
                v = t.evaluate(z)
                out += c.real * v.real - c.imag * v.imag
        return out

    def derivative(self):
        out = []
        for t, c in self.terms:
            for dt, dc in t.derivative_terms():
                out.append((dt, c * dc))
        return AnalyticExpansion(_merge_terms(out))

    def __add__(self, other):
        return AnalyticExpansion(_merge_terms(list(self.terms)
                                              + list(other.terms)))


def _merge_terms(pairs):
    merged = {}
    order = []
    for t, c in pairs:
        key = (t.kind, t.exponent, t.center, t.scale)
        if key in merged:
            merged[key] = (merged[key][0], merged[key][1] + complex(c))
        else:
            merged[key] = (t, complex(c))
            order.append(key)
    out = [merged[k] for k in order if merged[k][1] != 0]
    return out or [(AnalyticTerm("power", 0), 0j)]


def expansion_from_pairs(pairs):
    """Build an expansion from (term, coeff) pairs, merging duplicates."""
    return AnalyticExpansion(_merge_terms(list(pairs)))
