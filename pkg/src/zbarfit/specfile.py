"""Domain spec files: key-value text describing a domain to build.

One [domain] section with a ``kind`` plus kind-specific parameters, and any
number of [hole] / [hole.N] sections for the geometric kinds.  The
``level_set`` kind traces |z|^2 - c0 = 2 Re F(z) instead and takes its holes
from the trace.  Field names and formats are documented in
docs/domain_spec.md.
"""

import configparser
import math

from . import tracer
from .basis import AnalyticTerm, expansion_from_pairs
from .errors import GeometryError
from .geometry import (
    Arc,
    BoundaryComponent,
    Domain,
    ParametricPath,
    _component_from_vertices,
)

GEOMETRIC_KINDS = ("disk", "annulus", "ellipse", "polygon", "parametric")
KINDS = GEOMETRIC_KINDS + ("level_set",)


def _complex(text):
    """Parse 'x,y' or a bare real as a complex number."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise GeometryError(f"expected 'x,y' or 'x', got {text!r}")


def _floats(text, n):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != n:
        raise GeometryError(f"expected {n} comma-separated numbers, "
                            f"got {text!r}")
    return parts


def _items(text):
    """Split a ';'-separated list, dropping empties."""
    return [p.strip() for p in text.split(";") if p.strip()]


def load_domain(path):
    """Read a spec file and build the domain it describes."""
    cp = configparser.ConfigParser(delimiters=("=",), interpolation=None)
    read = cp.read(path)
    if not read:
        raise GeometryError(f"cannot read domain spec {path!r}")
    return domain_from_config(cp)


def domain_from_config(cp):
    if "domain" not in cp:
        raise GeometryError("spec file needs a [domain] section")
    sec = cp["domain"]
    kind = sec.get("kind", "").strip()
    if kind not in KINDS:
        raise GeometryError(f"unknown domain kind {kind!r}; "
                            f"expected one of {', '.join(KINDS)}")
    if kind == "level_set":
        return _level_set_domain(sec)
    holes, markers = [], []
    if kind == "annulus":
        from .geometry import annulus

        base = annulus(float(sec["inner_radius"]),
                       float(sec["outer_radius"]),
                       _complex(sec.get("center", "0,0")))
        outer = base.outer
        holes.append(base.holes[0])
        markers.append(base.hole_points[0])
    else:
        outer = _component(sec, kind, orientation=+1)
    for name in cp.sections():
        if name != "hole" and not name.startswith("hole."):
            continue
        hsec = cp[name]
        hkind = hsec.get("kind", "").strip()
        if hkind not in GEOMETRIC_KINDS or hkind == "annulus":
            raise GeometryError(
                f"[{name}] kind must be disk, ellipse, polygon, or "
                f"parametric, got {hkind!r}")
        holes.append(_component(hsec, hkind, orientation=-1))
        markers.append(_complex(hsec["interior_point"])
                       if "interior_point" in hsec else None)
    if any(m is None for m in markers):
        if not all(m is None for m in markers):
            raise GeometryError("give interior_point for every hole or none")
        markers = None
    return Domain(outer, holes, markers)


def _component(sec, kind, orientation):
    center = _complex(sec.get("center", "0,0"))
    if kind == "disk":
        r = float(sec["radius"])
        if r <= 0:
            raise GeometryError("radius must be positive")
        ks = range(4) if orientation > 0 else range(0, -4, -1)
        return BoundaryComponent(
            [Arc(center, r, k * math.pi / 2,
                 (k + orientation) * math.pi / 2) for k in ks])
    if kind == "ellipse":
        a, b = float(sec["a"]), float(sec["b"])
        if a <= 0 or b <= 0:
            raise GeometryError("semi-axes must be positive")
        trig = ((1, (a + b) / 2.0 + 0j), (-1, (a - b) / 2.0 + 0j))
        poly = ((0, center),) if center != 0 else ()
        ks = range(4) if orientation > 0 else range(0, -4, -1)
        return BoundaryComponent(
            [ParametricPath(poly, trig, k * math.pi / 2,
                            (k + orientation) * math.pi / 2) for k in ks])
    if kind == "polygon":
        verts = [_complex(v) for v in _items(sec["vertices"])]
        return _component_from_vertices(verts, orientation)
    # parametric: one closed path, orientation normalized afterwards
    poly = tuple((int(p), c) for p, c in _term_pairs(sec.get("poly", "")))
    trig = tuple((int(k), c) for k, c in _term_pairs(sec.get("trig", "")))
    if not poly and not trig:
        raise GeometryError("parametric kind needs poly and/or trig terms")
    t0 = float(sec.get("t0", "0"))
    t1 = float(sec.get("t1", repr(2 * math.pi)))
    path = ParametricPath(poly, trig, t0, t1)
    comp = BoundaryComponent(path.subdivide(4))
    if comp.signed_area() * orientation < 0:
        comp = BoundaryComponent(
            [ParametricPath(p.poly, p.trig, p.t1, p.t0)
             for p in reversed(comp.pieces)])
    return comp


def _term_pairs(text):
    """'key:re,im; key:re,im' -> [(key_text, complex)], keys left raw."""
    out = []
    for item in _items(text):
        key, _, val = item.partition(":")
        if not _:
            raise GeometryError(f"expected 'key:value', got {item!r}")
        out.append((key.strip(), _complex(val)))
    return out


def _level_set_domain(sec):
    pairs = []
    for p, c in _term_pairs(sec.get("power", "")):
        pairs.append((AnalyticTerm("power", int(p)), c))
    for loc, c in _term_pairs(sec.get("log", "")):
        pairs.append((AnalyticTerm("log", 0, _complex(loc)), c))
    for item in _items(sec.get("pole", "")):
        bits = item.split(":")
        if len(bits) != 3:
            raise GeometryError(
                f"pole term needs 'center:order:coeff', got {item!r}")
        pairs.append((AnalyticTerm("invpow", int(bits[1]),
                                   _complex(bits[0])), _complex(bits[2])))
    if not pairs:
        raise GeometryError("level_set kind needs power/log/pole terms")
    window = tuple(_floats(sec.get("window", "-2.5,2.5,-2.5,2.5"), 4))
    fam = tracer.LevelSetFamily(
        expansion_from_pairs(pairs),
        c0=float(sec.get("c0", "1.0")),
        window=window,
        resolution=int(sec.get("resolution", "512")))
    select = sec.get("select", "outer-with-holes").strip()
    if select.lstrip("-").isdigit():
        select = int(select)
    return tracer.to_domain(tracer.trace(fam), select)
