"""Boundary representation, quadrature, and point classification."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zbarfit import geometry
from zbarfit.errors import GeometryError
from zbarfit.geometry import BoundaryComponent, Domain, Segment

CLOSED_FORM_AREAS = {
    "disk": math.pi,
    "annulus": math.pi * (1.0 - 0.25),
    "ellipse": 2.0 * math.pi,
    "square": 1.0,
    "rect": 2.0,
}


def test_boundary_integral_of_dz_vanishes(builtins):
    # every component is closed, so the raw quadrature nodes must satisfy
    # sum(dz) = 0 to roundoff at any order
    for name, dom in builtins.items():
        q = dom.quadrature(8)
        total = q.dz.sum()
        assert abs(total) < 1e-12 * np.abs(q.dz).sum(), name


def test_area_two_boundary_reductions_agree(builtins):
    # (1/2i) contour z conj dz  vs  0.5 * sum(x dy - y dx) from the same
    # nodes: both are Green reductions of integral 1 dA
    for name, dom in builtins.items():
        q = dom.quadrature(24)
        raw = 0.5 * float((np.conj(q.points) * q.dz).imag.sum())
        assert abs(raw - geometry.area(dom)) < 1e-10 * abs(raw), name


def test_builtin_areas(builtins):
    for name, dom in builtins.items():
        assert abs(geometry.area(dom) - CLOSED_FORM_AREAS[name]) \
            < 1e-10 * CLOSED_FORM_AREAS[name], name


def test_circle_perimeter(disk, annulus05):
    assert abs(geometry.perimeter(disk) - 2 * math.pi) < 1e-10
    # annulus: both circles contribute
    assert abs(geometry.perimeter(annulus05) - 3 * math.pi) < 1e-10


def test_rect_perimeter_and_diameter(rect21):
    assert abs(geometry.perimeter(rect21) - 6.0) < 1e-12
    assert abs(rect21.diameter - math.sqrt(5.0)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(bx=st.floats(-3, 3), by=st.floats(-3, 3))
def test_contains_translation_covariance(bx, by):
    dom = geometry.ellipse(2.0, 1.0)
    b = complex(bx, by)
    shifted = geometry.translated(dom, b)
    for z in (0j, 1.2 + 0.3j, 0.1 - 0.8j, 2.5 + 0j, 1.0 + 1.5j):
        assert geometry.contains(shifted, z + b) == geometry.contains(dom, z)


def test_contains_rotation_covariance(square1):
    # rotating the vertex list and the query point together preserves
    # membership
    verts = [0.5 + 0.5j, -0.5 + 0.5j, -0.5 - 0.5j, 0.5 - 0.5j]
    pts = [0j, 0.3 + 0.1j, 0.49 - 0.2j, 0.7 + 0j, 0.6 + 0.6j]
    for theta in (0.3, 1.1, 2.0, -0.7):
        w = complex(math.cos(theta), math.sin(theta))
        rot = geometry.polygon([w * v for v in verts])
        for z in pts:
            assert geometry.contains(rot, w * z) == \
                geometry.contains(square1, z), (theta, z)


def test_winding_and_distance_square(square1):
    wind, dist = square1.winding_and_distance(
        np.array([0.2 + 0.1j, 0.8 + 0.0j, -0.49 + 0.49j]))
    assert list(wind) == [1, 0, 1]
    assert abs(dist[0] - 0.3) < 1e-12
    assert abs(dist[1] - 0.3) < 1e-12
    assert abs(dist[2] - 0.01) < 1e-12


def test_winding_annulus_hole(annulus05):
    wind, dist = annulus05.winding_and_distance(np.array([0j, 0.75 + 0j]))
    assert wind[0] == 0          # center lies in the hole
    assert wind[1] == 1
    # proxy polygons are inscribed, so distances are accurate to the sagitta
    assert abs(dist[0] - 0.5) < 5e-3
    assert abs(dist[1] - 0.25) < 5e-3


def test_interior_grid_covers_area(disk, ellipse21):
    for dom, exact in ((disk, math.pi), (ellipse21, 2 * math.pi)):
        for h in (0.2, 0.1, 0.05):
            pts, w = geometry.interior_grid(dom, h)
            assert w == pytest.approx(h * h)
            wind, _ = dom.winding_and_distance(pts)
            assert (wind == 1).all()
            # cell-count area is off by at most the boundary band ~ P*h
            assert abs(len(pts) * w - exact) < geometry.perimeter(dom) * h


def test_refined_preserves_metrics(square1, ellipse21):
    for dom in (square1, ellipse21):
        fine = geometry.refined(dom, 4)
        assert abs(geometry.area(fine) - geometry.area(dom)) < 1e-11
        assert abs(geometry.perimeter(fine) - geometry.perimeter(dom)) < 1e-11
        n_src = sum(len(c.pieces) for c in dom.components)
        n_fine = sum(len(c.pieces) for c in fine.components)
        assert n_fine == 4 * n_src


def test_scaled_and_translated_metrics(ellipse21):
    big = geometry.scaled(ellipse21, 2.0)
    assert abs(geometry.area(big) - 8 * math.pi) < 1e-9
    assert abs(geometry.perimeter(big) - 2 * geometry.perimeter(ellipse21)) \
        < 1e-9
    moved = geometry.translated(ellipse21, 3.0 - 1.0j)
    assert abs(geometry.area(moved) - 2 * math.pi) < 1e-9
    assert abs(moved.centroid - (3.0 - 1.0j)) < 1e-9


def test_outer_domain_drops_holes(annulus05):
    outer = geometry.outer_domain(annulus05)
    assert outer.holes == ()
    assert abs(geometry.area(outer) - math.pi) < 1e-10


def test_polygon_orientation_normalized():
    ccw = geometry.polygon([0, 1, 1 + 1j, 1j])
    cw = geometry.polygon([1j, 1 + 1j, 1, 0])
    assert ccw.outer.signed_area() > 0
    assert cw.outer.signed_area() > 0
    assert abs(geometry.area(ccw) - 1.0) < 1e-12
    assert abs(geometry.area(cw) - 1.0) < 1e-12


def test_validation_rejects_bad_boundaries():
    with pytest.raises(GeometryError):
        geometry.polygon([0, 1])                      # too few vertices
    with pytest.raises(GeometryError):
        geometry.polygon([0, 1, 1 + 1j, 1j - 1, 1 - 1j])   # bowtie
    with pytest.raises(GeometryError):
        # open chain: end does not meet start
        Domain(BoundaryComponent([Segment(0, 1), Segment(1, 1 + 1j)]))
    with pytest.raises(GeometryError):
        # clockwise outer component built by hand
        Domain(BoundaryComponent(
            [Segment(0, 1j), Segment(1j, 1 + 1j),
             Segment(1 + 1j, 1), Segment(1, 0)]))


def test_hole_marker_generated(annulus05):
    assert len(annulus05.hole_points) == 1
    wind, _ = annulus05.winding_and_distance(
        np.array([annulus05.hole_points[0]]))
    assert wind[0] == 0


def test_scaled_rejects_nonpositive(disk):
    with pytest.raises(GeometryError):
        geometry.scaled(disk, -1.0)
