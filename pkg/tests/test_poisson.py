"""Cut-cell Dirichlet solves, torsional rigidity, and the ground mode."""

import math

import numpy as np
import pytest

from zbarfit import geometry, poisson
from zbarfit.errors import GeometryError

from oracles import j0_first_zero_bisection, j0_series, square_rigidity_series


def test_quadratic_solutions_are_exact(disk, ellipse21):
    # the arm-fraction stencil reproduces quadratics, so the only error
    # left in these solves is the linear-solver tolerance
    cases = [
        (disk, lambda z: 0.5 * (1.0 - np.abs(z) ** 2)),
        (ellipse21, lambda z: 0.8 * (1.0 - z.real ** 2 / 4.0 - z.imag ** 2)),
    ]
    for dom, exact in cases:
        grid = poisson.build_grid(dom, dom.diameter / 64)
        u = poisson.solve_dirichlet(grid, np.full(grid.n, 2.0))
        assert np.abs(u - exact(grid.points)).max() < 1e-9


def test_solve_residual_meets_tolerance(square1):
    grid = poisson.build_grid(square1, 1.0 / 48)
    b = np.full(grid.n, 2.0)
    u = poisson.solve_dirichlet(grid, b)
    res = np.linalg.norm(grid.apply(u) - b)
    assert res <= 10 * poisson.RESIDUAL_TOL * np.linalg.norm(b)


def test_maximum_principle(square1, annulus05):
    # -Lap u = 2 with zero boundary data is positive throughout
    for dom in (square1, annulus05):
        grid = poisson.build_grid(dom, dom.diameter / 64)
        u = poisson.solve_dirichlet(grid, np.full(grid.n, 2.0))
        assert (u > 0).all()


def test_solver_matches_dense_solve(square1):
    grid = poisson.build_grid(square1, 1.0 / 24)
    n = grid.n
    # the operator applies as diag*x - sum_a coef[:,a] * x[idx[:,a]]
    dense = np.zeros((n, n))
    dense[np.arange(n), np.arange(n)] = grid.diag
    for k in range(n):
        for a in range(4):
            c = grid.nbr_coef[k, a]
            if c != 0.0:
                dense[k, grid.nbr_idx[k, a]] -= c
    rng = np.random.default_rng(0)
    b = rng.standard_normal(n)
    u = poisson.solve_dirichlet(grid, b)
    want = np.linalg.solve(dense, b)
    assert np.abs(u - want).max() < 1e-8 * (1 + np.abs(want).max())


def test_rigidity_error_estimate_and_convergence(disk):
    exact = math.pi / 2
    r = poisson.torsional_rigidity(disk, 2.0 / 32)
    assert abs(r.rho - exact) <= r.estimated_error
    assert abs(r.rho - r.rho_rayleigh) <= r.estimated_error
    # successive single solves converge at the expected second order
    solves = [poisson._rigidity_single(disk, 2.0 / n)[0]
              for n in (32, 64, 128)]
    ratio = (solves[0] - solves[1]) / (solves[1] - solves[2])
    assert 3.5 < ratio < 4.8


def test_energy_identity(disk):
    # integration by parts: ||grad u||^2 = 2 integral u = rho
    r = poisson.torsional_rigidity(disk, 2.0 / 64)
    assert abs(r.gradient_energy - r.rho) < 5e-3 * r.rho


def test_rigidity_known_values(square1, ellipse21):
    rs = poisson.torsional_rigidity(square1, 1.0 / 64)
    assert abs(rs.rho - square_rigidity_series()) <= rs.estimated_error
    re_ = poisson.torsional_rigidity(ellipse21, 4.0 / 128)
    assert abs(re_.rho - 8 * math.pi / 5) <= re_.estimated_error


def test_rigidity_monotone_in_domain():
    small = poisson.torsional_rigidity(geometry.disk(0.9), 1.8 / 64)
    big = poisson.torsional_rigidity(geometry.disk(1.0), 2.0 / 64)
    assert small.rho < big.rho
    # and the exact scaling rho ~ r^4 is visible
    assert abs(small.rho / big.rho - 0.9 ** 4) < 1e-3


def test_ground_eigenvalue_square(square1):
    lam = poisson.dirichlet_ground_eigenvalue(square1, 1.0 / 64)
    assert abs(lam - 2 * math.pi ** 2) < 1e-3 * 2 * math.pi ** 2


def test_grid_spacing_validation(disk):
    with pytest.raises(GeometryError):
        poisson.build_grid(disk, 0.0)
    with pytest.raises(GeometryError):
        poisson.build_grid(disk, disk.diameter / 16)   # too coarse


def test_bessel_j0_against_series():
    xs = np.linspace(0.0, 10.0, 41)
    for x in xs:
        assert abs(poisson.bessel_j0(x) - j0_series(x)) < 1e-12


def test_bessel_j0_first_zero():
    got = poisson.bessel_j0_first_zero()
    assert abs(got - j0_first_zero_bisection()) < 1e-12
    assert abs(poisson.bessel_j0(got)) < 1e-13


def test_field_csv(tmp_path, disk):
    grid = poisson.build_grid(disk, 2.0 / 32)
    u = poisson.solve_dirichlet(grid, np.full(grid.n, 2.0))
    path = tmp_path / "u.csv"
    poisson.field_csv(grid, u, path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "i,j,x,y,u"
    assert len(rows) == 1 + grid.n
