"""Compiled kernels against the NumPy fallback on the same inputs."""

import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zbarfit import _kernels
from zbarfit._kernels import _purepy

_core = pytest.importorskip(
    "zbarfit._kernels._core", reason="compiled core not built")


def ring_polygon(n=17, seed=5):
    rng = np.random.default_rng(seed)
    th = np.sort(rng.uniform(0, 2 * np.pi, n))
    r = rng.uniform(0.5, 1.5, n)
    v = r * np.exp(1j * th)
    w = np.roll(v, -1)
    return v, w


def test_backend_selected():
    assert _kernels.backend_name() == "compiled"
    assert _core.BACKEND == "compiled"
    assert _purepy.BACKEND == "purepy"


def test_purepy_forced_in_subprocess():
    out = subprocess.run(
        [sys.executable, "-c",
         "from zbarfit import _kernels; print(_kernels.backend_name())"],
        env={"ZBARFIT_PURE": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True, cwd="/")
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "purepy"


def test_winding_parity_random_points():
    v, w = ring_polygon()
    rng = np.random.default_rng(0)
    z = rng.uniform(-2, 2, 400) + 1j * rng.uniform(-2, 2, 400)
    args = (np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag),
            np.ascontiguousarray(v.real), np.ascontiguousarray(v.imag),
            np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag))
    wind_c, dist_c = _core.winding_mindist(*args)
    wind_p, dist_p = _purepy.winding_mindist(*args)
    assert (wind_c == wind_p).all()
    assert np.abs(dist_c - dist_p).max() < 1e-12


def test_winding_known_values():
    # unit square, counterclockwise
    v = np.array([0.5 + 0.5j, -0.5 + 0.5j, -0.5 - 0.5j, 0.5 - 0.5j])
    w = np.roll(v, -1)
    z = np.array([0j, 0.75 + 0j, 0.4 + 0.4j])
    for impl in (_core, _purepy):
        wind, dist = impl.winding_mindist(
            z.real.copy(), z.imag.copy(), v.real.copy(), v.imag.copy(),
            w.real.copy(), w.imag.copy())
        assert list(wind) == [1, 0, 1]
        assert abs(dist[0] - 0.5) < 1e-15
        assert abs(dist[1] - 0.25) < 1e-15
        assert abs(dist[2] - 0.1) < 1e-15


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_sw_matvec_parity(seed):
    rng = np.random.default_rng(seed)
    n = rng.integers(1, 40)
    x = rng.standard_normal(n)
    diag = rng.standard_normal(n)
    idx = rng.integers(0, n, (n, 4))
    coef = rng.standard_normal((n, 4))
    got_c = _core.sw_matvec(x, diag, idx, coef)
    got_p = _purepy.sw_matvec(x, diag, idx, coef)
    want = diag * x - (coef * x[idx]).sum(axis=1)
    assert np.abs(got_c - want).max() < 1e-12 * (1 + np.abs(want).max())
    assert np.abs(got_c - got_p).max() < 1e-12 * (1 + np.abs(want).max())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_cauchy_sum_parity(seed):
    rng = np.random.default_rng(seed)
    nt, nn = rng.integers(1, 30), rng.integers(1, 50)
    targets = rng.standard_normal(nt) + 1j * rng.standard_normal(nt)
    nodes = 10.0 + rng.standard_normal(nn) + 1j * rng.standard_normal(nn)
    weights = rng.standard_normal(nn) + 1j * rng.standard_normal(nn)
    got_c = _core.cauchy_sum(targets, nodes, weights)
    got_p = _purepy.cauchy_sum(targets, nodes, weights)
    want = (weights[None, :] / (nodes[None, :] - targets[:, None])).sum(1)
    scale = 1 + np.abs(want).max()
    assert np.abs(got_c - want).max() < 1e-12 * scale
    assert np.abs(got_c - got_p).max() < 1e-12 * scale


def test_cauchy_sum_empty_targets():
    z = np.zeros(0, dtype=np.complex128)
    nodes = np.array([1.0 + 0j])
    weights = np.array([2.0 + 0j])
    for impl in (_core, _purepy):
        out = impl.cauchy_sum(z, nodes, weights)
        assert out.shape == (0,)
