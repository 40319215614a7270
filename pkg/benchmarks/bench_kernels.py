"""Compare the compiled kernels against the numpy fallbacks.

Times the three hot paths (point location, operator apply, Cauchy panel
sums) on workloads shaped like the ones the solvers generate, checks both
implementations agree, and reports one end-to-end rigidity solve on the
backend active in this process.

    python3 benchmarks/bench_kernels.py
    ZBARFIT_PURE=1 python3 benchmarks/bench_kernels.py   # fallback end-to-end
"""

import argparse
import time

import numpy as np

from zbarfit import geometry, poisson
from zbarfit._kernels import _purepy, backend_name

try:
    from zbarfit._kernels import _core
except ImportError:
    _core = None


def best_of(fn, repeat=5):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(rng):
    # point location: fine-grid classification against a traced-size polygon
    theta = np.sort(rng.uniform(0.0, 2.0 * np.pi, 1024))
    r = 1.0 + 0.2 * np.cos(5 * theta)
    vx, vy = r * np.cos(theta), r * np.sin(theta)
    px = rng.uniform(-1.3, 1.3, 100_000)
    py = rng.uniform(-1.3, 1.3, 100_000)
    wind_args = (px, py, vx, vy, np.roll(vx, -1), np.roll(vy, -1))

    # operator apply at the size of a diameter/512 disk grid
    n = 500_000
    x = rng.standard_normal(n)
    diag = 4.0 + rng.uniform(0.0, 1.0, n)
    idx = rng.integers(0, n, (n, 4))
    coef = rng.uniform(0.5, 1.0, (n, 4))
    coef[rng.uniform(size=(n, 4)) < 0.1] = 0.0
    sw_args = (x, diag, idx, coef)

    # Cauchy sums: one norm-grid row block against a full boundary panel set
    targets = rng.standard_normal(50_000) + 1j * rng.standard_normal(50_000)
    nodes = 4.0 + rng.standard_normal(1_000) + 1j * rng.standard_normal(1_000)
    weights = rng.standard_normal(1_000) + 1j * rng.standard_normal(1_000)
    cauchy_args = (targets, nodes, weights)
    return wind_args, sw_args, cauchy_args


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="timing repetitions per kernel (best is kept)")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    wind_args, sw_args, cauchy_args = workloads(rng)
    rows = []
    for name, fargs in (("winding_mindist", wind_args),
                        ("sw_matvec", sw_args),
                        ("cauchy_sum", cauchy_args)):
        t_pure = best_of(lambda: getattr(_purepy, name)(*fargs), args.repeat)
        if _core is not None:
            t_comp = best_of(lambda: getattr(_core, name)(*fargs),
                             args.repeat)
            ref = getattr(_purepy, name)(*fargs)
            out = getattr(_core, name)(*fargs)
            if isinstance(ref, tuple):
                for a, b in zip(ref, out):
                    assert np.allclose(a, b, atol=1e-12), name
            else:
                assert np.allclose(ref, out, atol=1e-12), name
        else:
            t_comp = float("nan")
        rows.append((name, t_comp, t_pure))

    print(f"{'kernel':<18}{'compiled':>12}{'purepy':>12}{'speedup':>10}")
    for name, t_comp, t_pure in rows:
        speed = t_pure / t_comp if t_comp == t_comp else float("nan")
        print(f"{name:<18}{t_comp * 1e3:>10.2f}ms{t_pure * 1e3:>10.2f}ms"
              f"{speed:>9.1f}x")

    dom = geometry.disk()
    t0 = time.perf_counter()
    rig = poisson.torsional_rigidity(dom, 2.0 / 128)
    dt = time.perf_counter() - t0
    print(f"\nend-to-end rigidity solve (disk, h = 2/128) on "
          f"'{backend_name()}': {dt:.2f}s, rho = {rig.rho:.8f}")


if __name__ == "__main__":
    main()
