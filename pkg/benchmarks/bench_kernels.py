"""Timing comparison of the compiled and pure numpy kernel backends.

Run as a script:

    python3 benchmarks/bench_kernels.py [--repeats N]

Each kernel entry point is timed on identical inputs through both
backends; a final row times a full divergence minimization. Numbers are
microseconds per call (milliseconds for the optimizer row).
"""

import argparse
import time

import numpy as np

from entcalc import optimizer, states
from entcalc._kernel import fallback

try:
    from entcalc._kernel import _core
except ImportError:
    _core = None


def timed(fn, repeats):
    # one warm-up call, then an average over the batch
    fn()
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=2000)
    args = parser.parse_args()

    if _core is None:
        print("compiled extension not available; nothing to compare")
        return 1

    rng = np.random.default_rng(0)
    x = rng.uniform(0.2, 1.2, size=fallback.N_ANGLES)
    sigma = states.werner(0.8).matrix
    vals, vecs = np.linalg.eigh(sigma)
    sqrt_sigma = vecs @ np.diag(np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    h16 = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    h16 = (h16 + h16.conj().T) / 2
    h4 = np.ascontiguousarray(h16[:4, :4])

    rows = [
        ("separable_density", lambda m: (lambda: m.separable_density(x))),
        ("product_terms", lambda m: (lambda: m.product_terms(x))),
        ("ree_cross", lambda m: (lambda: m.ree_cross(x, sigma, 1e-12))),
        ("ree_cross_and_grad", lambda m: (lambda: m.ree_cross_and_grad(x, sigma, 1e-12))),
        ("bures_value", lambda m: (lambda: m.bures_value(x, sqrt_sigma))),
        ("eigh 4x4", lambda m: (lambda: m.eigh(h4))),
        ("eigh 16x16", lambda m: (lambda: m.eigh(h16))),
    ]

    print(f"{'kernel':<22} {'python us':>12} {'compiled us':>12} {'speedup':>9}")
    for name, make in rows:
        t_py = timed(make(fallback), args.repeats) * 1e6
        t_c = timed(make(_core), args.repeats) * 1e6
        print(f"{name:<22} {t_py:>12.1f} {t_c:>12.1f} {t_py / t_c:>8.1f}x")

    # end to end: the minimizer goes through whichever backend is active
    config = optimizer.OptimizerConfig(restarts=2, seed=0)
    target = states.werner(0.8)
    t_min = timed(lambda: optimizer.minimize(target, config), 3) * 1e3
    print(f"{'minimize (active)':<22} {t_min:>25.1f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
