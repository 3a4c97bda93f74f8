"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Reports the best wall time per call for the Bessel and Legendre kernels at
a few problem sizes, and for an end-to-end ``verify`` run under each backend.
"""
import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from graddiv import _pykernels

try:
    from graddiv import _ckernels
except ImportError:
    _ckernels = None


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for size in (1_000, 100_000):
        z = rng.uniform(0, 60, size)
        theta = rng.uniform(0, np.pi, size)
        x, s = np.cos(theta), np.sin(theta)
        for n in (2, 20, 60):
            cases = [
                ("bessel", lambda mod: mod.sph_bessel_triplet(n, z)),
                ("legendre", lambda mod: mod.legendre_triplet(n, n // 2, x, s)),
            ]
            for name, call in cases:
                t_py = best(lambda: call(_pykernels), repeat)
                t_c = best(lambda: call(_ckernels), repeat) if _ckernels else float("nan")
                rows.append((name, size, n, t_py, t_c))
    return rows


def bench_end_to_end():
    cmd = [sys.executable, "-m", "graddiv", "verify", "--nmax", "4", "--mmax", "4", "--out", os.devnull]
    out = {}
    for label, extra in (("numpy", {"GRADDIV_PURE_PYTHON": "1"}), ("cython", {})):
        env = {k: v for k, v in os.environ.items() if k != "GRADDIV_PURE_PYTHON"}
        env.update(extra)
        start = time.perf_counter()
        subprocess.run(cmd, env=env, check=True, stdout=subprocess.DEVNULL)
        out[label] = time.perf_counter() - start
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-e2e", action="store_true")
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not available; only the numpy backend is timed")
    print(f"{'kernel':<9}{'points':>8}{'n':>4}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}")
    for name, size, n, t_py, t_c in bench_kernels(args.repeat):
        print(f"{name:<9}{size:>8}{n:>4}{1e3 * t_py:>12.3f}{1e3 * t_c:>13.3f}{t_py / t_c:>9.1f}")
    if not args.skip_e2e:
        e2e = bench_end_to_end()
        print(f"verify --nmax 4 --mmax 4: numpy {e2e['numpy']:.2f} s, cython {e2e['cython']:.2f} s")


if __name__ == "__main__":
    main()
