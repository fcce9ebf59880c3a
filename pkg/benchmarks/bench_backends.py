"""Time the compiled and numpy kernel backends on the operations the tests lean on.

    python benchmarks/bench_backends.py [--repeat 5] [--n 2000]

Each row reports the best of ``--repeat`` runs. The last block times a full
specification test with each backend forced through the environment.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from credal_testing._kernels import available_backends


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(n, d, repeat):
    rng = np.random.default_rng(0)
    X, Y = rng.normal(size=(n, d)), rng.normal(size=(n, d))
    u = rng.random(n)
    w = rng.dirichlet(np.ones(5))
    cap = np.full(5, n, dtype=np.int64)
    cases = {
        "gaussian_gram": lambda m: m.gaussian_gram(X, Y, 3.0),
        "gram_mean": lambda m: m.gram_mean(X, Y, 3.0),
        "gram_mean (same array)": lambda m: m.gram_mean(X, X, 3.0),
        "h_matrix": lambda m: m.h_matrix(X, Y, 3.0),
        "draw_components": lambda m: m.draw_components(u, w, cap),
    }
    backends = available_backends()
    names = sorted(backends)
    print(f"{'operation':<24}" + "".join(f"{k:>12}" for k in names) + f"{'speedup':>10}")
    for label, fn in cases.items():
        times = {k: best(lambda: fn(backends[k]), repeat) for k in names}
        ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:<24}" + "".join(f"{times[k] * 1e3:>10.2f}ms" for k in names) + f"{ratio:>9.2f}x")


FULL_TEST = """
import timeit
from credal_testing import CredalTestConfig, ScenarioSpec, build_scenario, specification_test
Sx, Sy = build_scenario(ScenarioSpec("specification", "null", n={n}, seed=1))
cfg = CredalTestConfig(seed=1)
print(min(timeit.repeat(lambda: specification_test(Sx, Sy, cfg), number=1, repeat={repeat})))
"""


def full_test_rows(n, repeat):
    print(f"\nspecification test, n={n} per extreme point")
    for name in sorted(available_backends()):
        env = dict(os.environ, CREDAL_TESTING_BACKEND=name)
        out = subprocess.run([sys.executable, "-c", FULL_TEST.format(n=n, repeat=repeat)],
                             env=env, capture_output=True, text=True, check=True)
        print(f"  {name:<8} {float(out.stdout) * 1e3:10.1f}ms")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--d", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if "cython" not in available_backends():
        print("compiled backend not built; only the numpy fallback is timed")
    kernel_rows(args.n, args.d, args.repeat)
    full_test_rows(args.n, args.repeat)


if __name__ == "__main__":
    main()
