"""Compare the compiled and pure-Python kernels, then time full solves.

Usage::

    python benchmarks/bench_kernels.py [--sizes 64,512,4096] [--repeat 5]

The compiled backend is skipped (with a note) if the extension is not built.
"""

from __future__ import annotations

import argparse
import importlib
import timeit

import numpy as np

from compactbvp import kernels
from compactbvp.problems import problem1, problem2
from compactbvp.solver import solve_bvp


def _backends():
    out = {"python": importlib.import_module("compactbvp._pykernels")}
    try:
        out["cython"] = importlib.import_module("compactbvp._ckernels")
    except ImportError:
        print("compiled extension not available; timing the Python fallback only")
    return out


def _best(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10**6:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    mods = _backends()
    print(f"{'kernel':<22}{'n':>7}" + "".join(f"{name:>14}" for name in mods) + f"{'speedup':>10}")
    for n in sizes:
        h = 1.0 / n
        u = rng.standard_normal(n + 1)
        p = rng.standard_normal(n + 1)
        m = n - 1
        lower, diag, upper, rhs = (np.full(m, 1 / 6), np.full(m, 2 / 3), np.full(m, 1 / 6), rng.standard_normal(m))
        cases = {
            "hermitian_solve": lambda mod: mod.hermitian_solve(u, h, 0.3, -0.2),
            "compact_derivatives": lambda mod: mod.compact_derivatives(u, p, h, 0.1, 0.2),
            "solve_tridiagonal": lambda mod: mod.solve_tridiagonal(lower, diag, upper, rhs),
        }
        for label, call in cases.items():
            times = {name: _best(lambda mod=mod: call(mod), repeat) for name, mod in mods.items()}
            cells = "".join(f"{times[name] * 1e6:>12.1f}us" for name in mods)
            speed = f"{times['python'] / times['cython']:>9.1f}x" if "cython" in times else f"{'-':>10}"
            print(f"{label:<22}{n:>7}{cells}{speed}")


def bench_solves(repeat):
    print(f"\nfull solve (backend in use: {kernels.BACKEND})")
    for name, factory, n in (("problem1", problem1, 128), ("problem2", problem2, 2048), ("problem2", problem2, 8192)):
        spec = factory().spec(n)
        t = min(timeit.repeat(lambda: solve_bvp(spec), number=1, repeat=repeat))
        print(f"  {name:<10} n={n:<6} {t * 1e3:9.1f} ms")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,512,4096", help="comma-separated grid sizes")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-solve", action="store_true", help="skip the full-solve timings")
    args = ap.parse_args(argv)
    bench_kernels([int(s) for s in args.sizes.split(",")], args.repeat)
    if not args.no_solve:
        bench_solves(args.repeat)


if __name__ == "__main__":
    main()
