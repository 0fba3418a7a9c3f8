#!/usr/bin/env python3
"""Compare the compiled kernel backend against the numpy fallback.

Times every hot kernel plus a composed evolution step at several grid sizes
and prints the speedups. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--sizes 128,256,512] [--repeats 20]
"""
import argparse
import time

import numpy as np

from chanvese import sdf_circle
from chanvese._kernels import available_backends


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def composed_step(k, img, phi, u, v):
    """The per-iteration kernel work of the solver, composed from one backend."""
    rhs = (img - u) ** 2 * k.upwind_norm(phi, 1, 1.0, 1.0, False)
    rhs -= (img - v) ** 2 * k.upwind_norm(phi, -1, 1.0, 1.0, False)
    rhs -= 0.5 * k.curvature(phi, 1.0, 1.0, 1e-8, 3.0, False) * k.grad_norm(phi, 1.0, 1.0, False)
    return phi + 0.2 * rhs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="128,256,512")
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()

    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; run 'pip install -e . --no-build-isolation'")
        print("timing the pure backend only\n")

    sizes = [int(s) for s in args.sizes.split(",")]
    header = f"{'kernel':<16}{'n':>6}" + "".join(f"{name:>12}" for name in backends) + (
        f"{'speedup':>10}" if len(backends) > 1 else ""
    )
    print(header)
    print("-" * len(header))

    for n in sizes:
        phi = np.ascontiguousarray(sdf_circle(n, n, n / 2.0, n / 2.0, 0.23 * n))
        img = (phi < 0).astype(np.float64)
        cases = {
            "upwind_norm": lambda k: k.upwind_norm(phi, 1, 1.0, 1.0, False),
            "grad_norm": lambda k: k.grad_norm(phi, 1.0, 1.0, False),
            "curvature(band)": lambda k: k.curvature(phi, 1.0, 1.0, 1e-8, 3.0, False),
            "sussman_sweep": lambda k: k.sussman_sweep(phi, 0.5, 1.0, 1.0, False),
            "solver step": lambda k: composed_step(k, img, phi, 1.0, 0.0),
        }
        for label, case in cases.items():
            times = {
                name: best_of(lambda k=mod: case(k), args.repeats)
                for name, mod in backends.items()
            }
            row = f"{label:<16}{n:>6}" + "".join(
                f"{times[name] * 1e3:>10.3f}ms" for name in backends
            )
            if "cython" in times:
                row += f"{times['pure'] / times['cython']:>9.1f}x"
            print(row)
        print()

    if "cython" in backends:
        a = composed_step(backends["pure"], img, phi, 1.0, 0.0)
        b = composed_step(backends["cython"], img, phi, 1.0, 0.0)
        print("composed step identical across backends:", bool(np.array_equal(a, b)))


if __name__ == "__main__":
    main()
