"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--sweep]

Times each kernel on representative sizes, then (with --sweep) the full
121-pair verification sweep under each backend in a fresh interpreter.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qftschmidt import kernels
from qftschmidt.qft import enumerate_classes, a_matrix, b_matrix, closed_form_coefficient
from qftschmidt.linalg import BipartiteDims


def cases(n1, n2):
    rng = np.random.default_rng(0)
    n = n1 * n2
    f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    dims = BipartiteDims(n1, n2)
    classes = enumerate_classes(dims)
    coeffs = np.array([closed_form_coefficient(c, dims) for c in classes])
    lefts = np.stack([a_matrix(c, dims) for c in classes])
    rights = np.stack([b_matrix(c, dims) for c in classes])
    overlap = np.eye(n2 * n2, dtype=np.int64)
    return {
        "realign": lambda k: k.realign(f, n1, n1, n2, n2),
        "rho_closed": lambda k: k.rho_closed(n1, n2),
        "lattice_mismatches": lambda k: k.lattice_mismatches(n1, n2, overlap),
        "weighted_kron_sum": lambda k: k.weighted_kron_sum(coeffs, lefts, rights),
    }


def bench_kernels(repeat):
    names = sorted(kernels.BACKENDS)
    print(f"{'kernel':<20} {'dims':<8} " + " ".join(f"{n + ' [ms]':>14}" for n in names) + f" {'ratio':>8}")
    for n1, n2 in [(4, 6), (8, 12), (12, 16)]:
        for name, fn in cases(n1, n2).items():
            times = []
            for b in names:
                impl = kernels.BACKENDS[b]
                number = 5
                t = min(timeit.repeat(lambda: fn(impl), number=number, repeat=repeat)) / number
                times.append(t * 1e3)
            ratio = times[names.index("python")] / times[0] if len(times) > 1 else 1.0
            print(f"{name:<20} {f'{n1}x{n2}':<8} " + " ".join(f"{t:>14.3f}" for t in times) + f" {ratio:>8.2f}")


def bench_sweep():
    for forced in ("0", "1"):
        env = dict(os.environ, QFTSCHMIDT_PURE_PYTHON=forced)
        code = (
            "import time; from qftschmidt import kernels; from qftschmidt.cli import run_sweep;"
            "t = time.perf_counter(); out = run_sweep(12, 12);"
            "print(kernels.BACKEND, f'{time.perf_counter() - t:.3f}s', all(o.passed for o in out))"
        )
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
        print("sweep 2..12:", res.stdout.strip() or res.stderr.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--sweep", action="store_true")
    args = parser.parse_args()
    if "cython" not in kernels.BACKENDS:
        print("compiled extension not built; only the numpy backend is available")
    bench_kernels(args.repeat)
    if args.sweep:
        bench_sweep()


if __name__ == "__main__":
    main()
