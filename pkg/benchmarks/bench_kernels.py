"""Compare the compiled and pure-Python random-number kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends produce bit-identical output; the script checks that before
timing.  Prints one line per kernel with the best-of-N wall time for each
backend and the speedup.
"""

import argparse
import timeit

import numpy as np

from cqedkit.rng import BACKEND, backends


def cases():
    probs_trace = 0.95 * np.exp(-np.linspace(0, 5, 50)) + 0.03
    probs_many = np.tile(probs_trace, 200)
    return {
        "uniform_block n=1e6": lambda k: k.uniform_block(42, 0, 1_000_000),
        "splitmix64_block n=1e6": lambda k: k.splitmix64_block(42, 0, 1_000_000),
        "binomial_counts 50 pts x 1000 shots": lambda k: k.binomial_counts(42, 0, probs_trace, 1000),
        "binomial_counts 10k pts x 1000 shots": lambda k: k.binomial_counts(42, 0, probs_many, 1000),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    impls = backends()
    print(f"default backend: {BACKEND}; available: {', '.join(sorted(impls))}")
    if "cython" not in impls:
        print("compiled kernel not built; nothing to compare")
        return

    for name, fn in cases().items():
        ref = fn(impls["python"])
        np.testing.assert_array_equal(fn(impls["cython"]), ref)
        best = {}
        for label in ("cython", "python"):
            impl = impls[label]
            best[label] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
        print(
            f"{name:40s} cython {1e3 * best['cython']:9.3f} ms   python {1e3 * best['python']:9.3f} ms"
            f"   speedup {best['python'] / best['cython']:6.1f}x"
        )


if __name__ == "__main__":
    main()
