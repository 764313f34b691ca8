#!/usr/bin/env python3
"""Compare the numba and pure-numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Sizes mirror the large-corpus case (hundreds of thousands of author
slots). The first numba call per kernel includes JIT compilation and is
excluded via a warmup.
"""

import argparse
import timeit

import numpy as np

from facultymetrics import _kernels


def make_inputs(n_pubs, rng):
    counts = rng.integers(1, 13, size=n_pubs).astype(np.int64)
    modes = rng.integers(0, 3, size=n_pubs).astype(np.uint8)
    total = int(counts.sum())
    codes = rng.integers(0, max(n_pubs // 8, 1), size=total).astype(np.int64)
    weights = rng.random(total)
    values = rng.integers(0, 50, size=n_pubs).astype(np.float64)
    return counts, modes, codes, weights, values


def bench(repeat):
    rng = np.random.default_rng(0)
    if _kernels.NUMBA_IMPLS is None:
        print("numba unavailable; nothing to compare")
        return
    for n_pubs in (10_000, 100_000, 400_000):
        counts, modes, codes, weights, values = make_inputs(n_pubs, rng)
        n_groups = max(n_pubs // 8, 1)
        cases = {
            "equal_credit_weights": (lambda impl: impl(counts),),
            "positional_credit_weights": (lambda impl: impl(counts, modes),),
            "segment_sum": (lambda impl: impl(codes, weights, n_groups),),
            "average_ranks": (lambda impl: impl(values),),
        }
        print(f"\nn_pubs={n_pubs} (slots={counts.sum()}), best of {repeat}:")
        for name, (call,) in cases.items():
            row = [f"  {name:<28}"]
            for backend, impls in (("numpy", _kernels.NUMPY_IMPLS),
                                   ("numba", _kernels.NUMBA_IMPLS)):
                impl = impls[name]
                call(impl)  # warmup (JIT compile on the numba side)
                t = min(timeit.repeat(lambda: call(impl), number=3, repeat=repeat)) / 3
                row.append(f"{backend} {t * 1e3:8.2f} ms")
            print("  ".join(row))


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"active backend: {_kernels.BACKEND}")
    bench(args.repeat)
