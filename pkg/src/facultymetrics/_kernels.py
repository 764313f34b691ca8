"""Hot numeric kernels with two interchangeable backends.

The heavy inner loops of the pipeline live here: per-publication credit
weights over ragged author lists, segment sums that accumulate weighted
publication scores per researcher, and midrank computation for the rank
statistics. Each kernel has a numba ``@njit`` implementation and a pure
numpy one. The backend is picked once at import time:

* default: numba, when importable;
* ``FACULTYMETRICS_NO_NUMBA=1`` (or numba missing): pure numpy.

Both backends produce identical results (see tests/test_kernels.py);
``benchmarks/bench_kernels.py`` compares their speed.

Ragged layout convention: publications are described by an int64 array
``counts`` of author-list lengths; the weight arrays are flat, with
publication ``p`` occupying ``offsets[p]:offsets[p+1]`` where
``offsets = concatenate([[0], cumsum(counts)])``.

Positional-scheme modes (one uint8 per publication):
  0 = extra-mural split (first/last 30%, second/second-to-last 15%,
      remaining 10% shared by the middle authors)
  1 = intra-mural split (first/last 40%, remaining 20% shared)
  2 = equal split fallback (affiliation needed for the test is missing)

Role shares that coincide on one author (short lists) are summed and the
vector is renormalized to 1.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "average_ranks",
    "equal_credit_weights",
    "positional_credit_weights",
    "segment_sum",
    "set_thread_cap",
]

MODE_EXTRA = 0
MODE_INTRA = 1
MODE_EQUAL = 2


# ---------------------------------------------------------------------------
# Loop implementations (numba-compiled when the numba backend is active)
# ---------------------------------------------------------------------------

def _equal_weights_loop(counts):
    total = 0
    for p in range(counts.shape[0]):
        total += counts[p]
    out = np.empty(total, dtype=np.float64)
    k = 0
    for p in range(counts.shape[0]):
        n = counts[p]
        inv = 1.0 / n
        s = n * inv
        w = inv / s
        for _ in range(n):
            out[k] = w
            k += 1
    return out


def _positional_weights_loop(counts, modes):
    total = 0
    for p in range(counts.shape[0]):
        total += counts[p]
    out = np.zeros(total, dtype=np.float64)
    base = 0
    for p in range(counts.shape[0]):
        n = counts[p]
        mode = modes[p]
        if mode == MODE_EQUAL or n == 1:
            inv = 1.0 / n
            s = n * inv
            w = inv / s
            for i in range(n):
                out[base + i] = w
        elif mode == MODE_INTRA:
            out[base] += 0.40
            out[base + n - 1] += 0.40
            if n > 2:
                share = 0.20 / (n - 2)
                for i in range(1, n - 1):
                    out[base + i] += share
            else:
                # Interior share has no recipients: renormalize.
                s = 0.0
                for i in range(n):
                    s += out[base + i]
                for i in range(n):
                    out[base + i] /= s
        else:
            out[base] += 0.30
            out[base + n - 1] += 0.30
            out[base + 1] += 0.15
            out[base + n - 2] += 0.15
            if n > 4:
                share = 0.10 / (n - 4)
                for i in range(2, n - 2):
                    out[base + i] += share
            else:
                # Coinciding roles or an orphaned interior share: renormalize.
                s = 0.0
                for i in range(n):
                    s += out[base + i]
                for i in range(n):
                    out[base + i] /= s
        base += n
    return out


def _segment_sum_loop(codes, weights, n_groups):
    out = np.zeros(n_groups, dtype=np.float64)
    for i in range(codes.shape[0]):
        out[codes[i]] += weights[i]
    return out


def _average_ranks_loop(values):
    n = values.shape[0]
    order = np.argsort(values, kind="mergesort")
    out = np.empty(n, dtype=np.float64)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            out[order[k]] = rank
        i = j + 1
    return out


# ---------------------------------------------------------------------------
# Pure numpy implementations
# ---------------------------------------------------------------------------

def _equal_weights_numpy(counts):
    counts = np.asarray(counts, dtype=np.int64)
    inv = 1.0 / counts
    w = inv / (counts * inv)
    return np.repeat(w, counts)


def _positional_weights_numpy(counts, modes):
    counts = np.asarray(counts, dtype=np.int64)
    modes = np.asarray(modes, dtype=np.uint8)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    total = int(offsets[-1])
    pub = np.repeat(np.arange(counts.shape[0], dtype=np.int64), counts)
    pos = np.arange(total, dtype=np.int64) - offsets[pub]
    n = counts[pub]
    mode = modes[pub]

    out = np.zeros(total, dtype=np.float64)
    equal = (mode == MODE_EQUAL) | (n == 1)
    intra = (mode == MODE_INTRA) & ~equal
    extra = (mode == MODE_EXTRA) & ~equal

    # Additions mirror the loop kernel's order so both backends round alike.
    out[intra & (pos == 0)] += 0.40
    out[intra & (pos == n - 1)] += 0.40
    mid = intra & (n > 2) & (pos > 0) & (pos < n - 1)
    out[mid] += 0.20 / (n[mid] - 2)

    out[extra & (pos == 0)] += 0.30
    out[extra & (pos == n - 1)] += 0.30
    out[extra & (pos == 1)] += 0.15
    out[extra & (pos == n - 2)] += 0.15
    mid = extra & (n > 4) & (pos >= 2) & (pos <= n - 3)
    out[mid] += 0.10 / (n[mid] - 4)

    inv = 1.0 / n[equal]
    out[equal] = inv / (n[equal] * inv)

    if total:
        # Renormalize only the degenerate splits (coinciding roles or an
        # orphaned residual); regular splits carry exact role weights.
        sums = np.add.reduceat(out, offsets[:-1])
        pub_equal = (modes == MODE_EQUAL) | (counts == 1)
        norm = (
            ((modes == MODE_INTRA) & (counts < 3))
            | ((modes == MODE_EXTRA) & (counts < 5))
        ) & ~pub_equal
        scale = np.where(norm, sums, 1.0)
        out /= scale[pub]
    return out


def _segment_sum_numpy(codes, weights, n_groups):
    codes = np.asarray(codes, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    return np.bincount(codes, weights=weights, minlength=n_groups).astype(np.float64)


def _average_ranks_numpy(values):
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.float64)
    order = np.argsort(values, kind="mergesort")
    sv = values[order]
    boundary = np.empty(n, dtype=bool)
    boundary[0] = True
    boundary[1:] = sv[1:] != sv[:-1]
    run_id = np.cumsum(boundary) - 1
    run_counts = np.bincount(run_id)
    run_starts = np.cumsum(run_counts) - run_counts
    mid = run_starts + (run_counts - 1) / 2.0 + 1.0
    out = np.empty(n, dtype=np.float64)
    out[order] = mid[run_id]
    return out


# ---------------------------------------------------------------------------
# Backend selection
# ---------------------------------------------------------------------------

def _numba_disabled() -> bool:
    flag = os.environ.get("FACULTYMETRICS_NO_NUMBA", "").strip().lower()
    return flag in {"1", "true", "yes", "on"}


NUMPY_IMPLS = {
    "equal_credit_weights": _equal_weights_numpy,
    "positional_credit_weights": _positional_weights_numpy,
    "segment_sum": _segment_sum_numpy,
    "average_ranks": _average_ranks_numpy,
}

NUMBA_IMPLS: dict | None = None
BACKEND = "numpy"

if not _numba_disabled():
    try:
        from numba import njit

        NUMBA_IMPLS = {
            "equal_credit_weights": njit(cache=True)(_equal_weights_loop),
            "positional_credit_weights": njit(cache=True)(_positional_weights_loop),
            "segment_sum": njit(cache=True)(_segment_sum_loop),
            "average_ranks": njit(cache=True)(_average_ranks_loop),
        }
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - exercised only without numba
        NUMBA_IMPLS = None
        BACKEND = "numpy"

_ACTIVE = NUMBA_IMPLS if BACKEND == "numba" else NUMPY_IMPLS


def equal_credit_weights(counts: np.ndarray) -> np.ndarray:
    """Flat 1/n author weights, renormalized per publication."""
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    return _ACTIVE["equal_credit_weights"](counts)


def positional_credit_weights(counts: np.ndarray, modes: np.ndarray) -> np.ndarray:
    """Flat position-weighted author credit per publication."""
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    modes = np.ascontiguousarray(modes, dtype=np.uint8)
    return _ACTIVE["positional_credit_weights"](counts, modes)


def segment_sum(codes: np.ndarray, weights: np.ndarray, n_groups: int) -> np.ndarray:
    """Sum ``weights`` into ``n_groups`` buckets addressed by ``codes``."""
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    return _ACTIVE["segment_sum"](codes, weights, int(n_groups))


def average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ascending ranks with ties replaced by their midrank."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    return _ACTIVE["average_ranks"](values)


def set_thread_cap(n_threads: int) -> None:
    """Cap worker threads; honors FACULTYMETRICS_THREADS for the CLI."""
    if n_threads < 1:
        raise ValueError("thread cap must be >= 1")
    if BACKEND == "numba":
        import numba

        numba.set_num_threads(min(n_threads, numba.config.NUMBA_NUM_THREADS))
