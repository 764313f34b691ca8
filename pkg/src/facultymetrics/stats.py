"""Rank statistics: Spearman correlation with ties, correlation matrix.

Spearman is computed as the Pearson correlation of midranks (tied values
share the average of their positions). The popular 6*sum(d^2) shortcut
is wrong under ties, and share-style indicators tie heavily, so it is
not used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .indicators import INDICATOR_FIELDS, EffectivenessReport

MATRIX_LABELS = INDICATOR_FIELDS + ("productivity",)


def _complete_pairs(x: Sequence, y: Sequence) -> tuple[np.ndarray, np.ndarray]:
    if len(x) != len(y):
        raise ValueError("series must have equal length")
    xs, ys = [], []
    for a, b in zip(x, y):
        if a is None or b is None:
            continue
        a, b = float(a), float(b)
        if math.isnan(a) or math.isnan(b):
            continue
        xs.append(a)
        ys.append(b)
    return np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64)


def spearman(x: Sequence, y: Sequence) -> float | None:
    """Rank correlation in [-1, 1]; None when undefined.

    Pairs with a missing value (None/NaN) on either side are dropped.
    Undefined cases: fewer than 3 complete pairs, or zero rank variance
    on either side. Strictly monotone tie-free inputs give exactly +/-1.
    """
    xs, ys = _complete_pairs(x, y)
    if xs.size < 3:
        return None
    rx = _kernels.average_ranks(xs)
    ry = _kernels.average_ranks(ys)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        return None
    sxy = float(np.dot(dx, dy))
    # Identical or mirrored rank vectors: return the exact endpoint rather
    # than round-tripping through sqrt.
    if sxy == sxx == syy:
        return 1.0
    if sxx == syy and sxy == -sxx:
        return -1.0
    return sxy / math.sqrt(sxx * syy)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Lower-triangular Spearman matrix over the indicator series plus
    university productivity, with the pairwise sample size per cell."""

    labels: tuple[str, ...]
    rho: Mapping[tuple[int, int], float | None]
    n: Mapping[tuple[int, int], int]

    def cell(self, row_label: str, col_label: str) -> float | None:
        i = self.labels.index(row_label)
        j = self.labels.index(col_label)
        if i <= j:
            raise KeyError("matrix is lower-triangular; row must come after column")
        return self.rho[(i, j)]


def correlation_matrix(
    reports: Sequence[EffectivenessReport],
    productivities: Mapping[str, float],
) -> CorrelationMatrix:
    """Pairwise Spearman over the eligible universities' indicator values
    and productivity. Missing values are dropped pairwise per cell."""
    series: dict[str, list[float | None]] = {name: [] for name in MATRIX_LABELS}
    for report in reports:
        for name in INDICATOR_FIELDS:
            series[name].append(report.value(name))
        series["productivity"].append(productivities.get(report.university_id))

    rho: dict[tuple[int, int], float | None] = {}
    n: dict[tuple[int, int], int] = {}
    for i in range(1, len(MATRIX_LABELS)):
        for j in range(i):
            x = series[MATRIX_LABELS[i]]
            y = series[MATRIX_LABELS[j]]
            xs, _ = _complete_pairs(x, y)
            rho[(i, j)] = spearman(x, y)
            n[(i, j)] = int(xs.size)
    return CorrelationMatrix(tuple(MATRIX_LABELS), rho, n)
