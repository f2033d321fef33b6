"""Rank features by information gain against the class labels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError
from .features import FeatureMatrix, FeatureSpec

MAX_DISTINCT = 32
N_BINS = 10


@dataclass(frozen=True)
class RankedFeature:
    spec: FeatureSpec
    gain: float
    rank: int


def _entropy_bits(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    nz = counts[counts > 0]
    return float(math.log2(total) - (nz * np.log2(nz)).sum() / total)


def discretize(column: np.ndarray) -> np.ndarray:
    """Integer codes for a numeric column.

    Distinct values become their own categories up to MAX_DISTINCT; wider
    columns fall back to equal-frequency bins whose edges sit at the
    ceil(i*N/10)-th order statistics (duplicate edges merged).
    """
    uniq = np.unique(column)
    if uniq.size <= MAX_DISTINCT:
        return np.searchsorted(uniq, column)
    ordered = np.sort(column)
    n = column.size
    edge_positions = [math.ceil(i * n / N_BINS) - 1 for i in range(1, N_BINS)]
    edges = np.unique(ordered[edge_positions])
    return np.searchsorted(edges, column, side="left")


def information_gain(column, labels) -> float:
    """Entropy of the labels minus mean conditional entropy, in bits."""
    column = np.asarray(column, dtype=float)
    labels = np.asarray(labels)
    if column.ndim != 1 or labels.ndim != 1 or column.size != labels.size:
        raise DimensionError(
            f"column ({column.size}) and labels ({labels.size}) lengths differ")
    if column.size == 0:
        raise DimensionError("cannot score an empty column")
    n = column.size
    _, y = np.unique(labels, return_inverse=True)
    n_classes = y.max() + 1
    codes = discretize(column)
    n_values = codes.max() + 1
    joint = np.bincount(codes * n_classes + y,
                        minlength=n_values * n_classes).reshape(n_values, n_classes)
    class_counts = joint.sum(axis=0)
    h_labels = _entropy_bits(class_counts)
    conditional = 0.0
    for value_counts in joint:
        weight = value_counts.sum() / n
        if weight:
            conditional += weight * _entropy_bits(value_counts)
    return max(0.0, h_labels - conditional)


def rank_features(matrix: FeatureMatrix) -> list[RankedFeature]:
    """Score every column; order by gain descending, name ascending."""
    gains = [information_gain(matrix.rows[:, i], matrix.labels)
             for i in range(len(matrix.specs))]
    order = sorted(range(len(gains)),
                   key=lambda i: (-gains[i], matrix.specs[i].name))
    return [RankedFeature(matrix.specs[i], gains[i], rank)
            for rank, i in enumerate(order, start=1)]


def select_top(matrix: FeatureMatrix, k: int | None = None,
               threshold: float | None = None) -> FeatureMatrix:
    """Keep the k best columns, or all with gain above the threshold.

    Exactly one criterion must be given; surviving columns keep their
    original order.
    """
    if (k is None) == (threshold is None):
        raise ConfigError("give exactly one of k / threshold")
    if k is not None and k <= 0:
        raise ConfigError(f"k must be positive, got {k}")
    ranked = rank_features(matrix)
    if k is not None:
        keep = {r.spec.name for r in ranked[:k]}
    else:
        keep = {r.spec.name for r in ranked if r.gain > threshold}
    indices = [i for i, spec in enumerate(matrix.specs) if spec.name in keep]
    return matrix.subset(col_indices=indices)


def ranking_report(ranked: list[RankedFeature], top: int | None = None) -> list[dict]:
    """JSON-ready ranking rows (the top-attributes table)."""
    rows = ranked if top is None else ranked[:top]
    return [{"name": r.spec.name, "gain_bits": r.gain, "rank": r.rank}
            for r in rows]
