"""Aggregation of actor preference scores into a single group score.

Scores are z-normalized per (actor, criterion) column over the candidate
set under comparison, then combined with a linear weighted centroid:
Z = sum of w[k,i] * z[k,i] with the weights summing to one. Because
z-normalization absorbs affine rescalings of any column, the resulting
ranking is invariant under admissible preference transformations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping

import numpy as np

from .errors import InsufficientCandidatesError, WeightSchemaError

WEIGHT_SUM_TOL = 1e-9

# Column labels are (actor_id, criterion_id) pairs.
ColumnKey = tuple[Hashable, Hashable]


@dataclass(frozen=True)
class WeightMatrix:
    """Nonnegative weights per (actor, criterion), summing to one overall.

    Zero entries are allowed: an actor with no interest in a criterion
    simply contributes nothing on that column.
    """

    entries: Mapping[ColumnKey, float]

    def __post_init__(self):
        report = validate_weights(self)
        if not report.ok:
            raise WeightSchemaError("; ".join(report.problems))

    def weight(self, key: ColumnKey) -> float:
        return float(self.entries.get(key, 0.0))

    def keys(self):
        return self.entries.keys()


@dataclass(frozen=True)
class WeightReport:
    sum_deviation: float
    negative_entries: tuple[ColumnKey, ...]
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def validate_weights(weights: WeightMatrix | Mapping[ColumnKey, float]) -> WeightReport:
    """Report-style check: weight sum must be 1, entries nonnegative."""
    entries = weights.entries if isinstance(weights, WeightMatrix) else weights
    total = float(sum(entries.values()))
    deviation = total - 1.0
    negatives = tuple(k for k, w in entries.items() if w < 0)
    problems = []
    if abs(deviation) > WEIGHT_SUM_TOL:
        problems.append(f"weights sum to {total}, deviation {deviation:+g}")
    if negatives:
        problems.append(f"negative weights at {sorted(map(str, negatives))}")
    return WeightReport(deviation, negatives, tuple(problems))


@dataclass(frozen=True)
class ScoreTable:
    """Rectangular table: one row per candidate, one column per (actor, criterion)."""

    columns: tuple[ColumnKey, ...]
    values: np.ndarray  # shape (n_rows, n_cols), float64

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != len(self.columns):
            raise WeightSchemaError(
                f"score table shape {arr.shape} does not match {len(self.columns)} columns"
            )
        object.__setattr__(self, "values", arr)

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])

    def column(self, key: ColumnKey) -> np.ndarray:
        return self.values[:, self.columns.index(key)]


def z_normalize(table: ScoreTable) -> ScoreTable:
    """Per-column z-scores with the population (N-divisor) standard deviation.

    Columns with zero variance do not discriminate between candidates and
    map to all-zero z-scores instead of raising.
    """
    if table.n_rows < 2:
        raise InsufficientCandidatesError(
            f"z-normalization needs at least 2 candidates, got {table.n_rows}"
        )
    values = table.values
    means = values.mean(axis=0)
    stds = values.std(axis=0)  # population std
    z = np.zeros_like(values)
    # scale-aware guard: a column whose spread is at float-rounding level does
    # not discriminate and must not amplify noise into O(1) z-scores
    nonzero = stds > 1e-12 * np.maximum(1.0, np.abs(means))
    z[:, nonzero] = (values[:, nonzero] - means[nonzero]) / stds[nonzero]
    return ScoreTable(table.columns, z)


def afine_aggregate(z_table: ScoreTable, weights: WeightMatrix) -> np.ndarray:
    """Weighted centroid Z per candidate: Z = sum of w[k,i] * z[k,i]."""
    unknown = [k for k in weights.keys() if k not in z_table.columns]
    if unknown:
        raise WeightSchemaError(f"weights refer to unknown columns: {sorted(map(str, unknown))}")
    w = np.array([weights.weight(c) for c in z_table.columns], dtype=float)
    return z_table.values @ w
