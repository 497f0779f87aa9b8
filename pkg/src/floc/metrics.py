"""Representativeness and diversity measures for a selected subset.

Both measures are defined on raw cosine similarities:

* averaged sum coverage = mean over all (v in V, u in S) of sim(v, u)
* averaged distance     = mean over ordered pairs u != w in S of 1 - sim(u, w)

z_normalize rescales one instance's per-method values to zero mean and
unit population standard deviation for cross-method comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coverage import _check_subset
from .embeddings import RAW, SimilarityMatrix, TokenMatrix, normalize_rows
from .errors import EmptySubset, SubsetTooSmall


@dataclass
class QualityReport:
    """Objective values, appendix-style metrics, and run counters."""

    method: str
    n: int
    budget: int
    block_frames: object
    objective_raw: float
    objective_shifted: float
    avg_sum_coverage: float
    avg_distance: float | None
    wall_time_s: float | None
    evaluations: int


def _require_raw(sims: SimilarityMatrix):
    if sims.kind != RAW:
        raise ValueError("quality metrics are defined on raw-cosine similarities")


def averaged_sum_coverage(sims_raw: SimilarityMatrix, subset) -> float:
    """Mean similarity between every token and every selected token."""
    _require_raw(sims_raw)
    subset = _check_subset(sims_raw.n, subset)
    if not subset:
        raise EmptySubset("averaged sum coverage needs a nonempty subset")
    rows = sims_raw.values[np.asarray(subset, dtype=np.intp)]
    return float(rows.sum(dtype=np.float64)) / (sims_raw.n * len(subset))


def averaged_distance(sims_raw: SimilarityMatrix, subset) -> float:
    """Mean cosine distance over ordered pairs of distinct selected tokens."""
    _require_raw(sims_raw)
    subset = _check_subset(sims_raw.n, subset)
    k = len(subset)
    if k < 2:
        raise SubsetTooSmall("averaged distance needs at least two selected tokens")
    idx = np.asarray(subset, dtype=np.intp)
    block = sims_raw.values[np.ix_(idx, idx)].astype(np.float64)
    off_diagonal = block.sum() - np.trace(block)
    return float(k * (k - 1) - off_diagonal) / (k * (k - 1))


def averaged_sum_coverage_tokens(unit: TokenMatrix, subset) -> float:
    """Coverage computed from unit rows in O(n * K * d), no full matrix."""
    subset = _check_subset(unit.n, subset)
    if not subset:
        raise EmptySubset("averaged sum coverage needs a nonempty subset")
    x = unit.data.astype(np.float64)
    sims = x @ x[np.asarray(subset, dtype=np.intp)].T
    np.clip(sims, -1.0, 1.0, out=sims)
    return float(sims.sum()) / (unit.n * len(subset))


def averaged_distance_tokens(unit: TokenMatrix, subset) -> float:
    """Averaged distance computed from unit rows in O(K^2 * d)."""
    subset = _check_subset(unit.n, subset)
    k = len(subset)
    if k < 2:
        raise SubsetTooSmall("averaged distance needs at least two selected tokens")
    x = unit.data[np.asarray(subset, dtype=np.intp)].astype(np.float64)
    sims = x @ x.T
    np.clip(sims, -1.0, 1.0, out=sims)
    off_diagonal = sims.sum() - np.trace(sims)
    return float(k * (k - 1) - off_diagonal) / (k * (k - 1))


def z_normalize(values) -> tuple[np.ndarray, bool]:
    """Zero-mean, unit-population-std rescaling of per-method values.

    Returns (normalized, degenerate); with all-equal input the spread is
    undefined, so the result is all zeros and the flag is set.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        raise ValueError("z-normalization needs at least two values")
    mean = values.mean()
    std = values.std()  # population standard deviation
    if std <= 1e-15 * max(1.0, abs(mean)):
        return np.zeros_like(values), True
    return (values - mean) / std, False


def report_for(selection, unit: TokenMatrix, block_frames=None) -> QualityReport:
    """Assemble a QualityReport for a finished selection on unit rows."""
    subset = selection.sorted_indices
    coverage = averaged_sum_coverage_tokens(unit, subset) if subset else None
    distance = averaged_distance_tokens(unit, subset) if len(subset) >= 2 else None
    raw = selection.objective_raw
    if raw is None and subset:
        raw = selection.objective - unit.n
    return QualityReport(
        method=selection.method,
        n=unit.n,
        budget=len(subset),
        block_frames=block_frames,
        objective_raw=raw if subset else 0.0,
        objective_shifted=selection.objective,
        avg_sum_coverage=coverage,
        avg_distance=distance,
        wall_time_s=selection.wall_time_s,
        evaluations=selection.evaluations,
    )
