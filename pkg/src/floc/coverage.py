"""Facility-location objective f(S) = sum_v max_{u in S} sim(v, u).

The incremental CoverageState keeps best[v], the similarity of v to its
closest selected token, so a marginal gain costs one O(n) pass instead
of two objective evaluations.  Candidate similarities are always read by
ROW of the similarity matrix, which makes every code path (single gain,
batched gains, engines) reduce the exact same float64 values in the
exact same order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embeddings import SHIFTED, SimilarityMatrix
from .errors import AlreadySelected, DuplicateIndex, IndexOutOfRange


@dataclass
class CoverageState:
    """Running coverage of the ground set by the selected subset."""

    best: np.ndarray  # float64, best[v] = max_{u in S} sim(v, u); zeros for empty S
    objective: float = 0.0
    selected: list = field(default_factory=list)


def new_state(n: int) -> CoverageState:
    return CoverageState(best=np.zeros(n, dtype=np.float64))


def _check_subset(n: int, subset) -> list:
    subset = [int(i) for i in subset]
    for i in subset:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"index {i} outside [0, {n})")
    if len(set(subset)) != len(subset):
        raise DuplicateIndex("subset contains repeated indices")
    return subset


def row_gains(values: np.ndarray, rows, best: np.ndarray) -> np.ndarray:
    """Marginal gains of `rows` against coverage `best`, one float64 per row.

    Shared by every gain computation in the package: identical inputs
    give bit-identical outputs regardless of batch size.
    """
    sub = values[np.asarray(rows, dtype=np.intp)]
    diff = sub - best[None, :]  # float64 upcast
    np.maximum(diff, 0.0, out=diff)
    return diff.sum(axis=1)


def objective(sims: SimilarityMatrix, subset) -> float:
    """f(subset) recomputed from scratch; empty subsets score 0."""
    subset = _check_subset(sims.n, subset)
    if not subset:
        return 0.0
    covered = sims.values[np.asarray(subset, dtype=np.intp)].max(axis=0)
    return float(covered.sum(dtype=np.float64))


def marginal_gain(state: CoverageState, sims: SimilarityMatrix, candidate: int) -> float:
    """f(S + candidate) - f(S) in one pass over the cached best vector."""
    candidate = int(candidate)
    if not 0 <= candidate < sims.n:
        raise IndexOutOfRange(f"index {candidate} outside [0, {sims.n})")
    if candidate in state.selected:
        raise AlreadySelected(f"token {candidate} already selected")
    return float(row_gains(sims.values, [candidate], state.best)[0])


def apply_pick(state: CoverageState, sims: SimilarityMatrix, pick: int) -> CoverageState:
    """Return the coverage state after adding `pick` to the subset."""
    gain = marginal_gain(state, sims, pick)
    best = np.maximum(state.best, sims.values[int(pick)])
    return CoverageState(
        best=best,
        objective=state.objective + gain,
        selected=state.selected + [int(pick)],
    )


def subset_objective_shifted(state_best: np.ndarray) -> float:
    """Objective recomputed from a best vector (float64 sum)."""
    return float(state_best.sum(dtype=np.float64))


def is_shifted(sims: SimilarityMatrix) -> bool:
    return sims.kind == SHIFTED
