"""Brute-force exact maximizer for desk-scale verification.

Enumerating subsets of size exactly K is sufficient: the shifted
objective is monotone (adding a token never lowers coverage), so some
maximum over |S| <= K is attained at |S| = K.  Ties resolve to the
lexicographically smallest index set, which falls out of enumerating
combinations in lexicographic order with a strict improvement test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .embeddings import SHIFTED, SimilarityMatrix
from .engines import lazy_greedy
from .errors import EmptyGroundSet, InstanceTooLarge

SUBSET_GUARD = 10_000_000


@dataclass(frozen=True)
class OracleResult:
    best_subset: tuple
    best_value: float
    subsets_evaluated: int


def exhaustive_optimum(sims: SimilarityMatrix, budget: int) -> OracleResult:
    """Maximum-value subset of size exactly `budget` by full enumeration."""
    if sims.kind != SHIFTED:
        raise ValueError("oracle requires shifted similarities")
    n = sims.n
    if n == 0:
        raise EmptyGroundSet("cannot enumerate subsets of an empty ground set")
    budget = min(budget, n)
    count = comb(n, budget)
    if count > SUBSET_GUARD:
        raise InstanceTooLarge(f"C({n}, {budget}) = {count} exceeds guard {SUBSET_GUARD}")
    values = sims.values
    best_value = -np.inf
    best_subset = ()
    evaluated = 0
    for combo in itertools.combinations(range(n), budget):
        value = float(values[list(combo)].max(axis=0).sum(dtype=np.float64)) if combo else 0.0
        evaluated += 1
        if value > best_value:
            best_value = value
            best_subset = combo
    return OracleResult(best_subset, best_value, evaluated)


def verify_bound(sims: SimilarityMatrix, budget: int) -> float:
    """f(greedy) / f(optimum); >= 1 - 1/e by the classic greedy guarantee."""
    optimum = exhaustive_optimum(sims, budget)
    greedy = lazy_greedy(sims, budget)
    return greedy.objective / optimum.best_value
