"""Shared instance builders for the test suite."""

import numpy as np
import pytest

import floc
from floc.rng import Rng

KINDS = ("gaussian-mixture", "rare-cluster", "temporal-drift", "identical", "uniform-sphere")


def sample_spec(rng: Rng, n=None, d=None, kinds=KINDS) -> floc.InstanceSpec:
    """Random instance spec drawn from the deterministic stream."""
    kind = kinds[rng.next_below(len(kinds))]
    n = n if n is not None else 8 + rng.next_below(249)
    d = d if d is not None else 2 + rng.next_below(63)
    seed = rng.next_u64()
    params = {}
    if kind == "gaussian-mixture":
        params = {"clusters": 1 + rng.next_below(8), "sigma": 0.05 + 0.3 * rng.next_float()}
    elif kind == "rare-cluster":
        d = max(d, 2)
        params = {"rare_fraction": 0.05 + 0.2 * rng.next_float(), "separation_deg": 45.0 + 90.0 * rng.next_float()}
        n = max(n, 20)
    elif kind == "temporal-drift":
        d = max(d, 2)
        p = 1 + rng.next_below(4)
        n = max(p, n - n % p)
        params = {"tokens_per_frame": p, "drift": 0.005 + 0.05 * rng.next_float()}
    return floc.InstanceSpec(kind, n=n, d=d, seed=seed, **params)


def random_tokens(seed: int, n: int, d: int) -> floc.TokenMatrix:
    return floc.generate(floc.InstanceSpec("uniform-sphere", n=n, d=d, seed=seed))


def shifted(tokens: floc.TokenMatrix) -> floc.SimilarityMatrix:
    return floc.similarity_matrix(tokens, floc.SHIFTED)


def raw(tokens: floc.TokenMatrix) -> floc.SimilarityMatrix:
    return floc.similarity_matrix(tokens, floc.RAW)


def reference_greedy(sims: floc.SimilarityMatrix, budget: int) -> list:
    """Independent greedy oracle: recomputes f from scratch per candidate."""
    picks = []
    for _ in range(min(budget, sims.n)):
        base = floc.objective(sims, picks)
        best_gain, best_c = None, None
        for c in range(sims.n):
            if c in picks:
                continue
            gain = floc.objective(sims, picks + [c]) - base
            if best_gain is None or gain > best_gain:
                best_gain, best_c = gain, c
        picks.append(best_c)
    return picks


@pytest.fixture
def three_token_sims() -> floc.SimilarityMatrix:
    """The worked 3-token instance: e1, e2, and their 45-degree bisector."""
    half = np.sqrt(0.5)
    return shifted(floc.as_tokens([[1.0, 0.0], [0.0, 1.0], [half, half]]))
