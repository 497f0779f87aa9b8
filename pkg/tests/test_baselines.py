import numpy as np
import pytest

import floc
from floc.rng import Rng

from conftest import random_tokens


# --- random_select ------------------------------------------------------


def test_random_golden_draw():
    # Frozen output of the documented generator: n=10, K=3, seed=42.
    sel = floc.random_select(10, 3, Rng(42))
    assert sel.picks == [3, 2, 4]
    assert sel.sorted_indices == [2, 3, 4]


def test_random_k_equals_n():
    sel = floc.random_select(6, 6, Rng(0))
    assert sel.sorted_indices == list(range(6))


def test_random_k_zero():
    assert floc.random_select(5, 0, Rng(0)).sorted_indices == []


def test_random_distinct_and_seed_stable():
    a = floc.random_select(100, 40, Rng(7))
    b = floc.random_select(100, 40, Rng(7))
    assert a.sorted_indices == b.sorted_indices
    assert len(set(a.sorted_indices)) == 40


def test_random_content_invariant():
    tokens_a = random_tokens(1, 30, 4)
    tokens_b = random_tokens(2, 30, 4)
    a = floc.random_select(30, 5, Rng(9), tokens=tokens_a)
    b = floc.random_select(30, 5, Rng(9), tokens=tokens_b)
    assert a.sorted_indices == b.sorted_indices


def test_random_objective_matches_scratch():
    tokens = random_tokens(3, 25, 5)
    sel = floc.random_select(25, 6, Rng(11), tokens=tokens)
    sims = floc.similarity_matrix(tokens)
    assert sel.objective == pytest.approx(floc.objective(sims, sel.picks), rel=1e-5)
    assert len(sel.gains) == 6


# --- uniform_select -----------------------------------------------------


@pytest.mark.parametrize(
    "n,k,expected",
    [
        (10, 3, [0, 3, 6]),
        (8, 8, list(range(8))),
        (7, 2, [0, 3]),
    ],
)
def test_uniform_examples(n, k, expected):
    assert floc.uniform_select(n, k).sorted_indices == expected


def test_uniform_strictly_increasing():
    picks = floc.uniform_select(97, 31).sorted_indices
    assert all(b > a for a, b in zip(picks, picks[1:]))


# --- kmeans_medoid_select -----------------------------------------------


def test_kmeans_separated_clusters_one_medoid_each():
    data = np.array([[1, 0], [0.99, 0.14], [0, 1], [0.14, 0.99]], dtype=np.float32)
    sel = floc.kmeans_medoid_select(floc.as_tokens(data), 2, Rng(1))
    assert len(sel.sorted_indices) == 2
    low = {0, 1}
    assert len(low & set(sel.sorted_indices)) == 1  # one from each cluster


def test_kmeans_identical_k1_tie_rule():
    tokens = floc.generate(floc.InstanceSpec("identical", n=7, d=3, seed=2))
    assert floc.kmeans_medoid_select(tokens, 1, Rng(5)).sorted_indices == [0]


def test_kmeans_identical_k3_refill_keeps_count():
    tokens = floc.generate(floc.InstanceSpec("identical", n=5, d=2, seed=4))
    assert floc.kmeans_medoid_select(tokens, 3, Rng(5)).sorted_indices == [0, 1, 2]


def test_kmeans_medoids_minimize_distance_to_mean():
    # Each pick is the brute-force closest member to its cluster mean.
    spec = floc.InstanceSpec("gaussian-mixture", n=60, d=6, seed=13, clusters=3, sigma=0.08)
    tokens = floc.generate(spec)
    sel = floc.kmeans_medoid_select(tokens, 3, Rng(17))
    unit = floc.normalize_rows(tokens).data.astype(np.float64)
    centroids = unit[sel.picks]
    labels = np.argmin(((unit[:, None, :] - centroids[None]) ** 2).sum(-1), axis=1)
    for slot, medoid in enumerate(sel.picks):
        members = np.flatnonzero(labels == slot)
        mean = unit[members].mean(axis=0)
        dists = ((unit[members] - mean) ** 2).sum(-1)
        best = members[np.argmin(dists)]
        assert medoid == best


def test_kmeans_always_returns_k():
    rng = Rng(23)
    for _ in range(8):
        n = 10 + rng.next_below(50)
        k = 1 + rng.next_below(min(10, n))
        tokens = random_tokens(rng.next_u64(), n, 4)
        sel = floc.kmeans_medoid_select(tokens, k, Rng(rng.next_u64()))
        assert len(sel.sorted_indices) == k
        assert len(set(sel.sorted_indices)) == k


# --- farthest_point_select ----------------------------------------------


def test_fps_orthogonal_beats_near_duplicate():
    tokens = floc.as_tokens([[1, 0], [0, 1], [0.99, 0.14]])
    assert floc.farthest_point_select(tokens, 2).sorted_indices == [0, 1]


def test_fps_identical_takes_lowest_indices():
    tokens = floc.generate(floc.InstanceSpec("identical", n=6, d=3, seed=9))
    assert floc.farthest_point_select(tokens, 3).sorted_indices == [0, 1, 2]


def test_fps_matches_bruteforce_recomputation():
    tokens = random_tokens(31, 10, 5)
    unit = floc.normalize_rows(tokens).data.astype(np.float64)
    picks = [0]
    while len(picks) < 4:
        best_c, best_d = None, -1.0
        for c in range(10):
            if c in picks:
                continue
            dist = min(1.0 - float(unit[c] @ unit[s]) for s in picks)
            if dist > best_d:
                best_c, best_d = c, dist
        picks.append(best_c)
    sel = floc.farthest_point_select(tokens, 4)
    assert sel.picks == picks
    assert sel.sorted_indices == sorted(picks)


def test_fps_min_distance_non_increasing():
    tokens = random_tokens(37, 40, 6)
    unit = floc.normalize_rows(tokens).data.astype(np.float64)
    sel = floc.farthest_point_select(tokens, 12)
    values = []
    chosen = []
    for pick in sel.picks:
        if chosen:
            values.append(min(1.0 - float(unit[pick] @ unit[s]) for s in chosen))
        chosen.append(pick)
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_budget_validation():
    tokens = random_tokens(41, 5, 3)
    with pytest.raises(ValueError):
        floc.random_select(5, 6, Rng(0))
    with pytest.raises(ValueError):
        floc.uniform_select(5, 6)
    with pytest.raises(ValueError):
        floc.kmeans_medoid_select(tokens, 6, Rng(0))
    with pytest.raises(ValueError):
        floc.farthest_point_select(tokens, 6)
