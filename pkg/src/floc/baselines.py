"""Reference selectors: random, uniform stride, k-means medoids, farthest point.

All baselines return exactly K distinct indices with `sorted_indices`
ascending.  Randomized ones draw exclusively from the seedable splitmix
stream so a seed pins their output on every platform.  When the token
matrix is supplied, `gains` and `objective` are filled by evaluating the
shifted facility-location objective along the pick order.
"""

from __future__ import annotations

import numpy as np

from .embeddings import TokenMatrix, normalize_rows
from .engines import Selection
from .rng import Rng


def _evaluate(selection: Selection, tokens: TokenMatrix | None):
    """Fill gains/objective by replaying picks against the shifted objective."""
    if tokens is None or not selection.picks:
        return selection
    unit = normalize_rows(tokens).data
    n = unit.shape[0]
    best = np.zeros(n, dtype=np.float64)
    gains = []
    for pick in selection.picks:
        row = unit @ unit[pick]
        np.clip(row, -1.0, 1.0, out=row)
        row += np.float32(1.0)
        gains.append(float(np.maximum(row - best, 0.0).sum()))
        np.maximum(best, row, out=best)
    selection.gains = gains
    selection.objective = float(best.sum(dtype=np.float64))
    selection.objective_raw = selection.objective - n
    return selection


def random_select(n: int, budget: int, rng: Rng, tokens: TokenMatrix | None = None) -> Selection:
    """Budget distinct indices via partial Fisher-Yates over [0, n)."""
    if budget > n:
        raise ValueError(f"budget {budget} exceeds ground set size {n}")
    pool = list(range(n))
    for i in range(budget):
        j = i + rng.next_below(n - i)
        pool[i], pool[j] = pool[j], pool[i]
    picks = pool[:budget]
    sel = Selection("random", picks, [], sorted(picks), 0.0, 0)
    return _evaluate(sel, tokens)


def uniform_select(n: int, budget: int, tokens: TokenMatrix | None = None) -> Selection:
    """Evenly strided indices floor(i * n / budget)."""
    if budget > n:
        raise ValueError(f"budget {budget} exceeds ground set size {n}")
    picks = [(i * n) // budget for i in range(budget)]
    sel = Selection("uniform", picks, [], sorted(picks), 0.0, 0)
    return _evaluate(sel, tokens)


def kmeans_medoid_select(
    tokens: TokenMatrix, budget: int, rng: Rng, max_iters: int = 20
) -> Selection:
    """Lloyd k-means on unit rows, then one medoid per cluster.

    Centers start from k-means++ draws; iteration stops when assignments
    repeat or after max_iters.  The medoid of a cluster is the member
    token closest (Euclidean) to the cluster mean, lowest index on ties.
    Empty clusters are refilled with the farthest unselected token from
    its nearest centroid.  Distances are computed in float64 for stable
    assignments and tie handling.
    """
    n = tokens.n
    if budget > n:
        raise ValueError(f"budget {budget} exceeds ground set size {n}")
    if budget == 0:
        return Selection("kmeans", [], [], [], 0.0, 0)
    unit = normalize_rows(tokens).data.astype(np.float64)

    centers = _kmeans_pp(unit, budget, rng)
    centroids = unit[centers].copy()
    labels = None
    for _ in range(max_iters):
        new_labels = _assign(unit, centroids)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for k in range(budget):
            members = labels == k
            if members.any():
                centroids[k] = unit[members].mean(axis=0)
    if labels is None:
        labels = _assign(unit, centroids)

    picks, empty = [], []
    for k in range(budget):
        members = np.flatnonzero(labels == k)
        if members.size == 0:
            empty.append(k)
            continue
        mean = unit[members].mean(axis=0)
        dist = ((unit[members] - mean) ** 2).sum(axis=1)
        picks.append(int(members[int(np.argmin(dist))]))
    for _ in empty:
        chosen = np.zeros(n, dtype=bool)
        chosen[picks] = True
        nearest = _assign(unit, centroids, as_distance=True)
        nearest[chosen] = -np.inf
        picks.append(int(np.argmax(nearest)))

    sel = Selection("kmeans", picks, [], sorted(picks), 0.0, 0)
    return _evaluate(sel, tokens)


def _kmeans_pp(unit: np.ndarray, k: int, rng: Rng) -> list:
    """k-means++ seeding: D^2-weighted draws from the splitmix stream."""
    n = unit.shape[0]
    centers = [rng.next_below(n)]
    dist = ((unit - unit[centers[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = float(dist.sum())
        if total <= 0.0:
            # All remaining mass sits on chosen centers; take the lowest
            # index not yet used so the count still reaches k.
            taken = set(centers)
            centers.append(next(i for i in range(n) if i not in taken))
        else:
            r = rng.next_float() * total
            idx = int(np.searchsorted(np.cumsum(dist), r, side="right"))
            centers.append(min(idx, n - 1))
        dist = np.minimum(dist, ((unit - unit[centers[-1]]) ** 2).sum(axis=1))
    return centers


def _assign(unit: np.ndarray, centroids: np.ndarray, as_distance: bool = False):
    """Nearest-centroid labels (or distances) on unit rows.

    |x|^2 is constant on the sphere, so argmin needs only |c|^2 - 2 x.c.
    """
    cross = unit @ centroids.T
    part = (centroids**2).sum(axis=1)[None, :] - 2.0 * cross
    if as_distance:
        return part.min(axis=1) + 1.0  # + |x|^2
    return np.argmin(part, axis=1)


def farthest_point_select(tokens: TokenMatrix, budget: int) -> Selection:
    """Max-min diversity greedy in cosine distance, starting at index 0."""
    n = tokens.n
    if budget > n:
        raise ValueError(f"budget {budget} exceeds ground set size {n}")
    if budget == 0:
        return Selection("fps", [], [], [], 0.0, 0)
    unit = normalize_rows(tokens).data.astype(np.float64)
    picks = [0]
    min_dist = 1.0 - unit @ unit[0]
    min_dist[0] = -np.inf
    for _ in range(1, budget):
        nxt = int(np.argmax(min_dist))  # first maximum -> lowest index on ties
        picks.append(nxt)
        np.minimum(min_dist, 1.0 - unit @ unit[nxt], out=min_dist)
        min_dist[nxt] = -np.inf
    sel = Selection("fps", picks, [], sorted(picks), 0.0, 0)
    return _evaluate(sel, tokens)
