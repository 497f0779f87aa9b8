"""Deterministic synthetic ground sets.

Every generator draws only from the seeded splitmix stream (Gaussians
via Box-Muller, see rng.fill_normal) and emits unit rows, so a spec is
reproducible bit-for-bit.  Kinds:

* gaussian-mixture : well-separated random cluster centers plus noise
* rare-cluster     : one dense cluster and a small far-away cluster; every
  rare row is guaranteed to sit beyond the requested angular separation
  from the dense center
* temporal-drift   : frames of near-duplicate tokens whose shared
  direction rotates slowly, one frame after another
* identical        : one direction repeated n times
* uniform-sphere   : isotropic directions
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embeddings import TokenMatrix
from .errors import InvalidSpec
from .rng import Rng

KINDS = ("gaussian-mixture", "rare-cluster", "temporal-drift", "identical", "uniform-sphere")


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    n: int
    d: int
    seed: int = 0
    clusters: int = 8
    sigma: float = 0.1
    rare_fraction: float = 0.05
    separation_deg: float = 60.0
    drift: float = 0.02
    tokens_per_frame: int = 1

    def validate(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 0 or self.d < 1:
            raise InvalidSpec(f"invalid sizes n={self.n}, d={self.d}")
        if self.kind == "gaussian-mixture" and self.clusters < 1:
            raise InvalidSpec("gaussian-mixture needs at least one cluster")
        if self.kind == "rare-cluster":
            if not 0.0 < self.rare_fraction < 1.0:
                raise InvalidSpec(f"rare fraction {self.rare_fraction} outside (0, 1)")
            if not 0.0 < self.separation_deg < 180.0:
                raise InvalidSpec(f"separation {self.separation_deg} outside (0, 180) degrees")
            if self.d < 2:
                raise InvalidSpec("rare-cluster needs d >= 2 to place a separated center")
        if self.kind == "temporal-drift":
            if self.tokens_per_frame < 1:
                raise InvalidSpec("temporal-drift needs tokens_per_frame >= 1")
            if self.n % self.tokens_per_frame != 0:
                raise InvalidSpec(
                    f"temporal-drift needs n divisible by tokens_per_frame "
                    f"({self.n} % {self.tokens_per_frame} != 0)"
                )
            if self.d < 2:
                raise InvalidSpec("temporal-drift needs d >= 2 to rotate")


def _unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def _unit_rows(rows: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1)
    tiny = norms < 1e-12
    if tiny.any():  # vanishing noise sum; keep the cluster direction
        rows[tiny] = fallback if fallback.ndim == 1 else fallback[tiny]
        norms[tiny] = 1.0
    return rows / norms[:, None]


def _gaussian_rows(rng: Rng, n: int, d: int) -> np.ndarray:
    return rng.fill_normal(n * d).reshape(n, d)


def generate(spec: InstanceSpec) -> TokenMatrix:
    """Materialize the spec as a float32 unit-row token matrix."""
    spec.validate()
    rng = Rng(spec.seed)
    n, d = spec.n, spec.d

    if spec.kind == "identical":
        direction = _unit(rng.fill_normal(d))
        rows = np.tile(direction, (n, 1))

    elif spec.kind == "uniform-sphere":
        rows = _unit_rows(_gaussian_rows(rng, n, d), np.eye(1, d)[0])

    elif spec.kind == "gaussian-mixture":
        centers = _unit_rows(_gaussian_rows(rng, spec.clusters, d), np.eye(1, d)[0])
        assign = (rng.fill_u64(n) % np.uint64(spec.clusters)).astype(np.intp)
        noise = spec.sigma * _gaussian_rows(rng, n, d)
        rows = _unit_rows(centers[assign] + noise, centers[assign])

    elif spec.kind == "rare-cluster":
        rows = _rare_cluster(rng, spec)

    else:  # temporal-drift
        rows = _temporal_drift(rng, spec)

    return TokenMatrix(rows.astype(np.float32))


def _orthonormal_pair(rng: Rng, d: int) -> tuple[np.ndarray, np.ndarray]:
    u = _unit(rng.fill_normal(d))
    while True:
        w = rng.fill_normal(d)
        w -= (w @ u) * u
        norm = np.linalg.norm(w)
        if norm > 1e-9:
            return u, w / norm


def rare_indices(spec: InstanceSpec) -> list:
    """Positions of the rare tokens a rare-cluster spec will emit."""
    spec.validate()
    if spec.kind != "rare-cluster":
        raise InvalidSpec("rare indices are only defined for rare-cluster specs")
    n_rare = int(math.floor(spec.rare_fraction * spec.n))
    return [(i * spec.n) // n_rare for i in range(n_rare)]


def _rare_cluster(rng: Rng, spec: InstanceSpec) -> np.ndarray:
    n, d = spec.n, spec.d
    n_rare = int(math.floor(spec.rare_fraction * n))
    sep = math.radians(spec.separation_deg)
    dense_center, perp = _orthonormal_pair(rng, d)
    # The rare center sits past the separation angle by a noise guard, and
    # each rare draw is rejected until it clears the separation exactly.
    guard = min(3.0 * spec.sigma, (math.pi - sep) / 2 if sep < math.pi else 0.0)
    angle = min(sep + guard, 0.98 * math.pi)
    rare_center = math.cos(angle) * dense_center + math.sin(angle) * perp
    cos_sep = math.cos(sep)

    rows = _unit_rows(
        dense_center[None, :] + spec.sigma * _gaussian_rows(rng, n, d), dense_center
    )
    # Rare tokens occur sparsely: evenly spaced positions in the stream.
    rare_at = [(i * n) // n_rare for i in range(n_rare)] if n_rare else []
    for position in rare_at:
        while True:
            row = _unit(rare_center + spec.sigma * rng.fill_normal(d))
            if float(row @ dense_center) < cos_sep:
                rows[position] = row
                break
    return rows


def _temporal_drift(rng: Rng, spec: InstanceSpec) -> np.ndarray:
    n, d, p = spec.n, spec.d, spec.tokens_per_frame
    frames = n // p
    u, w = _orthonormal_pair(rng, d)
    angles = spec.drift * np.arange(frames, dtype=np.float64)
    directions = np.cos(angles)[:, None] * u + np.sin(angles)[:, None] * w
    base = np.repeat(directions, p, axis=0)
    jitter = 0.01 * _gaussian_rows(rng, n, d)
    return _unit_rows(base + jitter, base)
