"""Temporal block pipeline: partition, budget apportionment, merge.

The token stream is split into blocks of T frames (p tokens per frame),
the global budget is apportioned across blocks by largest remainder, and
every block is solved independently.  Merged indices come back in
ascending (temporal) order so downstream consumers can concatenate the
surviving tokens directly.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import baselines
from .embeddings import TokenMatrix, normalize_rows, shifted_similarity_fast, similarity_matrix
from .engines import DenseGains, OnTheFlyGains, Selection, _run_lazy, _run_naive
from .errors import ConfigError, NonIntegralFrames
from .rng import Rng, derive_seed

WHOLE = "whole"
METHODS = ("floc", "random", "uniform", "kmeans", "fps")
ENGINES = ("lazy", "naive")

# Blocks at or below this size materialize their shifted similarity matrix;
# larger blocks use the on-the-fly backend to stay within O(n*d) memory.
DENSE_BLOCK_LIMIT = 16384


@dataclass(frozen=True)
class CompressionConfig:
    """Budget, block shape, and method for one selection run."""

    method: str = "floc"
    budget_ratio: Fraction | None = None
    budget_k: int | None = None
    block_frames: int | None = None  # None means a single whole-stream block
    tokens_per_frame: int = 1
    seed: int = 0
    engine: str = "lazy"
    allow_zero_rows: bool = False
    kmeans_iters: int = 20

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; expected one of {ENGINES}")
        if (self.budget_ratio is None) == (self.budget_k is None):
            raise ConfigError("exactly one of budget ratio or absolute budget is required")
        if self.budget_ratio is not None and not 0 < self.budget_ratio <= 1:
            raise ConfigError(f"budget ratio {self.budget_ratio} outside (0, 1]")
        if self.budget_k is not None and self.budget_k < 0:
            raise ConfigError(f"absolute budget {self.budget_k} is negative")
        if self.block_frames is not None and self.block_frames < 1:
            raise ConfigError(f"block length {self.block_frames} must be >= 1 frame")
        if self.tokens_per_frame < 1:
            raise ConfigError(f"tokens per frame {self.tokens_per_frame} must be >= 1")
        if self.kmeans_iters < 1:
            raise ConfigError("kmeans iteration cap must be >= 1")


@dataclass(frozen=True)
class BlockPlan:
    """Contiguous block extents plus the budget apportioned to each."""

    blocks: list  # of (start, length, block_budget)


def derived_budget(config: CompressionConfig, n: int) -> tuple[int, list]:
    """Resolve ratio-or-absolute budget to K, capping into (0, n]."""
    warnings = []
    if config.budget_ratio is not None:
        # Round half up, exactly, via Fractions.
        k = int(config.budget_ratio * n + Fraction(1, 2))
        k = max(1, k)
    else:
        k = config.budget_k
    if k > n:
        warnings.append(f"budget {k} exceeds ground set size {n}; capped to {n}")
        k = n
    return k, warnings


def partition(n: int, tokens_per_frame: int, block_frames) -> list:
    """Split [0, n) into contiguous blocks of block_frames frames.

    The final block keeps whatever remainder is left rather than being
    padded or merged.  Returns (start, length) pairs.
    """
    if n % tokens_per_frame != 0:
        raise NonIntegralFrames(
            f"{n} tokens do not divide into frames of {tokens_per_frame}"
        )
    if n == 0:
        return []
    if block_frames == WHOLE or block_frames is None:
        return [(0, n)]
    step = block_frames * tokens_per_frame
    return [(start, min(step, n - start)) for start in range(0, n, step)]


def allocate_budget(extents: list, budget: int) -> BlockPlan:
    """Largest-remainder apportionment of the budget over block lengths.

    Fractional-part ties go to earlier blocks; any block capped at its
    length hands the deficit to later uncapped blocks.
    """
    n = sum(length for _, length in extents)
    if budget > n:
        raise ConfigError(f"budget {budget} exceeds total length {n}")
    quotas = [(budget * length) // n for _, length in extents]
    remainders = [(budget * length) % n for _, length in extents]
    leftover = budget - sum(quotas)
    for i in sorted(range(len(extents)), key=lambda i: (-remainders[i], i))[:leftover]:
        quotas[i] += 1
    # Cap at block length; push any overflow to later blocks with headroom.
    deficit = 0
    for i, (_, length) in enumerate(extents):
        if quotas[i] > length:
            deficit += quotas[i] - length
            quotas[i] = length
    i = 0
    while deficit > 0 and i < len(extents):
        room = extents[i][1] - quotas[i]
        take = min(room, deficit)
        quotas[i] += take
        deficit -= take
        i += 1
    return BlockPlan([(start, length, quotas[i]) for i, (start, length) in enumerate(extents)])


def _floc_block(unit_block: np.ndarray, budget: int, engine: str) -> Selection:
    if unit_block.shape[0] <= DENSE_BLOCK_LIMIT:
        backend = DenseGains(shifted_similarity_fast(unit_block))
    else:
        backend = OnTheFlyGains(unit_block)
    run = _run_lazy if engine == "lazy" else _run_naive
    return run(backend, budget, f"floc-{engine}")


def _run_one_block(unit: TokenMatrix, config: CompressionConfig, block_id: int,
                   start: int, length: int, budget: int) -> Selection:
    block_tokens = TokenMatrix(unit.data[start : start + length])
    if config.method == "floc":
        return _floc_block(block_tokens.data, budget, config.engine)
    if config.method == "uniform":
        return baselines.uniform_select(length, budget, tokens=block_tokens)
    rng = Rng(derive_seed(config.seed, block_id))
    if config.method == "random":
        return baselines.random_select(length, budget, rng, tokens=block_tokens)
    if config.method == "kmeans":
        return baselines.kmeans_medoid_select(
            block_tokens, budget, rng, max_iters=config.kmeans_iters
        )
    return baselines.farthest_point_select(block_tokens, budget)


def run_blocks(unit: TokenMatrix, plan: BlockPlan, config: CompressionConfig) -> Selection:
    """Select within each block and merge to global, temporally ordered indices."""

    def solve(item):
        block_id, (start, length, budget) = item
        try:
            return _run_one_block(unit, config, block_id, start, length, budget)
        except Exception as exc:  # annotate with the failing block
            raise type(exc)(f"block {block_id} [{start}, {start + length}): {exc}") from exc

    items = list(enumerate(plan.blocks))
    workers = int(os.environ.get("FLOC_THREADS", "1") or "1")
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, items))
    else:
        results = [solve(item) for item in items]

    picks, gains, objective, evaluations, warnings = [], [], 0.0, 0, []
    block_summaries = []
    for (block_id, (start, length, budget)), sel in zip(items, results):
        global_picks = [start + p for p in sel.picks]
        picks.extend(global_picks)
        gains.extend(sel.gains)
        objective += sel.objective
        evaluations += sel.evaluations
        warnings.extend(sel.warnings)
        block_summaries.append(
            {
                "block": block_id,
                "start": start,
                "length": length,
                "budget": budget,
                "picks": global_picks,
                "objective": sel.objective,
            }
        )
    n_total = sum(length for _, length, _ in plan.blocks)
    return Selection(
        method=config.method,
        picks=picks,
        gains=gains,
        sorted_indices=sorted(picks),
        objective=objective,
        # Every covered token sits in exactly one block, so the raw
        # objective is the shifted one minus one unit per token.
        objective_raw=objective - n_total,
        evaluations=evaluations,
        warnings=warnings,
        blocks=block_summaries,
    )


def select(tokens: TokenMatrix, config: CompressionConfig) -> Selection:
    """Normalize, partition, apportion, select per block, and merge."""
    config.validate()
    started = time.perf_counter()
    unit = normalize_rows(tokens, allow_zero_rows=config.allow_zero_rows)
    budget, warnings = derived_budget(config, tokens.n)
    extents = partition(tokens.n, config.tokens_per_frame, config.block_frames or WHOLE)
    plan = allocate_budget(extents, budget)
    result = run_blocks(unit, plan, config)
    result.warnings = warnings + result.warnings
    result.wall_time_s = time.perf_counter() - started
    return result


def single_block(config: CompressionConfig) -> CompressionConfig:
    """Copy of the config collapsed to one whole-stream block."""
    return replace(config, block_frames=None)
