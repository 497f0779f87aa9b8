import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import floc
from floc.errors import ConfigError, NonIntegralFrames
from floc.pipeline import WHOLE, CompressionConfig, allocate_budget, partition, run_blocks

from conftest import random_tokens


def cfg(**kw) -> CompressionConfig:
    base = dict(method="floc", budget_k=4, engine="lazy")
    base.update(kw)
    return CompressionConfig(**base)


# --- partition ---------------------------------------------------------


def test_partition_even_blocks():
    assert partition(64, 4, 8) == [(0, 32), (32, 32)]


def test_partition_remainder_block():
    assert partition(72, 4, 8) == [(0, 32), (32, 32), (64, 8)]


def test_partition_whole():
    assert partition(32, 4, WHOLE) == [(0, 32)]


def test_partition_rejects_non_integral_frames():
    with pytest.raises(NonIntegralFrames):
        partition(70, 4, 8)


def test_partition_empty():
    assert partition(0, 4, 8) == []


# --- allocate_budget ---------------------------------------------------


def test_allocate_exact_proportion():
    plan = allocate_budget([(0, 40), (40, 40), (80, 20)], 10)
    assert [b[2] for b in plan.blocks] == [4, 4, 2]


def test_allocate_largest_remainder():
    plan = allocate_budget([(0, 33), (33, 33), (66, 34)], 10)
    assert [b[2] for b in plan.blocks] == [3, 3, 4]


def test_allocate_small_block_rounds_down():
    # Hand-applied rule: quotas 0.2 / 9.8 -> floors 0 and 9, and the single
    # leftover unit goes to the larger fractional part (the big block).
    plan = allocate_budget([(0, 2), (2, 98)], 10)
    assert [b[2] for b in plan.blocks] == [0, 10]


def test_allocate_fraction_tie_goes_to_earlier_block():
    # quotas 0.5 / 0.5 / 49: tie on fractional part -> earlier block wins.
    plan = allocate_budget([(0, 1), (1, 1), (2, 98)], 50)
    assert [b[2] for b in plan.blocks] == [1, 0, 49]


@settings(max_examples=60, deadline=None)
@given(
    lengths=st.lists(st.integers(1, 60), min_size=1, max_size=8),
    budget_frac=st.floats(0.0, 1.0),
)
def test_allocate_invariants(lengths, budget_frac):
    n = sum(lengths)
    budget = max(0, min(n, round(budget_frac * n)))
    starts = np.cumsum([0] + lengths[:-1])
    plan = allocate_budget(list(zip(starts, lengths)), budget)
    quotas = [b[2] for b in plan.blocks]
    assert sum(quotas) == budget
    assert all(0 <= q <= length for q, (_, length) in zip(quotas, plan.blocks))


# --- run_blocks / select ------------------------------------------------


def test_two_identical_blocks_one_pick_each():
    tokens = floc.generate(floc.InstanceSpec("identical", n=8, d=3, seed=1))
    sel = floc.select(tokens, cfg(budget_k=2, block_frames=4, tokens_per_frame=1))
    assert sel.sorted_indices == [0, 4]  # lowest index within each half


def test_single_block_matches_direct_engine():
    tokens = random_tokens(10, 48, 6)
    sims = floc.similarity_matrix(tokens)
    direct = floc.lazy_greedy(sims, 6)
    piped = floc.select(tokens, cfg(budget_k=6))
    assert piped.sorted_indices == direct.sorted_indices
    assert piped.objective == pytest.approx(direct.objective, rel=1e-5)


def test_block_runs_compose():
    # Blocked run equals independently solved blocks stitched together.
    tokens = random_tokens(21, 96, 8)
    sel = floc.select(tokens, cfg(budget_k=12, block_frames=8, tokens_per_frame=4))
    merged = []
    for start in (0, 32, 64):
        block = floc.TokenMatrix(tokens.data[start : start + 32])
        sub = floc.lazy_greedy(floc.similarity_matrix(block), 4)
        merged.extend(start + i for i in sub.sorted_indices)
    assert sel.sorted_indices == sorted(merged)


def test_block_independence():
    tokens = random_tokens(33, 60, 5)
    base = floc.select(tokens, cfg(budget_k=6, block_frames=20, tokens_per_frame=1))
    shuffled = tokens.data.copy()
    shuffled[40:60] = shuffled[40:60][::-1]  # permute only the last block
    moved = floc.select(floc.as_tokens(shuffled), cfg(budget_k=6, block_frames=20, tokens_per_frame=1))
    first_two_blocks = [i for i in base.sorted_indices if i < 40]
    assert [i for i in moved.sorted_indices if i < 40] == first_two_blocks


def test_whole_equals_large_block_count():
    tokens = random_tokens(8, 40, 4)
    whole = floc.select(tokens, cfg(budget_k=5, block_frames=None, tokens_per_frame=4))
    big_t = floc.select(tokens, cfg(budget_k=5, block_frames=1000, tokens_per_frame=4))
    assert whole.sorted_indices == big_t.sorted_indices
    assert whole.objective == big_t.objective


def test_identical_tokens_ratio_half():
    tokens = floc.generate(floc.InstanceSpec("identical", n=4, d=3, seed=0))
    sel = floc.select(tokens, cfg(budget_k=None, budget_ratio=Fraction(1, 2)))
    assert sel.sorted_indices == [0, 1]


def test_full_retention():
    tokens = random_tokens(14, 10, 3)
    sel = floc.select(tokens, cfg(budget_k=10))
    assert sel.sorted_indices == list(range(10))


def test_budget_capped_with_warning():
    tokens = random_tokens(15, 6, 3)
    sel = floc.select(tokens, cfg(budget_k=12))
    assert sel.sorted_indices == list(range(6))
    assert any("capped" in w for w in sel.warnings)


def test_ratio_rounding_half_up():
    tokens = random_tokens(16, 12, 3)
    sel = floc.select(tokens, cfg(budget_k=None, budget_ratio=Fraction(1, 8)))
    assert len(sel.sorted_indices) == 2  # 12/8 = 1.5 rounds half up
    tiny = floc.select(tokens, cfg(budget_k=None, budget_ratio=Fraction(1, 100)))
    assert len(tiny.sorted_indices) == 1  # never rounds to zero


def test_objective_is_sum_of_block_objectives():
    tokens = random_tokens(51, 64, 6)
    sel = floc.select(tokens, cfg(budget_k=8, block_frames=16, tokens_per_frame=2))
    assert sel.objective == pytest.approx(sum(b["objective"] for b in sel.blocks), abs=1e-9)
    assert sel.objective_raw == pytest.approx(sel.objective - 64, abs=1e-6)


def test_baseline_methods_through_blocks():
    tokens = random_tokens(18, 80, 5)
    for method in ("random", "uniform", "kmeans", "fps"):
        sel = floc.select(tokens, cfg(method=method, budget_k=8, block_frames=20, tokens_per_frame=2, seed=5))
        assert len(sel.sorted_indices) == 8
        assert sel.sorted_indices == sorted(set(sel.sorted_indices))


def test_blocked_seeded_methods_are_deterministic():
    tokens = random_tokens(19, 60, 4)
    a = floc.select(tokens, cfg(method="random", budget_k=9, block_frames=10, seed=77))
    b = floc.select(tokens, cfg(method="random", budget_k=9, block_frames=10, seed=77))
    c = floc.select(tokens, cfg(method="random", budget_k=9, block_frames=10, seed=78))
    assert a.sorted_indices == b.sorted_indices
    assert a.sorted_indices != c.sorted_indices


def test_parallel_blocks_match_serial(monkeypatch):
    tokens = random_tokens(20, 96, 6)
    serial = floc.select(tokens, cfg(budget_k=12, block_frames=8, tokens_per_frame=2))
    monkeypatch.setenv("FLOC_THREADS", "2")
    parallel = floc.select(tokens, cfg(budget_k=12, block_frames=8, tokens_per_frame=2))
    assert parallel.sorted_indices == serial.sorted_indices
    assert parallel.objective == serial.objective


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        cfg(method="spectral").validate()
    with pytest.raises(ConfigError):
        cfg(engine="eager").validate()
    with pytest.raises(ConfigError):
        CompressionConfig(method="floc").validate()  # no budget at all
    with pytest.raises(ConfigError):
        cfg(budget_k=3, budget_ratio=Fraction(1, 2)).validate()
    with pytest.raises(ConfigError):
        cfg(budget_k=None, budget_ratio=Fraction(3, 2)).validate()
    with pytest.raises(ConfigError):
        cfg(block_frames=0).validate()
    with pytest.raises(ConfigError):
        cfg(tokens_per_frame=0).validate()


def test_select_propagates_frame_mismatch():
    tokens = random_tokens(22, 10, 3)
    with pytest.raises(NonIntegralFrames):
        floc.select(tokens, cfg(budget_k=2, tokens_per_frame=3))
