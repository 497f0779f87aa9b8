"""Timing harness over a (method, block length, ratio) grid.

Runs are serialized (no concurrent timing), every cell is repeated
`reps` times, and a summary row per cell reports the median wall time.
The CSV header is fixed so downstream tooling can rely on it.
"""

from __future__ import annotations

import statistics
from dataclasses import replace
from fractions import Fraction

from .embeddings import TokenMatrix, normalize_rows
from .metrics import report_for
from .pipeline import WHOLE, CompressionConfig, select

CSV_HEADER = [
    "method",
    "block_frames",
    "ratio",
    "rep",
    "n",
    "d",
    "K",
    "wall_time_s",
    "evaluations",
    "objective_shifted",
    "objective_raw",
    "avg_sum_coverage",
    "avg_distance",
]


def _cell_rows(tokens, unit, config, method, block_frames, ratio, reps):
    rows = []
    times = []
    for rep in range(reps):
        cfg = replace(
            config,
            method=method,
            block_frames=None if block_frames == WHOLE else int(block_frames),
            budget_ratio=Fraction(ratio),
            budget_k=None,
        )
        selection = select(tokens, cfg)
        times.append(selection.wall_time_s)
        report = report_for(selection, unit, block_frames=block_frames)
        rows.append(
            [
                method,
                str(block_frames),
                str(ratio),
                str(rep),
                str(tokens.n),
                str(tokens.d),
                str(len(selection.sorted_indices)),
                format(selection.wall_time_s, ".17g"),
                str(selection.evaluations),
                format(report.objective_shifted, ".17g"),
                format(report.objective_raw, ".17g"),
                format(report.avg_sum_coverage, ".17g"),
                "" if report.avg_distance is None else format(report.avg_distance, ".17g"),
            ]
        )
    median = rows[-1].copy()
    median[3] = "median"
    median[7] = format(statistics.median(times), ".17g")
    rows.append(median)
    return rows


def run_grid(
    tokens: TokenMatrix,
    methods,
    block_frames_list,
    ratios,
    reps: int = 1,
    config: CompressionConfig | None = None,
):
    """All grid cells in deterministic order; returns CSV rows (no header)."""
    base = config or CompressionConfig(budget_ratio=Fraction(1, 8))
    unit = normalize_rows(tokens, allow_zero_rows=base.allow_zero_rows)
    rows = []
    for method in methods:
        for block_frames in block_frames_list:
            for ratio in ratios:
                rows.extend(_cell_rows(tokens, unit, base, method, block_frames, ratio, reps))
    return rows


def to_csv(rows) -> str:
    lines = [",".join(CSV_HEADER)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"
