"""Command-line interface.

Subcommands: ``gen`` (synthetic embedding files), ``select`` (subset
selection), ``metrics`` (quality measures), ``oracle`` (brute-force
optimum and greedy ratio), ``bench`` (timing grid as CSV).

Exit codes: 0 success, 2 malformed input file, 3 configuration error,
4 instance too large for exhaustive enumeration.  FLOC_THREADS caps
block-level parallelism (default 1).

Result records are deterministic byte-for-byte for a fixed seed; wall
time is omitted from them unless --timing is given (it is always shown
on the summary line and in bench CSVs).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bench as bench_mod
from .embeddings import TokenMatrix, normalize_rows
from .errors import (
    ConfigError,
    EmptySubset,
    FlocError,
    InstanceTooLarge,
    InvalidSpec,
    MalformedFile,
    NonIntegralFrames,
    SubsetTooSmall,
    ZeroNormRow,
)
from .fileio import read_embeddings, write_embeddings, write_record
from .instances import InstanceSpec, generate
from .metrics import report_for, z_normalize
from .oracle import exhaustive_optimum, verify_bound
from .pipeline import WHOLE, CompressionConfig, select

EXIT_OK = 0
EXIT_BAD_FILE = 2
EXIT_BAD_CONFIG = 3
EXIT_TOO_LARGE = 4

_CONFIG_ERRORS = (
    ConfigError,
    InvalidSpec,
    ZeroNormRow,
    EmptySubset,
    SubsetTooSmall,
    NonIntegralFrames,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); config errors are exit 3
        raise ConfigError(message)


def _ratio(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse ratio {text!r}: {exc}") from exc
    return value


def _block_frames(text: str):
    if text == WHOLE:
        return None
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"block length must be an integer or 'whole', got {text!r}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="floc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic embedding file")
    gen.add_argument("--kind", required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--clusters", type=int, default=8)
    gen.add_argument("--sigma", type=float, default=0.1)
    gen.add_argument("--rare-fraction", type=float, default=0.05)
    gen.add_argument("--separation-deg", type=float, default=60.0)
    gen.add_argument("--drift", type=float, default=0.02)
    gen.add_argument("--tokens-per-frame", type=int, default=1)
    gen.add_argument("--output", required=True)

    sel = sub.add_parser("select", help="select a token subset from an embedding file")
    sel.add_argument("--input", required=True)
    sel.add_argument("--method", default="floc")
    group = sel.add_mutually_exclusive_group(required=True)
    group.add_argument("--ratio", type=_ratio)
    group.add_argument("--budget", type=int)
    sel.add_argument("--block-frames", type=_block_frames, default=None)
    sel.add_argument("--tokens-per-frame", type=int, default=1)
    sel.add_argument("--seed", type=int, default=0)
    sel.add_argument("--engine", default="lazy")
    sel.add_argument("--allow-zero-rows", action="store_true")
    sel.add_argument("--kmeans-iters", type=int, default=20)
    sel.add_argument("--timing", action="store_true",
                     help="write measured wall time into the record (breaks byte equality)")
    sel.add_argument("--output", required=True)

    met = sub.add_parser("metrics", help="quality metrics for a subset or methods")
    met.add_argument("--input", required=True)
    met.add_argument("--indices", help="JSON file with an index array or a select record")
    met.add_argument("--methods", help="comma list of methods to run inline")
    met.add_argument("--ratio", type=_ratio)
    met.add_argument("--budget", type=int)
    met.add_argument("--block-frames", type=_block_frames, default=None)
    met.add_argument("--tokens-per-frame", type=int, default=1)
    met.add_argument("--seed", type=int, default=0)
    met.add_argument("--engine", default="lazy")
    met.add_argument("--z-normalize", action="store_true")
    met.add_argument("--output", required=True)

    orc = sub.add_parser("oracle", help="exhaustive optimum and greedy bound ratio")
    orc.add_argument("--input", required=True)
    orc.add_argument("--budget", type=int, required=True)
    orc.add_argument("--output", required=True)

    ben = sub.add_parser("bench", help="timing grid over methods x block lengths x ratios")
    ben.add_argument("--input")
    ben.add_argument("--kind")
    ben.add_argument("--n", type=int)
    ben.add_argument("--d", type=int)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--clusters", type=int, default=8)
    ben.add_argument("--sigma", type=float, default=0.1)
    ben.add_argument("--methods", default="floc")
    ben.add_argument("--block-frames", default=WHOLE,
                     help="comma list of frame counts or 'whole'")
    ben.add_argument("--tokens-per-frame", type=int, default=1)
    ben.add_argument("--ratios", default="1/8", help="comma list of budget ratios")
    ben.add_argument("--reps", type=int, default=1)
    ben.add_argument("--engine", default="lazy")
    ben.add_argument("--output")

    return parser


def _spec_from_args(args) -> InstanceSpec:
    return InstanceSpec(
        kind=args.kind,
        n=args.n,
        d=args.d,
        seed=args.seed,
        clusters=args.clusters,
        sigma=args.sigma,
        rare_fraction=getattr(args, "rare_fraction", 0.05),
        separation_deg=getattr(args, "separation_deg", 60.0),
        drift=getattr(args, "drift", 0.02),
        tokens_per_frame=getattr(args, "tokens_per_frame", 1),
    )


def _config_from_args(args, method=None) -> CompressionConfig:
    return CompressionConfig(
        method=method or args.method,
        budget_ratio=args.ratio,
        budget_k=args.budget,
        block_frames=args.block_frames,
        tokens_per_frame=args.tokens_per_frame,
        seed=args.seed,
        engine=args.engine,
        allow_zero_rows=getattr(args, "allow_zero_rows", False),
        kmeans_iters=getattr(args, "kmeans_iters", 20),
    )


def _selection_record(args, tokens, selection, report) -> dict:
    return {
        "command": "select",
        "method": selection.method,
        "engine": args.engine,
        "n": tokens.n,
        "d": tokens.d,
        "K": len(selection.sorted_indices),
        "ratio": str(args.ratio) if args.ratio is not None else None,
        "block_frames": args.block_frames if args.block_frames is not None else WHOLE,
        "tokens_per_frame": args.tokens_per_frame,
        "seed": args.seed,
        "sorted_indices": selection.sorted_indices,
        "picks": selection.picks,
        "gains": selection.gains,
        "objective_raw": report.objective_raw,
        "objective_shifted": report.objective_shifted,
        "avg_sum_coverage": report.avg_sum_coverage,
        "avg_distance": report.avg_distance,
        "wall_time_s": selection.wall_time_s if args.timing else None,
        "evaluations": selection.evaluations,
        "warnings": selection.warnings,
    }


def _cmd_gen(args) -> int:
    tokens = generate(_spec_from_args(args))
    write_embeddings(args.output, tokens)
    print(f"gen: wrote {args.kind} n={tokens.n} d={tokens.d} seed={args.seed} -> {args.output}")
    return EXIT_OK


def _cmd_select(args) -> int:
    tokens = read_embeddings(args.input)
    config = _config_from_args(args)
    selection = select(tokens, config)
    unit = normalize_rows(tokens, allow_zero_rows=config.allow_zero_rows)
    report = report_for(selection, unit, args.block_frames or WHOLE)
    write_record(args.output, _selection_record(args, tokens, selection, report))
    print(
        f"select[{selection.method}]: n={tokens.n} K={len(selection.sorted_indices)} "
        f"objective_shifted={selection.objective:.6f} "
        f"time={selection.wall_time_s:.3f}s -> {args.output}"
    )
    return EXIT_OK


def _load_indices(path) -> list:
    payload = json.loads(Path(path).read_text())
    if isinstance(payload, dict):
        payload = payload.get("sorted_indices")
        if payload is None:
            raise ConfigError(f"{path}: record has no sorted_indices field")
    if not isinstance(payload, list):
        raise ConfigError(f"{path}: expected a JSON array of indices")
    return [int(i) for i in payload]


def _metrics_entry(unit, subset, method) -> dict:
    from .metrics import averaged_distance_tokens, averaged_sum_coverage_tokens

    entry = {
        "method": method,
        "K": len(subset),
        "indices": sorted(subset),
        "avg_sum_coverage": averaged_sum_coverage_tokens(unit, subset),
    }
    if len(subset) >= 2:
        entry["avg_distance"] = averaged_distance_tokens(unit, subset)
    else:
        raise SubsetTooSmall("averaged distance needs at least two selected tokens")
    return entry


def _cmd_metrics(args) -> int:
    tokens = read_embeddings(args.input)
    unit = normalize_rows(tokens)
    record = {"command": "metrics", "n": tokens.n, "d": tokens.d}

    if args.indices:
        if args.methods:
            raise ConfigError("give either --indices or --methods, not both")
        subset = _load_indices(args.indices)
        if not subset:
            raise EmptySubset("indices file holds an empty subset")
        record["per_method"] = [_metrics_entry(unit, subset, "explicit")]
    elif args.methods:
        if args.ratio is None and args.budget is None:
            raise ConfigError("--methods needs --ratio or --budget")
        entries = []
        for method in args.methods.split(","):
            selection = select(tokens, _config_from_args(args, method=method.strip()))
            entries.append(_metrics_entry(unit, selection.sorted_indices, method.strip()))
        record["per_method"] = entries
    else:
        raise ConfigError("metrics needs --indices or --methods")

    if args.z_normalize:
        entries = record["per_method"]
        if len(entries) < 2:
            raise ConfigError("--z-normalize needs at least two methods")
        normalized = {}
        for key in ("avg_sum_coverage", "avg_distance"):
            values, degenerate = z_normalize([e[key] for e in entries])
            normalized[key] = list(values)
            normalized[f"{key}_degenerate"] = degenerate
        record["z_normalized"] = normalized

    write_record(args.output, record)
    print(f"metrics: n={tokens.n} entries={len(record['per_method'])} -> {args.output}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    from .embeddings import SHIFTED, similarity_matrix

    tokens = read_embeddings(args.input)
    sims = similarity_matrix(tokens, SHIFTED)
    result = exhaustive_optimum(sims, args.budget)
    ratio = verify_bound(sims, args.budget)
    record = {
        "command": "oracle",
        "n": tokens.n,
        "K": args.budget,
        "best_subset": list(result.best_subset),
        "best_value": result.best_value,
        "subsets_evaluated": result.subsets_evaluated,
        "greedy_ratio": ratio,
    }
    write_record(args.output, record)
    print(
        f"oracle: n={tokens.n} K={args.budget} best={result.best_value:.6f} "
        f"greedy_ratio={ratio:.4f} -> {args.output}"
    )
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.input:
        tokens = read_embeddings(args.input)
    else:
        if not (args.kind and args.n and args.d):
            raise ConfigError("bench needs --input or --kind/--n/--d")
        tokens = generate(_spec_from_args(args))
    methods = [m.strip() for m in args.methods.split(",")]
    blocks = [b.strip() for b in str(args.block_frames).split(",")]
    ratios = [_ratio(r.strip()) for r in args.ratios.split(",")]
    if args.reps < 1:
        raise ConfigError("--reps must be >= 1")
    base = CompressionConfig(
        budget_ratio=ratios[0],
        seed=args.seed,
        engine=args.engine,
        tokens_per_frame=args.tokens_per_frame,
    )
    rows = bench_mod.run_grid(tokens, methods, blocks, ratios, reps=args.reps, config=base)
    csv_text = bench_mod.to_csv(rows)
    if args.output:
        Path(args.output).write_text(csv_text)
        print(f"bench: {len(rows)} rows -> {args.output}")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "select": _cmd_select,
    "metrics": _cmd_metrics,
    "oracle": _cmd_oracle,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (MalformedFile, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except FlocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
