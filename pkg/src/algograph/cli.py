"""Command-line entry point.

    algograph validate <config>   check a config file, report problems
    algograph run <config>        solve one instance, print answer + costs
    algograph sweep <config>      run the full sweep, write rows + summary CSV
    algograph predict <config>    write the analytic prediction CSV

Exit codes: 0 success, 2 config error, 3 backend error, 4 too many failed
trials.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import SweepConfig, load_config
from .costs import trace_costs
from .errors import (
    BackendError,
    ExecutionError,
    InvalidConfigurationError,
    PartialFailureError,
)
from .instances import generate_instance
from .seeding import derive_trial_seed, mix
from .sweep import (
    PREDICT_COLUMNS,
    predict,
    rows_to_csv,
    run_sweep,
    summarize,
    summary_columns,
    write_csv,
)
from .tasks import SOLVERS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3
EXIT_PARTIAL = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algograph",
        description="Simulate and sweep LLM-based parallel-decomposition algorithms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("validate", "validate a sweep config file"),
        ("run", "solve a single instance and print the cost report"),
        ("sweep", "run the configured sweep and write CSV output"),
        ("predict", "write analytic cost/latency predictions for the grid"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to the sweep config file")
        cmd.add_argument("--out", help="output CSV path (overrides config)")
        cmd.add_argument("--seed", type=int, help="override the base seed")
        cmd.add_argument("--backend", help="override backend: mock:<profile> or http:<url>")
        cmd.add_argument("--workers", type=int, help="concurrent trial workers")
        cmd.add_argument("--dump-instances", help="directory for replayable instance dumps")
    return parser


def apply_overrides(config: SweepConfig, args) -> SweepConfig:
    updates = {}
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.dump_instances is not None:
        updates["dump_instances"] = args.dump_instances
    if args.out is not None:
        updates["out"] = args.out
    if args.backend is not None:
        kind, _, rest = args.backend.partition(":")
        if kind == "mock":
            updates["backend_kind"] = "mock"
            updates["profile_name"] = rest or "exact"
        elif kind == "http":
            updates["backend_kind"] = "http"
            updates["http_url"] = rest
        else:
            raise InvalidConfigurationError(
                f"bad --backend {args.backend!r}; use mock:<profile> or http:<url>"
            )
    return dataclasses.replace(config, **updates) if updates else config


def cmd_validate(config: SweepConfig) -> int:
    print(f"ok: {config.source_path}")
    print(f"  task={config.task} mode={config.mode} grid={config.grid()} trials={config.trials}")
    print(f"  backend={config.backend_kind} cost={config.cost.functions.kind} p={config.cost.p}")
    return EXIT_OK


def cmd_run(config: SweepConfig) -> int:
    n, m = config.grid()[0]
    trial_seed = derive_trial_seed(config.base_seed, n, m, 0)
    options = {"needle_present": config.needle_present} if config.task == "retrieval" else {}
    instance = generate_instance(config.task, n, mix(trial_seed, 1), **options)
    backend = config.make_backend()
    kwargs = {"merge_mode": config.merge_mode} if config.task == "sorting" else {}
    answer, trace = SOLVERS[config.task](
        instance, m, backend, model=config.cost, seed=mix(trial_seed, 2), **kwargs
    )
    report = trace_costs(trace, config.cost)
    print(f"task={config.task} n={n} m={m} seed={trial_seed}")
    print(f"answer: {answer}")
    print(f"truth:  {instance.truth}")
    print(
        f"calls={report.call_count} prefill={report.prefill_tokens_total}"
        f" decode={report.decode_tokens_total}"
    )
    print(
        f"latency: sequential={report.latency_sequential:.1f}"
        f" p={config.cost.p}: {report.latency_parallel_p:.1f}"
        f" inf={report.latency_parallel_inf:.1f}"
    )
    return EXIT_OK


def cmd_sweep(config: SweepConfig) -> int:
    result = run_sweep(config)
    out = Path(config.out or f"{config.task}_{config.mode}.csv")
    write_csv(result.rows, result.columns(), out)
    summary_path = out.with_name(out.stem + "_summary" + out.suffix)
    write_csv(summarize(result), summary_columns(result), summary_path)
    print(f"wrote {len(result.rows)} rows to {out}")
    print(f"wrote summary to {summary_path}")
    return EXIT_OK


def cmd_predict(config: SweepConfig) -> int:
    rows = predict(config)
    out = Path(config.out or f"{config.task}_predictions.csv")
    write_csv(rows, PREDICT_COLUMNS, out)
    print(f"wrote {len(rows)} prediction rows to {out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        config = apply_overrides(config, args)
        if args.command == "validate":
            return cmd_validate(config)
        if args.command == "run":
            return cmd_run(config)
        if args.command == "sweep":
            return cmd_sweep(config)
        return cmd_predict(config)
    except InvalidConfigurationError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except PartialFailureError as err:
        print(f"sweep error: {err}", file=sys.stderr)
        return EXIT_PARTIAL
    except (BackendError, ExecutionError) as err:
        print(f"backend error: {err}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
