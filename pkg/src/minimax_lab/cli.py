"""Command-line entry point.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage error,
3 invalid configuration, 4 I/O failure, 5 training diverged.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .experiments import (
    EXPERIMENTS,
    ConfigError,
    load_config_file,
    make_config,
    run_experiment,
    verify_summary,
    write_outputs,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CONFIG, EXIT_IO, EXIT_DIVERGED = range(6)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minimax-lab", description="Fictitious play and GAN training experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("experiment", choices=sorted(EXPERIMENTS))
    run.add_argument("--config", type=Path, help="JSON parameter file")
    run.add_argument("--seed", type=int, help="master seed (overrides the config file)")
    run.add_argument("--out", type=Path, help="output directory (default: runs/<experiment>)")
    run.add_argument("--svg", action="store_true", help="also write SVG plots")
    sub.add_parser("list", help="list experiments and their default parameters")
    ver = sub.add_parser("verify", help="re-check an existing summary.json against current thresholds")
    ver.add_argument("--out", type=Path, required=True)
    return p


def _cmd_list() -> int:
    for name, exp in EXPERIMENTS.items():
        defaults = ", ".join(f"{k}={v.default!r}" for k, v in exp.params.items())
        print(f"{name:<20} {exp.description}\n{'':<20} {defaults}")
    return EXIT_OK


def _cmd_run(args) -> int:
    from .neural import TrainingDivergedError

    params, seed = {}, None
    try:
        if args.config is not None:
            params, seed = load_config_file(args.config, args.experiment)
        if args.seed is not None:
            seed = args.seed
        cfg = make_config(args.experiment, params, 0 if seed is None else seed, args.svg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    t0 = time.perf_counter()
    try:
        result = run_experiment(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrainingDivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    elapsed = time.perf_counter() - t0

    out = args.out or Path("runs") / cfg.name
    try:
        write_outputs(result, out)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(result.report)
    print(f"outputs in {out} ({elapsed:.2f} s)", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAILED


def _cmd_verify(args) -> int:
    try:
        name, verdicts = verify_summary(args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for key in sorted(verdicts):
        v = verdicts[key]
        print(f"[{'RECORDED' if v is None else 'PASS' if v else 'FAIL'}] {name}.{key}")
    return EXIT_OK if all(v is not False for v in verdicts.values()) else EXIT_FAILED


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        return _cmd_list()
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
