"""Command-line entry point: ``tbteq run | sweep | oracle-check | complexity``.

Exit codes: 0 success, 2 configuration or usage error, 3 oracle failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ..errors import CapacityError, ConfigError, DomainError, ParseError, UsageError
from .complexity import complexity_table
from .config import load_config, paper_scale
from .metrics import ber, nmse_curve
from .sweep import run_sweep
from .trial import run_trial, write_record_csv

EXIT_OK, EXIT_CONFIG, EXIT_ORACLE = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tbteq", description="Tree-based adaptive piecewise-linear equalizer experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one trial and write its per-sample CSV")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int, default=None, help="trial seed (default: config seed)")
    run.add_argument("--out", default=None)
    run.add_argument("--paper-scale", action="store_true")

    sweep = sub.add_parser("sweep", help="run the SNR x variant x depth x trial grid")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--paper-scale", action="store_true")

    oracle = sub.add_parser("oracle-check", help="run the combinatorics and combination oracles")
    oracle.add_argument("--max-depth", type=int, default=4)
    oracle.add_argument("--states", type=int, default=20)

    cx = sub.add_parser("complexity", help="count arithmetic operations per sample across depths")
    cx.add_argument("--h", type=int, default=8)
    cx.add_argument("--depths", default="0,1,2,3,4,5")
    return parser


def _load(args):
    config = load_config(args.config)
    return paper_scale(config) if args.paper_scale else config


def cmd_run(args) -> int:
    config = _load(args)
    seed = config.seed if args.seed is None else args.seed
    record = run_trial(config, seed)
    out = args.out or config.output_path
    write_record_csv(record, out)
    print(f"{record.variant} d={record.depth} seed={seed}: ber={ber(record):.6g} "
          f"final_nmse={nmse_curve(record)[-1]:.6g} -> {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load(args)
    out = args.out or config.output_path
    rows = run_sweep(config, out=out, jobs=args.jobs)
    print(f"{len(rows)} rows -> {out}")
    return EXIT_OK


def oracle_check(max_depth: int = 4, states: int = 20, seed: int = 0) -> list[str]:
    """Run the exact-count and combination oracles; returns failure messages."""
    from ..equalizers import combine_direct, combine_via_models_oracle, compute_indicators, init_state
    from ..equalizers import node_estimates, separator_outputs
    from ..tree import alpha, build_rho_table, enumerate_models, oracle_rho_matrix

    failures = []
    for d in range(1, max_depth + 1):
        if len(enumerate_models(d)) != alpha(d):
            failures.append(f"depth {d}: {len(enumerate_models(d))} models, alpha = {alpha(d)}")
        table = build_rho_table(d, validate=False).values
        if not np.array_equal(table, oracle_rho_matrix(d)):
            failures.append(f"depth {d}: closed-form rho differs from enumeration")
    rng = np.random.default_rng(seed)
    for d in range(1, min(max_depth, 3) + 1):
        for _ in range(states):
            h = int(rng.integers(1, 6))
            st = init_state(d, h, init="random", seed=int(rng.integers(2**31)))
            st.filters[:] = rng.standard_normal(st.filters.shape)
            st.node_weights[:] = rng.standard_normal(st.node_weights.shape)
            r = np.append(rng.standard_normal(h), 1.0)
            ids = compute_indicators(separator_outputs(st, r))
            direct = combine_direct(ids, node_estimates(st, r), st.rho @ st.node_weights)
            brute = combine_via_models_oracle(st, r)
            if abs(direct - brute) > 1e-10 * max(1.0, abs(brute)):
                failures.append(f"depth {d}: direct {direct!r} vs enumerated {brute!r}")
    return failures


def cmd_oracle(args) -> int:
    failures = oracle_check(args.max_depth, args.states)
    for msg in failures:
        print(f"FAIL {msg}")
    if failures:
        return EXIT_ORACLE
    print("oracle-check: all oracles agree")
    return EXIT_OK


def cmd_complexity(args) -> int:
    try:
        depths = tuple(int(x) for x in args.depths.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --depths: {args.depths!r}") from exc
    print("depth,nodes,h,ops_per_sample,ratio")
    for row in complexity_table(depths, args.h):
        ratio = "" if row.ratio is None else f"{row.ratio:.4f}"
        print(f"{row.depth},{row.nodes},{row.h},{row.ops_per_sample:.1f},{ratio}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "oracle-check": cmd_oracle,
            "complexity": cmd_complexity}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"tbteq: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UsageError, ParseError, DomainError, CapacityError) as exc:
        print(f"tbteq: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
