"""Command line entry point: ``kcbcolor {run,verify,sweep,chromatic}``.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .adversaries import STRATEGIES, StrategyError
from .algorithms import ALGORITHMS
from .graph_core import InvalidStepError
from .harness import (
    MAX_UNIVERSAL_T,
    PARAM_OF,
    default_output_dir,
    load_trace,
    rows_to_csv,
    rows_to_json,
    run_matchup,
    save_trace,
    sweep,
    verify_trace,
)
from .trace import MatchupError, TraceFormatError
from .verification import BudgetExceeded, chromatic_number

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """'3' -> [3]; '1-8' -> [1..8]; '2,4,10' -> [2, 4, 10]."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part[1:]:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"bad integer range {text!r}") from None
    return out


def _params(args, strategy: str, value: Optional[int] = None) -> dict:
    keys = STRATEGIES[strategy][1]
    params = {}
    for k in keys:
        raw = getattr(args, k, None)
        if k == "ck_free":
            if args.ck_free is not None:
                params[k] = args.ck_free
            continue
        if raw is None:
            raise UsageError(f"--{k.replace('_', '-')} is required for strategy {strategy}")
        params[k] = value if value is not None else raw
    return params


def _check_budget(strategy: str, ts, allow_large: bool) -> None:
    if strategy == "universal" and not allow_large and max(ts) > MAX_UNIVERSAL_T:
        raise UsageError(f"t > {MAX_UNIVERSAL_T} builds a huge graph; pass --allow-large to insist")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kcbcolor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def strategy_args(sp, ranged: bool):
        kind = str if ranged else int
        sp.add_argument("--strategy", required=True, choices=sorted(STRATEGIES))
        sp.add_argument("--algorithm", required=True, choices=sorted(ALGORITHMS))
        sp.add_argument("--kappa", type=kind)
        sp.add_argument("--t", type=kind)
        sp.add_argument("--rounds", type=kind)
        sp.add_argument("--n", type=kind)
        sp.add_argument("--ck-free", type=int)
        sp.add_argument("--seed", type=kind, help="seed for the baseline algorithm")
        sp.add_argument("--allow-large", action="store_true")

    run = sub.add_parser("run", help="play one matchup and write its trace")
    strategy_args(run, ranged=False)
    run.add_argument("--out", help="trace file (default: <strategy>-<algorithm>.jsonl in the output dir)")
    run.add_argument("--verify", action="store_true", help="verify the trace after writing it")

    ver = sub.add_parser("verify", help="check a trace file")
    ver.add_argument("trace")
    ver.add_argument("--quiet", action="store_true")

    sw = sub.add_parser("sweep", help="run a strategy over a parameter range")
    strategy_args(sw, ranged=True)
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--out")
    sw.add_argument("--jobs", type=int, default=1)

    ch = sub.add_parser("chromatic", help="exact chromatic number of a trace's graph")
    ch.add_argument("trace")
    ch.add_argument("--limit", type=int, default=20)
    ch.add_argument("--budget", type=int, default=2_000_000)
    return p


def cmd_run(args) -> int:
    if args.strategy == "universal":
        _check_budget("universal", [args.t or 0], args.allow_large)
    trace = run_matchup(args.strategy, args.algorithm, _params(args, args.strategy), args.seed)
    out = Path(args.out) if args.out else default_output_dir() / f"{args.strategy}-{args.algorithm}.jsonl"
    save_trace(trace, out)
    s = trace.summary
    print(f"{out}: {s['vertices']} vertices, {s['bins_used']} bins, max {s['max_components']} components")
    if args.verify:
        report = verify_trace(trace)
        print("\n".join(report.lines()))
        return OK if report.ok else FAILED
    return OK


def cmd_verify(args) -> int:
    report = verify_trace(args.trace)
    if not args.quiet:
        print("\n".join(report.lines()))
    if "parse" in report.failed():
        return USAGE
    return OK if report.ok else FAILED


def cmd_sweep(args) -> int:
    key = PARAM_OF[args.strategy]
    raw = getattr(args, key)
    if raw is None:
        raise UsageError(f"--{key} range is required for strategy {args.strategy}")
    values = parse_range(raw)
    _check_budget(args.strategy, values, args.allow_large)
    seeds = parse_range(args.seed) if args.seed is not None else [None]
    extra = {"ck_free": args.ck_free} if args.ck_free is not None else {}
    rows = sweep(args.strategy, args.algorithm, values, seeds, extra, jobs=args.jobs)
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_chromatic(args) -> int:
    trace = load_trace(args.trace)
    try:
        chi = chromatic_number(trace.graph(), args.limit, args.budget)
    except BudgetExceeded as exc:
        print(f"indeterminate: {exc}")
        return FAILED
    print(f"chi > {args.limit}" if chi is None else f"chi = {chi}")
    return OK


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "sweep": cmd_sweep, "chromatic": cmd_chromatic}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, StrategyError, ValueError) as exc:
        if isinstance(exc, (TraceFormatError, InvalidStepError)):
            print(f"error: malformed trace: {exc}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except MatchupError as exc:
        print(f"run error: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
