"""Command-line entry point: ``olt <command> ...``.

Exit status is 0 on success, 1 when a verdict fails (bad pattern, inconsistent
transcript, failing acceptance check) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import boolean_testers as bt
from ..f2core import BooleanFunctionTable, distance_to_degree_d, distance_to_linearity
from ..oracle import MalformedTranscript, parse_transcript, replay
from ..seq_testers import RealSequence, distance_to_lipschitz, distance_to_sortedness
from .runner import ConfigError, load_config, run_experiment, write_reports
from .suites import DEFAULT_SEED, AcceptanceSuite, resolve


class UsageError(Exception):
    pass


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # accepted both before and after the subcommand
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="master seed (else config or OLT_SEED)")
    parser.add_argument("--trials", type=int, default=default, help="override the trial count")
    parser.add_argument("--out", choices=("csv", "jsonl"), default=default,
                        help="report format (run: jsonl unless csv; suite: text lines unless jsonl)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="olt", description="online manipulation-resilient testing lab")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        _global_options(sp, suppress=True)
        return sp

    sp = add("run", help="run one experiment from a TOML config")
    sp.add_argument("config")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output", help="write the report here instead of stdout")

    sp = add("check-pattern", help="goodness verdict for a testing pattern")
    sp.add_argument("--d", type=int, required=True, help="degree of the target property")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--chain", type=int, metavar="S", help="chain of cubes with S chain columns")
    g.add_argument("--cube", action="store_true", help="affine (d+1)-cube")
    g.add_argument("--file", help="matrix file: one row of 0/1 characters per line")

    sp = add("distance", help="exact distance of an input to a property")
    sp.add_argument("--kind", required=True, choices=("linearity", "degree", "sortedness", "lipschitz"))
    sp.add_argument("--d", type=int, default=None, help="degree bound for --kind degree")
    sp.add_argument("input", help="file path, '-' for stdin, or the input text itself")

    sp = add("replay", help="audit a transcript against its input")
    sp.add_argument("transcript")
    sp.add_argument("--input", help="input file (default: the header's input= entry)")

    sp = add("suite", help="run acceptance checks: all, a number, or a list such as 4,5")
    sp.add_argument("name")
    return p


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    if path.is_file():
        return path.read_text()
    return arg


def _load_input(text: str):
    text = text.strip()
    if text.startswith("n="):
        return BooleanFunctionTable.from_hex(text)
    return RealSequence.from_text(text)


def cmd_run(args, out) -> int:
    cfg = load_config(args.config, args.seed, args.trials)
    rep = run_experiment(cfg, workers=args.workers)
    text = write_reports([rep], args.output or cfg.out, args.out or "jsonl")
    if not (args.output or cfg.out):
        out.write(text)
    return 0


def cmd_check_pattern(args, out) -> int:
    d = args.d
    try:
        if args.chain is not None:
            if d < 1:
                raise UsageError("--chain needs --d >= 1")
            if args.chain < 1 or args.chain % 2 == 0:
                raise UsageError("--chain needs a positive odd number of chain columns")
            X = bt.chain_of_cubes(d - 1, args.chain)
        elif args.cube:
            X = bt.affine_cube(d)
        else:
            rows = [ln.strip() for ln in _read_text(args.file).splitlines() if ln.strip()]
            if not rows or any(set(r) - {"0", "1"} for r in rows):
                raise UsageError("matrix file must hold rows of 0/1 characters")
            X = bt.PatternMatrix.from_bits([[int(c) for c in r] for r in rows])
    except ValueError as exc:
        # repeated rows or rank deficiency: not a testing pattern at all
        out.write(f"NOT GOOD for P_{d}: {exc}\n")
        return 1
    rep = bt.goodness_report(X, d)
    if rep["good"]:
        out.write(f"GOOD for P_{d}\n")
        return 0
    why = (f"phi nonzero on subset {rep['violating_subset']}" if not rep["complete"]
           else f"phi vanishes on every subset of size {d + 1}")
    out.write(f"NOT GOOD for P_{d}: {why}\n")
    return 1


def cmd_distance(args, out) -> int:
    f = _load_input(_read_text(args.input))
    boolean = isinstance(f, BooleanFunctionTable)
    if args.kind in ("linearity", "degree") and not boolean:
        raise UsageError(f"--kind {args.kind} needs a truth table 'n=<n>:<hex>'")
    if args.kind in ("sortedness", "lipschitz") and boolean:
        raise UsageError(f"--kind {args.kind} needs a sequence")
    if args.kind == "linearity":
        dist = distance_to_linearity(f)
    elif args.kind == "degree":
        if args.d is None:
            raise UsageError("--kind degree needs --d")
        dist = distance_to_degree_d(f, args.d)
    elif args.kind == "sortedness":
        dist = distance_to_sortedness(f)
    else:
        dist = distance_to_lipschitz(f)
    out.write(f"{dist}\n")
    return 0


def cmd_replay(args, out) -> int:
    path = Path(args.transcript)
    text = path.read_text()
    header, events = parse_transcript(text)
    src = args.input or header.get("input")
    if src is None:
        raise UsageError("transcript names no input; pass --input")
    src_path = Path(src)
    if not src_path.is_absolute() and args.input is None:
        src_path = path.parent / src_path
    base = _load_input(src_path.read_text())
    verdict = replay((header, events), base)
    if verdict:
        out.write(f"consistent ({len(events)} events)\n")
        return 0
    out.write(f"violation at event {verdict.event}: {verdict.reason}\n")
    return 1


def cmd_suite(args, out) -> int:
    numbers = resolve(args.name)
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    suite = AcceptanceSuite(seed, log=lambda m: print(m, file=sys.stderr, flush=True))
    ok = True
    for k in numbers:
        res = suite.run(k)
        ok &= res.passed
        if args.out == "jsonl":
            out.write(json.dumps({"criterion": k, "title": res.title, "passed": res.passed,
                                  "detail": res.detail, "seed": seed}, sort_keys=True) + "\n")
        else:
            out.write(res.line() + "\n")
        out.flush()
    return 0 if ok else 1


COMMANDS = {
    "run": cmd_run,
    "check-pattern": cmd_check_pattern,
    "distance": cmd_distance,
    "replay": cmd_replay,
    "suite": cmd_suite,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ConfigError, MalformedTranscript, FileNotFoundError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"olt {args.command}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
