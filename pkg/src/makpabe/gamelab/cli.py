"""gamelab: play the selective-security game against the proof simulator.

    gamelab run --trials 1000 --adversary coin --seed 1f2e3d
    gamelab run --trials 200 --adversary omniscient --report out/
    gamelab audit --instances 50

Summaries are printed as one key=value line so they stay grep- and
spreadsheet-friendly; --report additionally renders CSV + PNG files.
"""

from __future__ import annotations

import argparse
import random
import secrets
import sys

from ..errors import MakpabeError
from ..groups import DEFAULT_DEBUG_PRIME
from ..policy import Universe
from .adversaries import ADVERSARIES
from .audit import randomized_audit_instance
from .game import DEFAULT_UNIVERSE, run_selective_game

__all__ = ["main"]


def _parse_seed(text):
    if text is None:
        return secrets.randbits(64)
    try:
        return int(text, 16)
    except ValueError:
        raise SystemExit(f"error: --seed wants hex digits, got {text!r}")


def _kv_line(pairs) -> str:
    return " ".join(f"{k}={v}" for k, v in pairs)


def _fmt(x) -> str:
    return f"{x:.6f}" if isinstance(x, float) else str(x)


def cmd_run(args) -> int:
    seed = _parse_seed(args.seed)
    universe = Universe(args.universe.split(",") if args.universe
                        else DEFAULT_UNIVERSE)
    adversary = ADVERSARIES[args.adversary]()
    result = run_selective_game(
        adversary, trials=args.trials, master_seed=seed, prime=args.prime,
        universe=universe, transcript_path=args.transcript)
    summary = result.summary()
    summary["within_3sigma"] = "yes" if result.within_sigma(3.0) else "no"
    print(_kv_line((k, _fmt(v)) for k, v in summary.items()))
    if args.report:
        from .report import write_report

        paths = write_report(result, args.report)
        for name, path in sorted(paths.items()):
            print(f"wrote {name}: {path}")
    return 0


def cmd_audit(args) -> int:
    seed = _parse_seed(args.seed)
    rng = random.Random(seed)
    real = 0
    for _ in range(args.instances):
        report = randomized_audit_instance(args.prime, rng)
        real += report["real"]
    print(_kv_line([
        ("instances", args.instances), ("ok", args.instances),
        ("real_t", real), ("random_t", args.instances - real),
        ("prime", args.prime), ("seed", format(seed, "x"))]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gamelab",
        description="selective-security game harness (debug backend only)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="play the game for N trials")
    run.add_argument("--trials", type=int, default=1000)
    run.add_argument("--prime", type=int, default=DEFAULT_DEBUG_PRIME)
    run.add_argument("--adversary", choices=sorted(ADVERSARIES), default="coin")
    run.add_argument("--seed", help="master seed, hex")
    run.add_argument("--transcript", metavar="OUT.JSONL",
                     help="write one JSON record per trial")
    run.add_argument("--report", metavar="DIR",
                     help="write trials.csv, summary.json and PNG figures")
    run.add_argument("--universe", help="comma-separated attribute names")
    run.set_defaults(fn=cmd_run)

    audit = sub.add_parser(
        "audit", help="audit randomized simulator instances")
    audit.add_argument("--instances", type=int, default=20)
    audit.add_argument("--prime", type=int, default=DEFAULT_DEBUG_PRIME)
    audit.add_argument("--seed", help="rng seed, hex")
    audit.set_defaults(fn=cmd_audit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except MakpabeError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
