"""Command-line front-end: simulate, analyze, oracle.

Exit codes are part of the contract so shell pipelines can branch on
outcomes: 0 success / no violation, 1 unreadable or invalid input,
2 invalid flags or enumeration cap, 3 CHSH violation (S > 2),
4 oracle counterexample.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BellkitError, ConfigError, EnumerationCapError
from .oracle import DEFAULT_CAP, verify_necessary_conditions
from .report import build_analysis_report
from .simulate import SimulationConfig, run_experiment, trial_arrays
from .stats import bell1964_statistic
from .trials import (
    TallyTable,
    ThreeSettingTally,
    load_tally,
    read_trials,
    tally_from_trials,
    validate_tally,
    write_tally,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3
EXIT_COUNTEREXAMPLE = 4

_CHUNK = 1 << 16


def _fraction_flag(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _angles_flag(text: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected 4 comma-separated angles (radians)")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle in {text!r}") from None


def _ints_flag(count: int):
    def parse(text: str) -> tuple[int, ...]:
        parts = text.split(",")
        if len(parts) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated integers")
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer in {text!r}") from None

    return parse


def _default_shards() -> int:
    raw = os.environ.get("BELLKIT_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellkit",
        description="Simulate and analyze CHSH/Bell-test experiments.",
    )
    parser.add_argument("--version", action="version", version=f"bellkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Generate a trial stream and tally")
    sim.add_argument("--config", type=Path, help="JSON config document; flags override")
    sim.add_argument("--model", choices=["quantum", "lhv"])
    sim.add_argument(
        "--angles",
        type=_angles_flag,
        metavar="A0,A1,B0,B1",
        help="station-1 and station-2 measurement angles in radians",
    )
    sim.add_argument("--trials", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--settings", choices=["uniform", "round-robin"])
    sim.add_argument("--flip-station2", action="store_true", default=None)
    sim.add_argument("--out", type=Path, required=True, help="tally JSON output path")
    sim.add_argument("--emit-trials", type=Path, help="also stream trials to this path")
    sim.add_argument("--emit-format", choices=["jsonl", "csv"], default="jsonl")
    sim.add_argument("--shards", type=int, default=None,
                     help="worker shard count (default: BELLKIT_THREADS or 1)")
    sim.set_defaults(func=cmd_simulate)

    ana = sub.add_parser("analyze", help="Full statistical report for a tally or trial file")
    src = ana.add_mutually_exclusive_group(required=True)
    src.add_argument("--tally", type=Path, help="tally JSON file")
    src.add_argument("--trials", type=Path, help="trial stream file")
    ana.add_argument("--format", choices=["jsonl", "csv"], default="jsonl",
                     help="trial file format (with --trials)")
    ana.add_argument("--header", action="store_true",
                     help="skip one header line (csv input)")
    ana.add_argument("--epsilon", type=_fraction_flag,
                     help="requested no-signalling tolerance")
    ana.add_argument("--delta", type=_fraction_flag,
                     help="requested violation magnitude for the bound thresholds")
    ana.add_argument("--bell1964", type=_ints_flag(6),
                     metavar="n_ac,N_ac,n_ba,N_ba,n_bc,N_bc",
                     help="include the three-setting statistics for these counts")
    ana.set_defaults(func=cmd_analyze)

    orc = sub.add_parser("oracle", help="Exhaustively verify the necessity conditions")
    orc.add_argument("--n-per-setting", type=int, required=True)
    orc.add_argument("--cap", type=int, default=DEFAULT_CAP,
                     help=f"enumeration size guard (default {DEFAULT_CAP})")
    orc.set_defaults(func=cmd_oracle)
    return parser


def _assemble_config(args: argparse.Namespace) -> SimulationConfig:
    data: dict = {}
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config document must be a JSON object")
        data.update(loaded)
    if args.model is not None:
        data["model"] = args.model
    if args.angles is not None:
        data["theta_a0"], data["theta_a1"], data["theta_b0"], data["theta_b1"] = args.angles
    if args.trials is not None:
        data["trials"] = args.trials
    if args.seed is not None:
        data["seed"] = args.seed
    if args.settings is not None:
        data["setting_scheme"] = (
            "uniform_random" if args.settings == "uniform" else "round_robin"
        )
    if args.flip_station2 is not None:
        data["flip_station2"] = args.flip_station2
    return SimulationConfig.from_dict(data)


def _emit_trials(cfg: SimulationConfig, path: Path, fmt: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for lo in range(0, cfg.trials, _CHUNK):
            hi = min(lo + _CHUNK, cfg.trials)
            s1, s2, o1, o2 = trial_arrays(cfg, lo, hi)
            if fmt == "jsonl":
                lines = (
                    '{"s1":%d,"s2":%d,"o1":%d,"o2":%d}' % row
                    for row in zip(s1.tolist(), s2.tolist(), o1.tolist(), o2.tolist())
                )
            else:
                lines = (
                    "%d,%d,%d,%d" % row
                    for row in zip(s1.tolist(), s2.tolist(), o1.tolist(), o2.tolist())
                )
            handle.write("\n".join(lines))
            handle.write("\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        cfg = _assemble_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    shards = args.shards if args.shards is not None else _default_shards()
    if shards < 1:
        print("error: --shards must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    run = run_experiment(cfg, shards=shards)
    try:
        if args.emit_trials is not None:
            _emit_trials(cfg, args.emit_trials, args.emit_format)
        write_tally(args.out, run.tally, seed=cfg.seed)
    except OSError as exc:
        print(f"error: write failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    summary = {
        "out": str(args.out),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "model": cfg.model,
        "tally": run.tally.to_dict(),
    }
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _load_input_tally(args: argparse.Namespace) -> tuple[TallyTable, Path, int | None]:
    if args.tally is not None:
        tally, extras = load_tally(args.tally)
        seed = extras.get("seed")
        return tally, args.tally, seed if isinstance(seed, int) else None
    records = read_trials(args.trials, format=args.format, header=args.header)
    return tally_from_trials(records), args.trials, None


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.header and args.format != "csv":
        print("error: --header applies to csv input only", file=sys.stderr)
        return EXIT_USAGE
    try:
        tally, path, seed = _load_input_tally(args)
    except (BellkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    check = validate_tally(tally)
    if not check.ok:
        print(f"error: invalid tally: {'; '.join(check.errors)}", file=sys.stderr)
        return EXIT_INPUT
    if check.empty_cells:
        print(f"error: empty setting cell '{check.empty_cells[0]}'", file=sys.stderr)
        return EXIT_INPUT
    bell = None
    if args.bell1964 is not None:
        n_ac, big_ac, n_ba, big_ba, n_bc, big_bc = args.bell1964
        try:
            bell = bell1964_statistic(
                ThreeSettingTally(
                    n_ac=n_ac, n_ba=n_ba, n_bc=n_bc,
                    N_ac=big_ac, N_ba=big_ba, N_bc=big_bc,
                )
            )
        except BellkitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    report = build_analysis_report(
        tally,
        epsilon=args.epsilon,
        delta=args.delta,
        bell1964=bell,
        input_path=str(path),
        input_sha256=hashlib.sha256(Path(path).read_bytes()).hexdigest(),
        seed=seed,
    )
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_VIOLATION if report.chsh.violated else EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        report = verify_necessary_conditions(args.n_per_setting, cap=args.cap)
    except (EnumerationCapError, BellkitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
