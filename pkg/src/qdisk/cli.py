"""Command-line entry point: scenario runner, protocol shortcuts, rendering.

Exit codes: 0 ok (soundness breakdowns are reported, not fatal), 1 parse
error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .scenario import DualTrackSession, ScenarioParseError, ScenarioRuntimeError, parse_scenario
from .verify import format_report_table


def run_scenario(script_text: str, seed: int, out_dir: Path, name: str = "scenario") -> int:
    """Execute a script on both tracks and write transcript/audit artifacts."""
    try:
        scenario = parse_scenario(script_text, name)
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1

    session = DualTrackSession(seed=seed)
    status = 0
    try:
        for command in scenario.commands:
            session.execute(command)
    except ScenarioRuntimeError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        status = 2

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "transcript.txt").write_text(session.transcript_text(), encoding="utf-8")
    (out_dir / "audit.txt").write_text(format_report_table(session.reports) + "\n", encoding="utf-8")
    for filename, content in session.artifacts.items():
        (out_dir / filename).write_text(content, encoding="utf-8")

    print(format_report_table(session.reports))
    return status


def _scenario_from_args(args: argparse.Namespace) -> str:
    if args.cmd == "bb84":
        return f"bb84 {args.rounds}{' eve' if args.eve else ''}\n"
    if args.cmd == "teleport":
        minus = " -" if args.minus else ""
        return f"teleport {args.mode} {args.blue}{minus}\n"
    if args.cmd == "render":
        lines = []
        if args.pair is not None:
            a00, a01, a11, a10 = args.pair
            lines.append(f"pair q0 q1 {a00} {a01} {a11} {a10}")
        else:
            blue, orange = args.qubit
            minus = " -" if args.minus else ""
            lines.append(f"qubit q0 {blue} {orange}{minus}")
        lines.append(f"render {args.fmt} {args.file} {args.layout}")
        return "\n".join(lines) + "\n"
    raise AssertionError(args.cmd)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdisk", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for all random draws")
    parser.add_argument("--out", type=Path, default=Path("out"), help="artifact directory")
    sub = parser.add_subparsers(dest="cmd", required=True)

    run_p = sub.add_parser("run", help="run a scenario script")
    run_p.add_argument("script", type=Path)

    bb84_p = sub.add_parser("bb84", help="run BB84 rounds")
    bb84_p.add_argument("rounds", type=int)
    bb84_p.add_argument("--eve", action="store_true", help="intercept-resend eavesdropper")

    tele_p = sub.add_parser("teleport", help="run a teleportation session")
    tele_p.add_argument("mode", choices=["classical", "full"])
    tele_p.add_argument("blue", type=float, help="blue fraction of the input qubit")
    tele_p.add_argument("--minus", action="store_true", help="negative orange sign")

    render_p = sub.add_parser("render", help="render a freshly encoded state")
    group = render_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--qubit", nargs=2, type=float, metavar=("BLUE", "ORANGE"))
    group.add_argument("--pair", nargs=4, type=float, metavar=("A00", "A01", "A11", "A10"))
    render_p.add_argument("--minus", action="store_true")
    render_p.add_argument("--fmt", choices=["svg", "text"], default="svg")
    render_p.add_argument("--layout", choices=["side", "stacked"], default="side")
    render_p.add_argument("--file", default="disk.svg")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "run":
        try:
            text = args.script.read_text(encoding="utf-8")
        except OSError as exc:
            print(f"cannot read script: {exc}", file=sys.stderr)
            return 1
        return run_scenario(text, args.seed, args.out, name=args.script.stem)
    return run_scenario(_scenario_from_args(args), args.seed, args.out, name=args.cmd)


if __name__ == "__main__":
    sys.exit(main())
