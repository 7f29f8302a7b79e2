"""Command-line front end.

Exit codes: 0 when every verification passes, 1 when one fails, 2 on bad
input (unreadable or malformed files, schema violations, inconsistent shapes).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .demos import DEMOS, demo_problem
from .errors import InputError
from .runner import build_report, run_problem, settings_for

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_COMMAND_KINDS = {
    "framing check": "framing",
    "framing generate": "generator",
    "ovm check": "ovm",
    "dilate": "dilation",
    "naimark": "naimark",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-rel", type=float, default=None, help="relative tolerance (default 1e-9)")
    p.add_argument("--tol-abs", type=float, default=None, help="absolute tolerance (default 1e-12)")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument("--trials", type=int, default=None,
                   help="random rearrangement trials (default 20)")
    p.add_argument("--out", type=Path, default=None,
                   help="write the JSON report here instead of stdout")
    p.add_argument("--quiet", action="store_true", help="suppress the summary on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framings",
        description="Verify framings, operator valued measures and dilations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fr = sub.add_parser("framing", help="framing checks")
    frsub = fr.add_subparsers(dest="action", required=True)
    for action, text in (("check", "F_max and reconstruction"),
                         ("generate", "framing generated by operators A, B")):
        p = frsub.add_parser(action, help=text)
        p.add_argument("input", type=Path)
        _common(p)

    ovm = sub.add_parser("ovm", help="operator valued measure checks")
    ovmsub = ovm.add_subparsers(dest="action", required=True)
    p = ovmsub.add_parser("check", help="totality, transform law, optional Naimark")
    p.add_argument("input", type=Path)
    _common(p)

    for name, text in (("dilate", "build and verify the dilation of an operator map"),
                       ("naimark", "Naimark dilation of a POVM")):
        p = sub.add_parser(name, help=text)
        p.add_argument("input", type=Path)
        _common(p)

    p = sub.add_parser("demo", help="run a bundled example")
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--emit", type=Path, default=None,
                   help="also write the demo's problem file here")
    _common(p)
    return parser


def _load(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    log = (lambda msg: None) if args.quiet else (lambda msg: print(msg, file=sys.stderr))

    if args.command == "demo":
        command = f"demo {args.name}"
    elif args.command in ("framing", "ovm"):
        command = f"{args.command} {args.action}"
    else:
        command = args.command

    try:
        if args.command == "demo":
            problem = demo_problem(args.name)
            if args.emit is not None:
                args.emit.write_text(json.dumps(problem, indent=1) + "\n", encoding="utf-8")
        else:
            problem = _load(args.input)
            expected = _COMMAND_KINDS[command]
            if problem.get("kind") != expected:
                raise InputError(
                    f"$.kind: `{command}` expects kind {expected!r}, got {problem.get('kind')!r}"
                )
        settings = settings_for(problem, args.tol_rel, args.tol_abs, args.seed, args.trials)
        outcome = run_problem(problem, settings)
    except InputError as exc:
        print(f"framings: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    report = build_report(command, problem["kind"], outcome, settings)
    _emit(json.dumps(report, indent=1, sort_keys=True) + "\n", args.out)
    log(f"== {command}: {'PASS' if outcome.passed else 'FAIL'}")
    for line in outcome.summary:
        log(f"   {line}")
    return EXIT_OK if outcome.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
