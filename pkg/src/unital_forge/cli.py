"""Command-line front end.

    unital-forge build-finite --q 3 --out unital_q3.json
    unital-forge verify onan --q 3
    unital-forge verify eta --samples 1000 --seed 42
    unital-forge report-diff a.json b.json

Exit codes: 0 all checks pass, 1 a check failed (or I/O failure), 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

from .finite_unitals import build_finite_unital, save_incidence
from .suites import SUITES, RunConfig, run_all, run_suite

CONFIG_KEYS = [f.name for f in fields(RunConfig)]


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unital-forge", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build-finite", help="enumerate the finite hermitian unital of order q^2")
    build.add_argument("--q", type=int, required=True)
    build.add_argument("--out", type=Path, required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", help=f"one of: {', '.join(SUITES)}, all")
    verify.add_argument("--config", type=Path, help="JSON file with RunConfig fields; flags win")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--samples", type=int)
    verify.add_argument("--height", type=int)
    verify.add_argument("--d", type=int)
    verify.add_argument("--s", type=str)
    verify.add_argument("--q", type=int)
    verify.add_argument("--blocks", type=int)
    verify.add_argument("--block-samples", dest="block_samples", type=int)
    verify.add_argument("--translations", type=int)
    verify.add_argument("--assume-division", dest="assume_division", action="store_true", default=None)
    verify.add_argument("--out", type=Path)
    verify.add_argument("--format", choices=["json", "text"], default="json")
    verify.add_argument("--no-timing", dest="timing", action="store_false")

    diff = sub.add_parser("report-diff", help="compare check outcomes of two reports")
    diff.add_argument("a", type=Path)
    diff.add_argument("b", type=Path)
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config is not None:
        values.update(json.loads(args.config.read_text()))
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "s" in values:
        values["s"] = str(values["s"])
    return RunConfig(**values)


def _render_text(reports: list[dict]) -> str:
    lines = []
    for rep in reports:
        lines.append(f"[{rep['status'].upper()}] {rep['suite']}")
        for check in rep["checks"]:
            lines.append(f"  {check['status']:7s} {check['name']}")
    return "\n".join(lines) + "\n"


def cmd_build_finite(args) -> int:
    try:
        u = build_finite_unital(args.q)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        save_incidence(u, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"q={u.q} v={len(u.points)} b={len(u.blocks)} k={u.q + 1}")
    return 0


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}", file=sys.stderr)
        return 2
    try:
        cfg = build_config(args)
        reports = run_all(cfg) if args.suite == "all" else [run_suite(args.suite, cfg)]
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = [r.to_json(timing=args.timing) for r in reports]
    if args.format == "text":
        text = _render_text(payload)
    else:
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2, sort_keys=True) + "\n"
    if args.out is not None:
        try:
            args.out.write_text(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in reports) else 1


def _outcomes(data) -> dict:
    reports = data if isinstance(data, list) else [data]
    out = {}
    for rep in reports:
        out[(rep["suite"], "*")] = rep["status"]
        for check in rep["checks"]:
            out[(rep["suite"], check["name"])] = check["status"]
    return out


def report_diff(a, b) -> list[str]:
    """Lines describing differing check outcomes (timing and witnesses ignored)."""
    oa, ob = _outcomes(a), _outcomes(b)
    lines = []
    for key in sorted(set(oa) | set(ob)):
        if oa.get(key) != ob.get(key):
            suite, name = key
            lines.append(f"{suite}/{name}: {oa.get(key, 'missing')} -> {ob.get(key, 'missing')}")
    return lines


def cmd_report_diff(args) -> int:
    try:
        a = json.loads(args.a.read_text())
        b = json.loads(args.b.read_text())
        lines = report_diff(a, b)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    return 1 if lines else 0


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"build-finite": cmd_build_finite, "verify": cmd_verify, "report-diff": cmd_report_diff}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
