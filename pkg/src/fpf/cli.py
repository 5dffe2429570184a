"""Command-line front end.

Exit codes: 0 success, 2 validation failure, 3 domain error, 4 internal
numerical check failure. Every error prints one machine-readable line
(CODE: message) on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DomainError, FpfError, NumericalCheckFailure, ValidationError
from .scenario import (
    QUERY_KINDS,
    parse_scenario,
    random_scenario,
    run,
    serialize_scenario,
)
from .tolerances import tolerance_overrides


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpf",
        description="Evaluate contour-time history measures from scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario's query")
    run_p.add_argument("file", type=Path)
    run_p.add_argument("--format", choices=("json", "table"), default="json")
    run_p.add_argument(
        "--tol-override",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a tolerance field for this invocation (repeatable)",
    )

    val_p = sub.add_parser("validate", help="parse and validate a scenario file")
    val_p.add_argument("file", type=Path)

    rand_p = sub.add_parser("random", help="emit a deterministic random scenario")
    rand_p.add_argument("--seed", type=int, required=True)
    rand_p.add_argument("--dim", type=int, default=2)
    rand_p.add_argument("--pieces", type=int, default=1)
    rand_p.add_argument("--query", choices=QUERY_KINDS, default="born")

    net_p = sub.add_parser("network", help="run a network-counting scenario")
    net_p.add_argument("file", type=Path)
    net_p.add_argument("--format", choices=("json", "table"), default="json")
    return parser


def _parse_overrides(pairs: list[str]) -> dict[str, float]:
    overrides = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise ValidationError(f"tolerance override {pair!r} is not NAME=VALUE")
        try:
            overrides[name] = float(value)
        except ValueError:
            raise ValidationError(f"tolerance override {pair!r} has a non-numeric value") from None
    return overrides


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _file_tolerances(text: bytes) -> dict[str, float]:
    # cheap pre-pass so file-level overrides already govern validation
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError):
        return {}
    if isinstance(raw, dict) and isinstance(raw.get("tolerances"), dict):
        return {k: v for k, v in raw["tolerances"].items() if isinstance(v, (int, float))}
    return {}


def _run_file(path: Path, fmt: str, cli_overrides: dict[str, float], *, require_kind=None) -> int:
    text = _read(path)
    merged = {**_file_tolerances(text), **cli_overrides}
    try:
        context = tolerance_overrides(**merged)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    with context:
        scenario = parse_scenario(text)
        if require_kind is not None and scenario.query.kind != require_kind:
            raise ValidationError(
                f"{path} holds a {scenario.query.kind!r} query, expected {require_kind!r}"
            )
        report = run(scenario)
    print(report.to_json() if fmt == "json" else report.to_table())
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run_file(args.file, args.format, _parse_overrides(args.tol_override))
        if args.command == "network":
            return _run_file(args.file, args.format, {}, require_kind="network")
        if args.command == "validate":
            parse_scenario(_read(args.file))
            print(f"VALID: {args.file}")
            return 0
        if args.command == "random":
            print(serialize_scenario(random_scenario(args.seed, args.dim, args.pieces, args.query)))
            return 0
        raise AssertionError(f"unhandled command {args.command!r}")
    except NumericalCheckFailure as exc:
        _report_error(exc)
        return 4
    except DomainError as exc:
        _report_error(exc)
        return 3
    except ValidationError as exc:
        _report_error(exc)
        return 2
    except FpfError as exc:  # uncategorized engine error: treat as internal
        _report_error(exc)
        return 4


def _report_error(exc: FpfError) -> None:
    message = " ".join(str(exc).split())
    print(f"{exc.code}: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
