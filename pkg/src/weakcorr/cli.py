"""Command-line interface.

Exit codes: 0 when every check passes, 1 when at least one check fails,
2 for usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import engine, fixtures
from .errors import ParseError, PostselectionTooRare, UnknownLabel, ValidationError
from .scenario_io import parse_scenario
from .verification import anomalies_to_json, emit_report, run_verification_suite, scan_anomalous

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("dims must be non-empty and each >= 2")
    return dims


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _complex_json(z: complex) -> list[float]:
    return [z.real, z.imag]


def _load(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read scenario file {path!r}: {exc.strerror}") from None
    return parse_scenario(raw)


def _write(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_verify(args) -> int:
    report = run_verification_suite(args.seed, args.dims, args.trials)
    _write(emit_report(report, args.format), args.out)
    s = report.summary
    print(
        f"{s.passed}/{s.total} checks passed, {s.failed} failed, {s.skipped} labels skipped, "
        f"max error {s.max_error:.3e}, {s.wall_time:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_weakvalue(args) -> int:
    s = _load(args.scenario)
    result = engine.weak_value(s, args.post_select)
    via_table = engine.conditional_average(s, args.post_select)
    out = {
        "mode": result.mode,
        "post_select": args.post_select,
        "weak_value": _complex_json(result.value),
        "conditional_average": _complex_json(via_table),
        "abs_difference": abs(result.value - via_table),
        "postselection_prob": result.postselection_prob,
    }
    print(json.dumps(out, indent=1))
    return EXIT_OK if abs(result.value - via_table) <= s.tol.identity else EXIT_FAILED


def cmd_quasiprob(args) -> int:
    s = _load(args.scenario)
    table = engine.kd_quasiprobability(s)
    seq = engine.sequential_measurement_distribution(s)
    out = {
        "mode": table.mode,
        "a_labels": list(table.a_labels),
        "b_labels": list(table.b_labels),
        "quasiprobability": [[_complex_json(complex(z)) for z in row] for row in table.entries],
        "sequential": [[float(z.real) for z in row] for row in seq.entries],
        "total": _complex_json(table.total()),
    }
    print(json.dumps(out, indent=1))
    return EXIT_OK


def cmd_scan(args) -> int:
    records = scan_anomalous(args.seed, args.dim, args.trials)
    sys.stdout.buffer.write(anomalies_to_json(records))
    return EXIT_OK


def run_demo(out=None) -> bool:
    """Print both sides of the weak-value identity for the hand-computed qubits."""
    out = sys.stdout if out is None else out
    ok = True
    for name, make in fixtures.FIXTURES.items():
        for mode in ("real", "complex"):
            s = make(mode)
            for b in s.obs_b.labels:
                try:
                    wv = engine.weak_value(s, b).value
                except PostselectionTooRare:
                    print(f"{name:16s} {mode:7s} b={b:+.0f}  post-selection impossible (Pr(b)=0)", file=out)
                    continue
                avg = engine.conditional_average(s, b)
                good = abs(wv - avg) <= s.tol.identity
                ok &= good
                print(
                    f"{name:16s} {mode:7s} b={b:+.0f}  weak value {wv.real:+.10f}{wv.imag:+.10f}i  "
                    f"sum_a a Pr(a|b) {avg.real:+.10f}{avg.imag:+.10f}i  {'ok' if good else 'MISMATCH'}",
                    file=out,
                )
    return ok


def cmd_demo(args) -> int:
    return EXIT_OK if run_demo() else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    # argparse reports usage errors with exit status 2 (EXIT_USAGE)
    p = argparse.ArgumentParser(prog="weakcorr", description="Weak values and two-time quasi-probabilities.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="randomized verification campaign")
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--dims", type=_dims, required=True, help="comma-separated, e.g. 2,3,4")
    v.add_argument("--trials", type=_nonneg, required=True, help="trials per dimension")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("weakvalue", help="weak value for one post-selection")
    w.add_argument("--scenario", required=True)
    w.add_argument("--post-select", type=float, required=True, dest="post_select")
    w.set_defaults(func=cmd_weakvalue)

    q = sub.add_parser("quasiprob", help="quasi-probability and sequential tables")
    q.add_argument("--scenario", required=True)
    q.set_defaults(func=cmd_quasiprob)

    s = sub.add_parser("scan", help="search random scenarios for anomalous weak values")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--trials", type=_nonneg, required=True)
    s.set_defaults(func=cmd_scan)

    d = sub.add_parser("demo", help="hand-computed qubit examples")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if getattr(args, "dim", 2) < 2:
        parser.error("--dim must be >= 2")
    try:
        return args.func(args)
    except (ParseError, ValidationError, UnknownLabel, PostselectionTooRare) as exc:
        print(f"weakcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
