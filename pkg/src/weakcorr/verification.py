"""Seeded verification campaigns, anomalous-weak-value scans and reports."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from . import engine
from .config import DEFAULT, Tolerances
from .errors import IdentityViolation, ParseError, PostselectionTooRare
from .kernel import derive_seed
from .model import Mode, Scenario, postselection_probability, random_scenario

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "check_name",
    "scenario_id",
    "seed",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_error",
    "tolerance",
    "pass",
)


@dataclass(frozen=True)
class CheckRecord:
    check_name: str
    scenario_id: str
    seed: int
    lhs: complex
    rhs: complex
    abs_error: float
    tolerance: float
    passed: bool

    @classmethod
    def compare(cls, name: str, scenario_id: str, seed: int, lhs, rhs, tolerance: float) -> "CheckRecord":
        lhs, rhs = complex(lhs), complex(rhs)
        err = abs(lhs - rhs)
        # NaN never passes
        return cls(name, scenario_id, seed, lhs, rhs, err, tolerance, bool(err <= tolerance))


@dataclass(frozen=True)
class Summary:
    total: int
    passed: int
    failed: int
    skipped: int
    max_error: float
    wall_time: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class VerificationReport:
    seed: int
    dims: tuple[int, ...]
    trials_per_dim: int
    records: tuple[CheckRecord, ...]
    summary: Summary

    @property
    def ok(self) -> bool:
        return self.summary.failed == 0


def _summarize(records: Sequence[CheckRecord], skipped: int, wall_time: float) -> Summary:
    passed = sum(r.passed for r in records)
    max_error = max((r.abs_error for r in records), default=0.0)
    return Summary(len(records), passed, len(records) - passed, skipped, float(max_error), wall_time)


def trial_seed(seed: int, dim: int, trial: int) -> int:
    return derive_seed(seed, dim, trial)


def trial_mode(trial: int) -> Mode:
    return "real" if trial % 2 == 0 else "complex"


def check_scenario(s: Scenario, scenario_id: str, seed: int) -> tuple[list[CheckRecord], int]:
    """Evaluate every engine invariant on one scenario.

    Returns the check records and the number of post-selection labels
    skipped because their probability is at or below the cutoff.
    """
    tol = s.tol
    other = s.with_mode("complex" if s.mode == "real" else "real")
    real_s, complex_s = (s, other) if s.mode == "real" else (other, s)
    records: list[CheckRecord] = []
    skipped = 0

    def add(name, lhs, rhs, tolerance):
        records.append(CheckRecord.compare(name, scenario_id, seed, lhs, rhs, tolerance))

    table = engine.kd_quasiprobability(s)
    a_projectors = s.obs_a.projectors.projectors

    for i, b in enumerate(table.b_labels):
        try:
            wv = engine.weak_value(s, b).value
        except PostselectionTooRare:
            skipped += 1
            continue
        add(f"eq4_identity[b{i}]", wv, engine.conditional_average(s, b), tol.identity)

        conditional = engine.conditional_quasiprobability(table, b, tol)
        for j, ((_, p), pa) in enumerate(zip(conditional, a_projectors)):
            add(f"eq3_conditional[b{i},a{j}]", p, engine.weak_value(s, b, operator=pa).value, tol.conditional)

        add(f"marginal_b[b{i}]", table.entries[i].sum(), postselection_probability(s, b), tol.marginal)

        add(
            f"complex_real_weak_value[b{i}]",
            engine.weak_value(complex_s, b).value.real,
            engine.weak_value(real_s, b).value,
            tol.complex_real,
        )
        add(
            f"complex_real_conditional_average[b{i}]",
            engine.conditional_average(complex_s, b).real,
            engine.conditional_average(real_s, b),
            tol.complex_real,
        )

    column_sums = table.a_marginal()
    for j, pa in enumerate(a_projectors):
        add(f"marginal_a[a{j}]", column_sums[j], engine.heisenberg_expectation(s, pa, "t1"), tol.marginal)
    add("total_probability", table.total(), 1.0, tol.marginal)
    add("weighted_sum", engine.correlation_function(s), engine.weighted_sum(table), tol.correlation)

    seq = engine.sequential_measurement_distribution(s)
    add("sequential_total", seq.total(), 1.0, tol.marginal)
    lowest = float(seq.entries.real.min())
    records.append(
        CheckRecord(
            "sequential_nonnegative", scenario_id, seed, lowest, 0.0, max(0.0, -lowest), 0.0, lowest >= 0.0
        )
    )

    reduction = engine.commuting_reduction_check(s)
    if reduction.commuting:
        add("commuting_reduction", reduction.max_deviation, 0.0, reduction.tolerance)
    return records, skipped


def run_verification_suite(
    seed: int, dims: Iterable[int], trials_per_dim: int, tol: Tolerances = DEFAULT
) -> VerificationReport:
    """Random scenarios per dimension, every invariant checked on each.

    Trial ``k`` in dimension ``d`` uses seed ``derive_seed(seed, d, k)`` and
    runs in real mode for even ``k``, complex mode for odd ``k``.  Failures
    become report records; nothing is raised for a failed check.
    """
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise ValueError(f"dims must be non-empty and each >= 2, got {dims}")
    if trials_per_dim < 0:
        raise ValueError("trials_per_dim must be >= 0")

    start = time.perf_counter()
    records: list[CheckRecord] = []
    skipped = 0
    for d in dims:
        for k in range(trials_per_dim):
            ts = trial_seed(seed, d, k)
            s = random_scenario(ts, d, trial_mode(k), tol)
            recs, skip = check_scenario(s, f"d{d}-t{k}", ts)
            records.extend(recs)
            skipped += skip
    wall = time.perf_counter() - start
    summary = _summarize(records, skipped, wall)
    log.info("verification: %d checks, %d failed, %.2fs", summary.total, summary.failed, wall)
    return VerificationReport(seed, dims, trials_per_dim, tuple(records), summary)


# ---------------------------------------------------------------------------
# anomalous weak values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnomalyRecord:
    scenario_id: str
    b_label: float
    weak_value: float
    spectral_min: float
    spectral_max: float

    @property
    def excess(self) -> float:
        return max(self.weak_value - self.spectral_max, self.spectral_min - self.weak_value)


def scan_anomalous(
    seed: int,
    dim: int,
    trials: int,
    injected: Sequence[Scenario] = (),
    tol: Tolerances = DEFAULT,
) -> list[AnomalyRecord]:
    """Find real weak values outside ``[min spec A, max spec A]``.

    ``injected`` scenarios occupy trial indices ``0 .. len(injected) − 1``;
    ``trials`` random real-mode scenarios of dimension ``dim`` follow.  Every
    hit is re-derived through :func:`engine.conditional_average`; a mismatch
    raises :class:`IdentityViolation` instead of being reported.  Results are
    sorted by how far they fall outside the spectrum, largest first.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    cases = [(f"d{s.dim}-t{k}", s.with_mode("real")) for k, s in enumerate(injected)]
    offset = len(cases)
    for k in range(trials):
        idx = offset + k
        cases.append((f"d{dim}-t{idx}", random_scenario(trial_seed(seed, dim, idx), dim, "real", tol)))

    hits: list[AnomalyRecord] = []
    for sid, s in cases:
        lo, hi = s.obs_a.spectral_range
        for b in s.obs_b.labels:
            try:
                wv = engine.weak_value(s, b).value.real
            except PostselectionTooRare:
                continue
            if lo - tol.anomaly_margin <= wv <= hi + tol.anomaly_margin:
                continue
            other = engine.conditional_average(s, b).real
            if not abs(other - wv) <= tol.identity:
                raise IdentityViolation(
                    f"{sid}, b={b!r}: weak value {wv!r} vs conditional average {other!r}"
                )
            hits.append(AnomalyRecord(sid, b, wv, lo, hi))
    hits.sort(key=lambda r: r.excess, reverse=True)
    return hits


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _num(x: float) -> str:
    return format(float(x), ".17g")


def _record_to_dict(r: CheckRecord) -> dict:
    return {
        "check_name": r.check_name,
        "scenario_id": r.scenario_id,
        "seed": r.seed,
        "lhs": [r.lhs.real, r.lhs.imag],
        "rhs": [r.rhs.real, r.rhs.imag],
        "abs_error": r.abs_error,
        "tolerance": r.tolerance,
        "pass": r.passed,
    }


def report_to_dict(report: VerificationReport, include_timing: bool = False) -> dict:
    summary = {
        "total": report.summary.total,
        "passed": report.summary.passed,
        "failed": report.summary.failed,
        "skipped": report.summary.skipped,
        "max_error": report.summary.max_error,
    }
    if include_timing:
        summary["wall_time"] = report.summary.wall_time
    return {
        "seed": report.seed,
        "dims": list(report.dims),
        "trials_per_dim": report.trials_per_dim,
        "summary": summary,
        "records": [_record_to_dict(r) for r in report.records],
    }


def emit_report(
    report: VerificationReport, format: Literal["json", "csv"] = "json", include_timing: bool = False
) -> bytes:
    """Serialize a report deterministically.

    Wall time is left out unless ``include_timing`` is set, so that repeated
    runs with the same inputs produce identical bytes.
    """
    if format == "json":
        return (json.dumps(report_to_dict(report, include_timing), indent=1) + "\n").encode()
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in report.records:
            writer.writerow(
                [
                    r.check_name,
                    r.scenario_id,
                    r.seed,
                    _num(r.lhs.real),
                    _num(r.lhs.imag),
                    _num(r.rhs.real),
                    _num(r.rhs.imag),
                    _num(r.abs_error),
                    _num(r.tolerance),
                    "true" if r.passed else "false",
                ]
            )
        return buf.getvalue().encode()
    raise ValueError(f"unknown report format {format!r}")


def parse_report(raw: bytes | str) -> VerificationReport:
    """Inverse of ``emit_report(..., "json")``."""
    try:
        data = json.loads(raw)
        records = tuple(
            CheckRecord(
                r["check_name"],
                r["scenario_id"],
                int(r["seed"]),
                complex(*r["lhs"]),
                complex(*r["rhs"]),
                float(r["abs_error"]),
                float(r["tolerance"]),
                bool(r["pass"]),
            )
            for r in data["records"]
        )
        s = data["summary"]
        summary = Summary(
            int(s["total"]),
            int(s["passed"]),
            int(s["failed"]),
            int(s["skipped"]),
            float(s["max_error"]),
            float(s.get("wall_time", 0.0)),
        )
        return VerificationReport(int(data["seed"]), tuple(data["dims"]), int(data["trials_per_dim"]), records, summary)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed report: {exc}") from None


def summary_consistent(report: VerificationReport) -> bool:
    """Counts agree with the records and every ``pass`` flag matches its error."""
    recs = report.records
    s = report.summary
    flags_ok = all(r.passed == bool(r.abs_error <= r.tolerance) for r in recs)
    return (
        flags_ok
        and s.total == len(recs)
        and s.passed == sum(r.passed for r in recs)
        and s.failed == s.total - s.passed
        and s.max_error == max((r.abs_error for r in recs), default=0.0)
    )


def anomalies_to_json(records: Sequence[AnomalyRecord]) -> bytes:
    rows = [
        {
            "scenario_id": r.scenario_id,
            "b_label": r.b_label,
            "weak_value": r.weak_value,
            "spectral_min": r.spectral_min,
            "spectral_max": r.spectral_max,
        }
        for r in records
    ]
    return (json.dumps(rows, indent=1) + "\n").encode()


__all__ = [
    "AnomalyRecord",
    "CSV_COLUMNS",
    "CheckRecord",
    "Summary",
    "VerificationReport",
    "anomalies_to_json",
    "check_scenario",
    "emit_report",
    "parse_report",
    "report_to_dict",
    "run_verification_suite",
    "scan_anomalous",
    "summary_consistent",
    "trial_mode",
    "trial_seed",
]
