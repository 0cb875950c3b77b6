import csv
import io
import json

import pytest

from weakcorr import engine, fixtures
from weakcorr.model import Scenario, random_scenario
from weakcorr.verification import (
    CSV_COLUMNS,
    CheckRecord,
    Summary,
    VerificationReport,
    check_scenario,
    emit_report,
    parse_report,
    run_verification_suite,
    scan_anomalous,
    summary_consistent,
    trial_mode,
)


@pytest.fixture(scope="module")
def small_report():
    return run_verification_suite(5, [2, 3], 4)


def test_suite_passes_and_is_consistent(small_report):
    assert small_report.ok
    assert small_report.summary.total > 0
    assert summary_consistent(small_report)


def test_suite_covers_every_check(small_report):
    names = {r.check_name.split("[")[0] for r in small_report.records}
    assert names >= {
        "eq4_identity",
        "eq3_conditional",
        "marginal_b",
        "marginal_a",
        "total_probability",
        "weighted_sum",
        "complex_real_weak_value",
        "complex_real_conditional_average",
        "sequential_total",
        "sequential_nonnegative",
    }


def test_suite_alternates_modes():
    assert [trial_mode(k) for k in range(4)] == ["real", "complex", "real", "complex"]


def test_suite_zero_trials():
    report = run_verification_suite(1, [2, 3], 0)
    assert report.records == ()
    assert report.summary == Summary(0, 0, 0, 0, 0.0)
    assert emit_report(report, "csv").decode() == ",".join(CSV_COLUMNS) + "\n"


def test_suite_rejects_bad_dims():
    with pytest.raises(ValueError):
        run_verification_suite(1, [], 1)
    with pytest.raises(ValueError):
        run_verification_suite(1, [1], 1)


def test_suite_deterministic(small_report):
    again = run_verification_suite(5, [2, 3], 4)
    assert emit_report(again) == emit_report(small_report)
    assert emit_report(again, "csv") == emit_report(small_report, "csv")


def test_check_scenario_skips_impossible_postselection():
    records, skipped = check_scenario(fixtures.contrast_qubit(), "contrast", 0)
    assert skipped == 1
    assert all(r.passed for r in records)


def test_check_scenario_commuting_record():
    records, _ = check_scenario(fixtures.commuting_qubit(), "commuting", 0)
    assert any(r.check_name == "commuting_reduction" and r.passed for r in records)


def test_failed_check_recorded_not_raised():
    rec = CheckRecord.compare("x", "s", 0, 1.0, 1.5, 1e-9)
    assert not rec.passed and rec.abs_error == 0.5
    nan = CheckRecord.compare("x", "s", 0, float("nan"), 1.0, 1e-9)
    assert not nan.passed


def test_json_round_trip(small_report):
    assert parse_report(emit_report(small_report)) == small_report


def test_json_omits_wall_time_by_default(small_report):
    assert "wall_time" not in json.loads(emit_report(small_report))["summary"]
    assert "wall_time" in json.loads(emit_report(small_report, include_timing=True))["summary"]


def _one_record_report(passed=True):
    rec = CheckRecord.compare("eq4_identity[b0]", "d2-t0", 7, 1 + 0.5j, 1 + 0.5j if passed else 2, 1e-9)
    return VerificationReport(7, (2,), 1, (rec,), Summary(1, int(passed), int(not passed), 0, rec.abs_error))


def test_csv_one_row():
    text = emit_report(_one_record_report(), "csv").decode()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 2
    row = dict(zip(rows[0], rows[1]))
    assert row["pass"] == "true"
    assert row["lhs_im"] == "0.5"
    assert float(row["tolerance"]) == 1e-9


def test_csv_seventeen_digits():
    rec = CheckRecord.compare("c", "s", 1, 0.1, 0.2, 1e-9)
    report = VerificationReport(1, (2,), 1, (rec,), Summary(1, 0, 1, 0, rec.abs_error))
    row = list(csv.reader(io.StringIO(emit_report(report, "csv").decode())))[1]
    assert row[3] == "0.10000000000000001"
    assert float(row[7]) == rec.abs_error


def test_csv_failing_row():
    text = emit_report(_one_record_report(passed=False), "csv").decode()
    assert text.strip().endswith(",false")


def test_emit_unknown_format(small_report):
    with pytest.raises(ValueError):
        emit_report(small_report, "xml")


def test_scan_injected_anomalous_first():
    hits = scan_anomalous(3, 2, 20, injected=[fixtures.anomalous_qubit()])
    top = [h for h in hits if h.scenario_id == "d2-t0"]
    assert len(top) == 1
    assert top[0].weak_value == pytest.approx(5.027339, abs=1e-6)
    assert top[0].spectral_max == pytest.approx(1.0, abs=1e-12)
    excess = [h.excess for h in hits]
    assert excess == sorted(excess, reverse=True)


def test_scan_results_reverified():
    for h in scan_anomalous(11, 3, 30):
        assert h.weak_value < h.spectral_min - 1e-9 or h.weak_value > h.spectral_max + 1e-9
        trial = int(h.scenario_id.split("-t")[1])
        from weakcorr.verification import trial_seed

        s = random_scenario(trial_seed(11, 3, trial), 3)
        assert abs(engine.conditional_average(s, h.b_label).real - h.weak_value) <= 1e-9


def test_scan_identity_and_eigenstates_never_reported():
    import numpy as np

    identity_cases = []
    for seed in range(10):
        s = random_scenario(seed, 3)
        identity_cases.append(Scenario(s.psi, type(s.obs_a).from_matrix(np.eye(3)), s.obs_b, s.evolution))
    assert scan_anomalous(0, 3, 0, injected=identity_cases) == []
    assert scan_anomalous(0, 2, 0, injected=[fixtures.eigenstate_qubit(), fixtures.commuting_qubit()]) == []


def test_scan_rejects_small_dim():
    with pytest.raises(ValueError):
        scan_anomalous(0, 1, 1)
