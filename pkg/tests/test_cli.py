import json
import math
import subprocess
import sys

import numpy as np
import pytest

from weakcorr import fixtures
from weakcorr.cli import main
from weakcorr.scenario_io import serialize_scenario


@pytest.fixture
def anomalous_file(tmp_path):
    p = tmp_path / "anomalous.json"
    p.write_bytes(serialize_scenario(fixtures.anomalous_qubit()))
    return p


def test_verify_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--seed", "1", "--dims", "2,3", "--trials", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["summary"]["failed"] == 0
    assert "checks passed" in capsys.readouterr().err


def test_verify_csv_stdout(capsys):
    assert main(["verify", "--seed", "1", "--dims", "2", "--trials", "1", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("check_name,scenario_id,seed,")


def test_verify_failure_exit_code(monkeypatch, capsys):
    from weakcorr import cli
    from weakcorr.verification import CheckRecord, Summary, VerificationReport

    rec = CheckRecord.compare("x", "s", 0, 0.0, 1.0, 1e-9)
    bad = VerificationReport(0, (2,), 1, (rec,), Summary(1, 0, 1, 0, 1.0))
    monkeypatch.setattr(cli, "run_verification_suite", lambda *a, **k: bad)
    assert main(["verify", "--seed", "0", "--dims", "2", "--trials", "1"]) == 1


def test_weakvalue(anomalous_file, capsys):
    assert main(["weakvalue", "--scenario", str(anomalous_file), "--post-select", "-1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["weak_value"][0] == pytest.approx(1 / math.tan(math.pi / 16), abs=1e-12)
    assert out["conditional_average"][0] == pytest.approx(out["weak_value"][0], abs=1e-9)


def test_weakvalue_rare_postselection(tmp_path, capsys):
    p = tmp_path / "e.json"
    p.write_bytes(serialize_scenario(fixtures.eigenstate_qubit()))
    assert main(["weakvalue", "--scenario", str(p), "--post-select", "-1"]) == 2
    err = capsys.readouterr().err
    assert "undefined" in err
    assert "nan" not in err.lower() and "inf" not in err.lower().replace("info", "")


def test_weakvalue_unknown_label(anomalous_file, capsys):
    assert main(["weakvalue", "--scenario", str(anomalous_file), "--post-select", "0.3"]) == 2


def test_quasiprob(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_bytes(serialize_scenario(fixtures.contrast_qubit()))
    assert main(["quasiprob", "--scenario", str(p)]) == 0
    out = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(np.array(out["quasiprobability"])[..., 0], [[0.5, 0.5], [0, 0]], atol=1e-12)
    np.testing.assert_allclose(out["sequential"], np.full((2, 2), 0.25), atol=1e-12)


def test_scan(capsys):
    assert main(["scan", "--seed", "2", "--dim", "3", "--trials", "10"]) == 0
    for rec in json.loads(capsys.readouterr().out):
        assert set(rec) == {"scenario_id", "b_label", "weak_value", "spectral_min", "spectral_max"}


def test_demo(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    assert "+5.0273394921" in out and "MISMATCH" not in out


def test_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"dim": 2, "psi": [[1,0],[0,0]], "obs_a": [[[0,0],[1,0]],[[0,0],[0,0]]], '
                 '"obs_b": [[[1,0],[0,0]],[[0,0],[-1,0]]]}')
    assert main(["quasiprob", "--scenario", str(p)]) == 2
    assert "obs_a" in capsys.readouterr().err


def test_not_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("dim: 2")
    assert main(["quasiprob", "--scenario", str(p)]) == 2


def test_missing_file(capsys):
    assert main(["quasiprob", "--scenario", "/nonexistent/x.json"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["verify", "--seed", "1", "--dims", "1,2", "--trials", "1"],
        ["verify", "--seed", "1", "--dims", "a", "--trials", "1"],
        ["verify", "--seed", "1", "--dims", "2", "--trials", "-1"],
        ["scan", "--seed", "1", "--dim", "1", "--trials", "1"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "weakcorr", "demo"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "anomalous" in r.stdout
