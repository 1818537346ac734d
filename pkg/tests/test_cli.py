import json
import subprocess
import sys
from importlib import resources

import pytest

from localix import workbench
from localix.cli import main
from localix.scenario import parse_scenario
from localix.torsion import InvarianceVerdict
from localix.workbench import run


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_filters_on_dual_numbers(capsys):
    code, out, _ = invoke(capsys, "filters", "--scenario", "builtin:dual-numbers")
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "localix-report/1"
    assert len(report["results"]["filters"]) == 2
    assert report["summary"]["fail"] == 0


def test_verify_all_f2xf2_passes(capsys):
    code, out, _ = invoke(capsys, "verify-all", "--scenario", "builtin:f2xf2")
    assert code == 0
    report = json.loads(out)
    assert report["summary"]["fail"] == 0
    checks = set(report["summary"]["by_check"])
    assert {"delta-invariance", "differential", "unique-lift", "left-exact", "adjunction"} <= checks


def test_localize_with_trivial_filter(tmp_path, capsys):
    text = (resources.files("localix") / "fixtures" / "dual-numbers.yaml").read_text()
    path = tmp_path / "trivial.yaml"
    path.write_text(text + "filter:\n  - [[1, 0]]\n")
    code, out, _ = invoke(capsys, "localize", "--scenario", str(path))
    assert code == 0
    result = json.loads(out)["results"]["localize"]
    assert list(result) == ["L"]
    assert all(entry["phi_bijective"] for entry in result["L"].values())


@pytest.mark.parametrize("name", ["broken-associativity", "broken-unit", "broken-leibniz"])
def test_mutations_exit_two(capsys, name):
    code, out, err = invoke(capsys, "validate", "--scenario", f"builtin:{name}")
    assert code == 2
    assert "violated" in err
    report = json.loads(out)
    assert report["valid"] is False
    (failure,) = [r for r in report["records"] if r["status"] == "fail"]
    assert failure["witness"]


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("modulus: 2\nalgebra: {unit: [1\n")
    code, out, err = invoke(capsys, "validate", "--scenario", str(path))
    assert code == 2 and out == ""
    assert "line" in err and "column" in err


def test_bound_exceeded_exit_three(capsys):
    code, _, err = invoke(capsys, "filters", "--scenario", "builtin:upper-triangular", "--bound-ideals", "3")
    assert code == 3
    assert "lattice" in err


def test_violation_exit_one(capsys, monkeypatch):
    def broken(A, d, L):
        return InvarianceVerdict(False, {"reason": "injected"})
    monkeypatch.setattr(workbench, "check_delta_invariance", broken)
    code, out, _ = invoke(capsys, "torsion", "--scenario", "builtin:z4")
    assert code == 1
    report = json.loads(out)
    failed = [r for r in report["records"] if r["status"] == "fail"]
    assert failed and all(r["check"] == "delta-invariance" and r["witness"] for r in failed)


def test_text_format_and_out_file(tmp_path, capsys):
    path = tmp_path / "report.txt"
    code, out, _ = invoke(capsys, "ideals", "--scenario", "builtin:z4", "--format", "text", "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_text()
    assert "left-ideals" in text and text.rstrip().endswith("OK")


def test_timings_are_opt_in(capsys):
    _, plain, _ = invoke(capsys, "ideals", "--scenario", "builtin:z4")
    _, timed, _ = invoke(capsys, "ideals", "--scenario", "builtin:z4", "--timings")
    assert "elapsed_ms" not in plain and "elapsed_ms" in timed


def test_every_failed_record_has_a_witness():
    report = run("validate", parse_scenario("builtin:z4"))
    report.add("lift", "synthetic", False)
    assert all(r.witness for r in report.failures)


def test_reports_identical_across_processes():
    # a fresh interpreter has a different hash seed and empty caches
    cmd = [sys.executable, "-m", "localix.cli", "verify-all", "--scenario", "builtin:z4"]
    first = subprocess.run(cmd, capture_output=True, check=True, env={"PYTHONHASHSEED": "1"}).stdout
    second = subprocess.run(cmd, capture_output=True, check=True, env={"PYTHONHASHSEED": "2"}).stdout
    assert first == second
    assert first == run("verify-all", parse_scenario("builtin:z4")).to_json().encode()
