import json
import subprocess
import sys

import pytest

from chevkern import cli


def run_main(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main(args + ["--output", str(out)])
    return code, out.read_text()


def test_relations_suite_record_count(tmp_path):
    code, text = run_main(["relations", "--system", "A2", "--samples", "5",
                           "--format", "json"], tmp_path)
    assert code == 0
    payload = json.loads(text)
    # 30 formal + 30 truncated commutator records + 6 additivity records
    assert payload["summary"] == {"total": 66, "failed": 0}
    assert payload["suite"] == "relations"
    assert all(r["status"] == "PASS" for r in payload["records"])


def test_all_suites_pass_and_are_deterministic(tmp_path):
    args = ["all", "--seed", "42", "--samples", "8", "--format", "json"]
    code1, text1 = run_main(args, tmp_path, "a.json")
    code2, text2 = run_main(args, tmp_path, "b.json")
    assert code1 == code2 == 0
    assert text1 == text2
    payload = json.loads(text1)
    assert payload["summary"]["failed"] == 0
    assert payload["config"]["seed"] == 42
    assert set(payload["summary"]) == {"total", "failed"}
    assert set(payload) == {"version", "suite", "config", "records", "summary"}


def test_suite_streams_are_independent(tmp_path):
    # a suite run alone produces the same records as inside `all`
    code, alone = run_main(["units", "--seed", "7", "--format", "json"],
                           tmp_path, "alone.json")
    assert code == 0
    code, combined = run_main(["all", "--seed", "7", "--format", "json"],
                              tmp_path, "combined.json")
    assert code == 0
    alone_records = json.loads(alone)["records"]
    all_records = json.loads(combined)["records"]
    assert [r for r in all_records if "mod e^" in r["name"]
            and ("unit" in r["name"] or "factorization" in r["name"])] \
        == alone_records


def test_text_format_summary(tmp_path):
    code, text = run_main(["filtration", "--system", "C2", "--trunc", "3"],
                          tmp_path, "out.txt")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[-1].startswith("summary:")
    assert sum(1 for l in lines if l.startswith("PASS ")) > 0
    assert not any(l.startswith("FAIL ") for l in lines)


def test_derivations_input_file(tmp_path):
    problem = tmp_path / "cusp.txt"
    problem.write_text("base rational\nvars X Y\nrel X^3 - Y^2\n"
                       "point X=0 Y=0\npoint X=1 Y=1\n")
    code, text = run_main(["derivations", "--input", str(problem),
                           "--format", "json"], tmp_path)
    assert code == 0
    payload = json.loads(text)
    dims = [r["detail"]["dim"] for r in payload["records"]
            if r["name"].startswith("derivations at")]
    assert dims == [2, 1]
    scan = [r for r in payload["records"] if r["name"] == "smoothness scan"]
    assert scan and scan[0]["detail"]["flagged"] == 1
    assert scan[0]["status"] == "PASS"  # a jump is a finding, not a failure


def test_number_ring_rigidity_record(tmp_path):
    problem = tmp_path / "ring.txt"
    problem.write_text("base numberring\ngen w : w^2 - 2\nvars X\n"
                       "rel X^2 - 2\npoint X=w\n")
    code, text = run_main(["derivations", "--input", str(problem),
                           "--format", "json"], tmp_path)
    assert code == 0
    payload = json.loads(text)
    rig = [r for r in payload["records"] if r["name"] == "number ring rigidity"]
    assert rig and rig[0]["detail"]["rigid"] is True
    assert rig[0]["detail"]["derivative"] == "2*w"


def test_extensions_algebra_input(tmp_path):
    from chevkern.extensions import FinDimAlgebra

    table = tmp_path / "alg.txt"
    FinDimAlgebra.from_univariate_quotient([0, 0, -1, 1]).save(table)
    code, text = run_main(["extensions", "--input", str(table),
                           "--format", "json"], tmp_path)
    assert code == 0
    payload = json.loads(text)
    rec = [r for r in payload["records"] if r["name"] == "decomposition of input"]
    assert rec and "K[e]/(e^2)" in rec[0]["detail"]["factors"]


def test_irrational_residue_field_is_reported_not_failed(tmp_path):
    from chevkern.extensions import FinDimAlgebra

    table = tmp_path / "alg.txt"
    FinDimAlgebra.from_univariate_quotient([-2, 0, 1]).save(table)
    code, text = run_main(["extensions", "--input", str(table),
                           "--format", "json"], tmp_path)
    assert code == 0
    payload = json.loads(text)
    rec = [r for r in payload["records"] if r["name"] == "decomposition of input"]
    assert rec[0]["status"] == "PASS"
    assert rec[0]["detail"]["verdict"] == "irrational residue field"


def test_usage_errors():
    assert cli.main(["relations", "--system", "G2"]) == 2
    assert cli.main(["derivations", "--input", "/does/not/exist.txt"]) == 2
    with pytest.raises(SystemExit):
        cli.main(["all", "--input", "whatever.txt"])
    with pytest.raises(SystemExit):
        cli.main(["relations", "--trunc", "1"])
    with pytest.raises(SystemExit):
        cli.main(["nonsense"])


def test_failures_flip_exit_code(tmp_path, monkeypatch):
    def broken(report, cfg, rng):
        report.add("forced failure", False, reason="injected")

    monkeypatch.setitem(cli.SUITE_RUNNERS, "units", broken)
    out = tmp_path / "fail.txt"
    assert cli.main(["units", "--output", str(out)]) == 1
    assert "FAIL forced failure" in out.read_text()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chevkern", "units",
                           "--samples", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "summary:" in proc.stdout
