"""Command line surface: exit codes, records and determinism."""
import io
import json



from ddeg.cli import SCHEMA, main


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_compute_exact():
    code, out, _ = run(["compute", "(x3 + x1*x2, x2 + x1^3, x1)"])
    assert code == 0
    assert "x^2 - x - 3" in out and "proven" in out


def test_compute_records_schema():
    code, out, _ = run(["compute", "(x1^2, x2^3)", "--format", "records", "--no-oracle"])
    rec = json.loads(out)
    assert code == 0 and rec["schema"] == SCHEMA and rec["kind"] == "compute"
    assert rec["result"]["value"]["defining"][-1] != 0
    assert rec["result"]["value"]["approx"].startswith("3")
    assert rec["config"]["digits"] == 30


def test_output_is_deterministic():
    argv = ["compute", "(x2 + x1^2, x1, x4, x3 + x1^2)", "--format", "records"]
    assert run(argv)[1] == run(argv)[1]


def test_input_errors():
    code, _, err = run(["compute", "(x1, x1^2)"])
    assert code == 3 and "not dominant" in err
    code, _, err = run(["compute", "(x1, x1^^2)"])
    assert code == 3 and "position 8" in err


def test_evidence_exit_code():
    # stable, but the leading part is neither monomial nor dominant: only evidence is available
    code, out, _ = run(["compute", "((x1 + x2)^2, (x1 + x2)^2 + x1, x3^2 + x1)", "--no-oracle"])
    assert code == 2
    assert "evidence-based" in out and "lambda    2" in out


def test_resource_exit_code():
    code, _, err = run(["compute", "(x1*x2, x2 + x3^3, x3 + x1)", "--budget-matrices", "1"])
    assert code == 4
    assert "budget" in err


def test_enumerate_tables():
    code, out, _ = run(["enumerate", "theorem1", "2", "--format", "records"])
    assert len(json.loads(out)["entries"]) == 4
    code, out, _ = run(["enumerate", "theorem1", "3", "--new-only", "--format", "records"])
    assert len(json.loads(out)["entries"]) == 7
    code, out, _ = run(["enumerate", "shiftlike", "4", "--new-only", "--format", "records"])
    assert len(json.loads(out)["entries"]) == 4


def test_classify_and_realize():
    code, out, _ = run(["classify", "x^2-3*x+1", "--no-realize", "--format", "records"])
    rep = json.loads(out)["report"]
    assert (rep["weak_perron"], rep["handelman"]["answer"], rep["minimal_dimension"]) == ("yes", "no", 4)
    code, out, _ = run(["realize", "x^2-x-3"])
    assert code == 0 and "(x1*x2^3 + x3, x1, x2)" in out
    code, out, _ = run(["realize", "5"])
    assert "(x1^5 + x2, x1)" in out
    code, _, err = run(["realize", "x^3-2*x^2-x+1"])
    assert code == 3 and "matrix" in err


def test_oracle_command_and_file_input(tmp_path):
    p = tmp_path / "map.txt"
    p.write_text("(x3 + x1*x2^2, x1, x2)\n")
    code, out, _ = run(["oracle", "-f", str(p), "--depth", "6", "--format", "records"])
    rows = json.loads(out)["oracle"]["rows"]
    assert [r["degree"] for r in rows][:3] == [3, 5, 11]


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("DDEG_DIGITS", "12")
    code, out, _ = run(["compute", "(x1^2*x2, x1*x2)", "--format", "records", "--no-oracle"])
    rec = json.loads(out)
    assert rec["config"]["digits"] == 12
    assert rec["result"]["value"]["approx"] == "2.61803398875"
    monkeypatch.setenv("DDEG_DIGITS", "zero")
    assert run(["compute", "(x1, x2)"])[0] == 3
