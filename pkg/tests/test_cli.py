import json
import subprocess
import sys

import pytest

from ncdg.cli import main
from ncdg.errors import UnknownSuite
from ncdg.fleet import bundled, bundled_path
from ncdg.suites import SUITES, run_suite, suite_names, summarize


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- suites ----------------------------------------------------------------------------------

def test_cartan_suite_on_m2_passes():
    reports = run_suite("cartan", [bundled("M2")], seed=7)
    s = summarize(reports)
    assert s["fail"] == 0 and s["pass"] > 0


def test_symplectic_suite_on_cc_is_unsupported():
    rows = run_suite("symplectic", [bundled("CC")], seed=3)[0]["checks"]
    assert {r["status"] for r in rows} == {"unsupported"}
    assert any("CenterNotTrivial" in json.dumps(r["witness"]) for r in rows)


def test_weyl_suite_degree_four_passes():
    s = summarize(run_suite("weyl", seed=1, opts={"max_degree": 4}))
    assert s["fail"] == 0 and s["pass"] > 0


def test_report_shape():
    rep = run_suite("algebra", [bundled("M2")], seed=0)[0]
    assert set(rep) == {"suite", "algebra", "seed", "checks", "facts"}
    for row in rep["checks"]:
        assert set(row) == {"law", "status", "witness", "ref"}
    assert [r["law"] for r in rep["checks"]] == sorted(r["law"] for r in rep["checks"])
    assert rep["facts"]["der_dim"] == 3


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        suite_names("nope")
    assert list(suite_names("all")) == list(SUITES)


def test_suites_reproducible():
    a = run_suite("forms", [bundled("M2")], seed=11)
    b = run_suite("forms", [bundled("M2")], seed=11)
    assert a == b


# -- command line ------------------------------------------------------------------------------

def test_describe_m2(capsys):
    code, out, _ = run_cli(capsys, "describe", "M2")
    data = json.loads(out)
    assert code == 0
    assert (data["dim"], data["center_dim"], data["der_dim"], data["all_inner"]) == (4, 1, 3, True)


def test_describe_cc(capsys):
    code, out, _ = run_cli(capsys, "describe", "CC")
    assert code == 0 and json.loads(out)["der_dim"] == 0


def test_describe_from_file(capsys):
    code, out, _ = run_cli(capsys, "describe", str(bundled_path("M3")))
    assert code == 0 and json.loads(out)["der_dim"] == 8


def test_malformed_scalar_exit_code(capsys, tmp_path):
    spec = json.loads(bundled_path("M2").read_text())
    spec["structure_constants"][1][2][0] = "1/x"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(spec))
    code, _, err = run_cli(capsys, "describe", str(p))
    assert code == 2
    assert "ParseError" in err and "structure_constants[1][2][0]" in err


def test_unknown_suite_exit_code(capsys):
    code, _, err = run_cli(capsys, "run", "--suite", "nope")
    assert code == 2 and "UnknownSuite" in err


def test_run_text_format(capsys):
    code, out, err = run_cli(capsys, "run", "--suite", "cartan", "--seed", "7", "--format", "text", "M2")
    assert code == 0
    assert out.splitlines()[-1].startswith("pass ")
    assert "fail 0" in out and "suite cartan" in err


def test_symplectic_command(capsys):
    code, out, _ = run_cli(capsys, "symplectic", "M2", "--check")
    data = json.loads(out)
    assert code == 0 and data["omega"] is not None and len(data["hamiltonians"]) == 4
    code, out, _ = run_cli(capsys, "symplectic", "CC")
    assert code == 0 and json.loads(out)["unsupported"].startswith("CenterNotTrivial")


def test_connection_command(capsys, tmp_path):
    mod = tmp_path / "m.json"
    mod.write_text(json.dumps({"builtin": "regular", "kind": [1, 1]}))
    nab = tmp_path / "n.json"
    nab.write_text(json.dumps({"builtin": "derivation"}))
    code, out, _ = run_cli(capsys, "connection", "M2", "--module", str(mod), "--nabla", str(nab), "--curvature")
    data = json.loads(out)
    assert code == 0 and data["valid"]
    assert all(set(x for r in R for x in r) == {"0"} for R in data["curvature"].values())
    nab.write_text(json.dumps({"builtin": "zero"}))
    code, out, _ = run_cli(capsys, "connection", "M2", "--module", str(mod), "--nabla", str(nab))
    assert code == 1 and not json.loads(out)["valid"]


def test_torsion_command(capsys, tmp_path):
    mod = tmp_path / "m.json"
    mod.write_text(json.dumps({"builtin": "der"}))
    nab = tmp_path / "n.json"
    nab.write_text(json.dumps({"builtin": "bracket"}))
    code, out, _ = run_cli(capsys, "connection", "M2", "--module", str(mod), "--nabla", str(nab), "--torsion")
    assert code == 0 and len(json.loads(out)["torsion"]) == 3


def test_weyl_command(capsys):
    code, out, _ = run_cli(capsys, "weyl", "--max-degree", "3")
    data = json.loads(out)
    assert code == 0 and data["mismatches"] == 0 and len(data["rows"]) == 100


def test_console_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "ncdg.cli", "run", "--suite", "weyl", "--seed", "5"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout
