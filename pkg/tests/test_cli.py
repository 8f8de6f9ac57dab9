import json
import os
import subprocess
import sys

import pytest

from conftest import ROOT, SRC, spec_path

SCHEMA = json.loads(
    (SRC / "addtheo" / "schema" / "report.schema.json").read_text(encoding="utf-8")
)


def run_cli(*args, expect_code=0):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "addtheo.cli", *args],
        capture_output=True,
        text=True,
        cwd=str(ROOT),
        env=env,
        timeout=300,
    )
    assert proc.returncode == expect_code, (
        f"exit {proc.returncode} != {expect_code}\nstdout: {proc.stdout}\n"
        f"stderr: {proc.stderr}"
    )
    return proc


def validate_report(stdout: str) -> dict:
    jsonschema = pytest.importorskip("jsonschema")
    report = json.loads(stdout)
    jsonschema.validate(report, SCHEMA)
    return report


def test_derive_exp_golden():
    proc = run_cli("derive", spec_path("exp-t.spec"))
    assert proc.stdout == "x*y - z\n"


def test_derive_cosh_golden():
    proc = run_cli("derive", spec_path("cosh.spec"))
    assert proc.stdout == "2*x*y*z - z^2 - y^2 - x^2 + 1\n"


def test_derive_broken_spec_exit_2():
    proc = run_cli("derive", spec_path("broken.spec"), expect_code=2)
    assert "discriminant" in proc.stderr


def test_derive_json_schema_and_content():
    proc = run_cli("derive", spec_path("exp-t.spec"), "--json")
    report = validate_report(proc.stdout)
    assert report["status"] == "ok"
    assert report["result"]["theorem"]["G"] == "x*y - z"
    assert report["result"]["theorem"]["degrees"] == [1, 1, 1]


def test_derive_stdout_deterministic():
    a = run_cli("derive", spec_path("cosh.spec"), "--json")
    b = run_cli("derive", spec_path("cosh.spec"), "--json")
    assert a.stdout == b.stdout


def test_verify_ok_and_fail():
    proc = run_cli("verify", spec_path("exp-t.spec"), "--g", "x*y - z")
    assert proc.stdout.startswith("ok max_residual=")
    proc = run_cli("verify", spec_path("exp-t.spec"), "--g", "x + y - z", expect_code=1)
    assert "exceeds tol" in proc.stderr


def test_verify_g_from_file(tmp_path):
    g_file = tmp_path / "g.txt"
    g_file.write_text("x*y - z\n")
    run_cli("verify", spec_path("exp-t.spec"), "--g", str(g_file))


def test_degrees_line():
    proc = run_cli("degrees", spec_path("wp-lemniscatic.spec"))
    assert proc.stdout == "m=1 nu=2 lambda0=2 predicted=2\n"
    proc = run_cli("degrees", spec_path("exp-t.spec"), "--derive")
    assert proc.stdout == "m=1 nu=1 lambda0=1 predicted=1 actual=1,1,1\n"


def test_symmetry_lines():
    proc = run_cli("symmetry", spec_path("wp-prime.spec"))
    assert "lambda0=1" in proc.stdout
    proc = run_cli("symmetry", spec_path("wp-squared.spec"))
    assert "multipliers=1,-1,i,-i" in proc.stdout
    assert "lambda0=4" in proc.stdout
    proc = run_cli("symmetry", spec_path("exp-t.spec"), "--json")
    report = validate_report(proc.stdout)
    assert report["result"]["symmetry"]["lambda0"] == 1


def test_krel_exp_and_rational():
    proc = run_cli("krel", spec_path("exp-t.spec"))
    assert proc.stdout.splitlines()[0] == "x1*x2 - x3*x4"
    assert "degrees=1,1,1,1 lambda=1" in proc.stdout
    proc = run_cli("krel", spec_path("rational-u.spec"))
    assert proc.stdout.splitlines()[0] == "x1 + x2 - x3 - x4"


def test_reduce_f(tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("Z - X*Y\n")
    proc = run_cli("reduce-f", str(f), "--x0", "1", "--y0", "1")
    assert proc.stdout == "z1*z2 - z3\n"
    run_cli("reduce-f", str(f), "--x0", "0", "--y0", "1", expect_code=3)
    f2 = tmp_path / "f2.txt"
    f2.write_text("Z - X - Y\n")
    proc = run_cli("reduce-f", str(f2), "--x0", "0", "--y0", "0")
    assert proc.stdout == "z1 + z2 - z3\n"


def test_same_command(tmp_path):
    t2 = tmp_path / "exp-t2.spec"
    t2.write_text("class: exp\nphi: t^2\n")
    proc = run_cli("same", spec_path("exp-t.spec"), str(t2))
    assert proc.stdout.startswith("same=true alpha=2")
    proc = run_cli("same", spec_path("exp-t.spec"), spec_path("cosh.spec"))
    assert proc.stdout == "same=false\n"
    proc = run_cli("same", spec_path("cosh.spec"), spec_path("cosh.spec"), "--json")
    report = validate_report(proc.stdout)
    assert report["result"]["same_theorem"]["same"] is True


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text("class: exp\nphi: t +\n")
    proc = run_cli("derive", str(bad), expect_code=2)
    assert "error:" in proc.stderr


def test_json_error_report_validates(tmp_path):
    proc = run_cli("derive", spec_path("broken.spec"), "--json", expect_code=2)
    report = validate_report(proc.stdout)
    assert report["status"] == "parse-error"
    assert "discriminant" in report["message"]


def test_timing_on_stderr_only():
    proc = run_cli("derive", spec_path("exp-t.spec"))
    assert "elapsed_ms" not in proc.stdout
    assert "elapsed_ms=" in proc.stderr
