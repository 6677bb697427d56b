import json
import subprocess
import sys

import pytest

from chowdr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("CHOWDR_COLOR", "never")


def test_dr_flagship(capsys, data_dir):
    code, out, _ = run(capsys, "dr", "-m", str(data_dir / "flagship.chow"), "-d", "2")
    assert code == 0
    assert "DR = theta_hat  [pt]" in out


@pytest.mark.parametrize("formula", ["main", "abelian", "hain", "albanese", "sections"])
def test_dr_formulas_json(capsys, data_dir, formula):
    code, out, _ = run(capsys, "dr", "-m", str(data_dir / "flagship.chow"), "--formula", formula, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "theta_hat"
    assert doc["is_point_class"] is True


def test_eval(capsys, data_dir):
    code, out, _ = run(capsys, "eval", "-m", str(data_dir / "flagship.chow"), "-e", "-1/2 * push(pi, c1(L)^2)")
    assert (code, out.strip()) == (0, "theta_hat")
    code, out, _ = run(capsys, "eval", "-m", str(data_dir / "flagship.chow"), "-e", "integrate(c1(P)^2)", "--json")
    assert code == 0
    assert json.loads(out) == {"expression": "integrate(c1(P)^2)", "type": "rational", "value": "-2"}


@pytest.mark.parametrize("argv,code", [
    (["eval", "-e", "c1(L ^"], 2),
    (["eval", "-e", "0.5"], 2),
    (["eval", "-e", "nope"], 3),
    (["eval", "-e", "exp(1)"], 3),
    (["eval", "-e", "x", "-r", "missing"], 2),
])
def test_exit_codes(capsys, data_dir, argv, code):
    argv = argv[:1] + ["-m", str(data_dir / "flagship.chow")] + argv[1:]
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("error: ")


def test_precondition_exit(capsys, data_dir):
    code, _, err = run(capsys, "dr", "-m", str(data_dir / "flagship_g2.chow"), "--formula", "hain")
    assert code == 4
    assert "NotACurveFamily" in err
    code, _, _ = run(capsys, "dr", "-m", str(data_dir / "flagship.chow"), "-d", "0")
    assert code == 4


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "dr", "-m", str(tmp_path / "absent.chow"))
    assert code == 2


def test_bad_model_file(capsys, tmp_path):
    p = tmp_path / "bad.chow"
    p.write_text("ring r dim 1 { basis 0: one; basis 1: a; product a * a = a; }\n")
    code, _, err = run(capsys, "eval", "-m", str(p), "-e", "1")
    assert code == 2
    assert "1:" in err


def test_verify_json_is_deterministic(capsys):
    code, first, _ = run(capsys, "verify", "--suite", "fourier", "--json")
    assert code == 0
    _, second, _ = run(capsys, "verify", "--suite", "fourier", "--json")
    assert first == second
    doc = json.loads(first)
    assert doc["status"] == "pass"
    assert "duration_s" not in doc["suites"][0]


def test_verify_timing(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "poincare", "--json", "--timing")
    assert code == 0
    assert "duration_s" in json.loads(out)["suites"][0]


def test_verify_failure_exit(capsys, monkeypatch):
    from chowdr import verify

    def broken(rec):
        rec.equal("broken.one", "1 = 2", 2, lambda: 1)

    monkeypatch.setitem(verify._RUNNERS, "ring", broken)
    code, out, _ = run(capsys, "verify", "--suite", "ring")
    assert code == 1
    assert "FAIL broken.one" in out


def test_models(capsys):
    code, out, _ = run(capsys, "models", "list")
    assert code == 0
    assert "flagship_family" in out
    code, out, _ = run(capsys, "models", "describe", "elliptic_square")
    assert code == 0
    assert "morphism p1" in out
    code, _, _ = run(capsys, "models", "describe", "nothing_here")
    assert code == 2


def test_color(capsys, monkeypatch):
    monkeypatch.setenv("CHOWDR_COLOR", "always")
    _, out, _ = run(capsys, "verify", "--suite", "fourier")
    assert "\x1b[32mPASS" in out


def test_module_entry(data_dir):
    proc = subprocess.run([sys.executable, "-m", "chowdr", "dr", "-m", str(data_dir / "flagship.chow")],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert "DR = theta_hat" in proc.stdout
