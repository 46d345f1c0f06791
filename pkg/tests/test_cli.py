import json
import math
import os
import subprocess
import sys

import pytest

from annuli.cli import FORMAT_VERSION, run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_volume_scalar(capsys):
    code, out, _ = _run(capsys, "volume", "--dim", "2", "--r", "2", "--e", "1")
    assert code == 0 and float(out) == pytest.approx(3 * math.pi, rel=1e-15)
    code, out, _ = _run(capsys, "volume", "--dim", "2", "--r", "2", "--e", "1", "--digits", "12")
    assert out.strip() == "9.42477796077"
    assert out.strip().startswith("9.42477796")


def test_fourier_scalar(capsys):
    code, out, _ = _run(capsys, "fourier", "--dim", "3", "--r", "1", "--e", "1", "--s", "1")
    assert code == 0 and abs(float(out) + 0.075991) <= 1e-6


def test_usage_errors(capsys):
    assert _run(capsys, "volume", "--dim", "2", "--r", "2")[0] == 2
    assert _run(capsys, "volume", "--dim", "2", "--r", "2", "--e", "3")[0] == 2
    assert _run(capsys, "frobnicate")[0] == 2
    assert _run(capsys, "volume", "--dim", "2", "--r", "2", "--e", "1", "--bogus")[0] == 2
    assert _run(capsys)[0] == 2
    assert _run(capsys, "average", "--dim", "2", "--r", "1", "--e", "0.5", "--field", "blob")[0] == 2
    assert _run(capsys, "fourier", "--dim", "2", "--e", "1", "--s", "1")[0] == 2
    assert _run(capsys, "ergodic", "--dim", "2", "--radii", "10", "--e", "1")[0] == 2


def test_help_exits_zero(capsys):
    assert _run(capsys, "--help")[0] == 0


def test_dichotomy_csv(capsys, tmp_path):
    out_path = tmp_path / "d.csv"
    code, _, _ = _run(capsys, "dichotomy", "--dim", "2", "--a", "2", "--deltas", "1e-2,1e-4,1e-8,1e-16",
                      "--n-rad", "64", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == f"# format: {FORMAT_VERSION}"
    config = json.loads(lines[1][len("# config: "):])
    assert config["command"] == "dichotomy" and config["n_rad"] == 64
    assert lines[2] == "delta,h,lambda,measure,norm_p,ratio,paper_bound"
    ratios = [float(line.split(",")[5]) for line in lines[3:]]
    assert len(ratios) == 4 and all(b >= a for a, b in zip(ratios, ratios[1:]))


def test_replay_reproduces(capsys, tmp_path):
    first = tmp_path / "scan.csv"
    again = tmp_path / "again.csv"
    args = ["fourier", "--dim", "2", "--thickness", "pow:1,0.5", "--s", "1", "--r-grid", "lin:1,50,20"]
    assert _run(capsys, *args, "--out", str(first))[0] == 0
    assert _run(capsys, "--replay", str(first), "--out", str(again))[0] == 0
    assert first.read_text() == again.read_text()


def test_replay_detects_tampering(capsys, tmp_path):
    path = tmp_path / "v.csv"
    assert _run(capsys, "volume", "--dim", "3", "--r", "1", "--e", "1", "--norm", "max", "--out", str(path))[0] == 0
    text = path.read_text()
    assert text.splitlines()[-1] == "8.0"
    path.write_text(text.replace("8.0", "8.5"))
    assert _run(capsys, "--replay", str(path))[0] == 3


def test_replay_json(capsys, tmp_path):
    path = tmp_path / "e.json"
    args = ["ergodic", "--dim", "2", "--wave", "1,0", "--thickness", "pow:1,0.5", "--radii", "10,100,1000", "--format", "json"]
    assert _run(capsys, *args, "--out", str(path))[0] == 0
    doc = json.loads(path.read_text())
    assert set(doc) == {"meta", "rows"} and doc["meta"]["format"] == FORMAT_VERSION
    assert [row["r"] for row in doc["rows"]] == [10.0, 100.0, 1000.0]
    assert _run(capsys, "--replay", str(path))[0] == 0


def test_replay_missing_config(capsys, tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    assert _run(capsys, "--replay", str(path))[0] == 2
    assert _run(capsys, "--replay", str(tmp_path / "nope.csv"))[0] == 2


def test_average_and_maximal(capsys):
    code, out, _ = _run(capsys, "average", "--dim", "2", "--field", "cex", "--x", "1.5", "--r", "1.5", "--e", "0.01")
    assert code == 0
    value, err = map(float, out.splitlines()[-1].split(","))
    assert value == pytest.approx(0.47135050604, rel=1e-9) and err < 1e-8
    code, out, _ = _run(capsys, "average", "--dim", "3", "--field", "trig:1,0,0", "--r", "0.5", "--sphere",
                        "--scheme", "prod:8,64")
    assert code == 0 and abs(float(out.splitlines()[-1].split(",")[0])) < 1e-12
    code, out, _ = _run(capsys, "maximal", "--dim", "2", "--field", "radial-pow:0", "--radii", "log:0.1,3,8", "--e", "0.01")
    assert code == 0 and float(out) == 1.0


def test_lemma_checks(capsys):
    code, out, _ = _run(capsys, "lemma-check", "--lemma", "norm")
    assert code == 0 and out.count("\n") == 6
    code, out, _ = _run(capsys, "lemma-check", "--lemma", "cap", "--trials", "5", "--n", "100000")
    assert code == 0
    code, out, _ = _run(capsys, "lemma-check", "--lemma", "growth", "--dim", "2")
    assert code == 0 and out.splitlines()[-1].endswith(",1")


def test_lemma_check_failure_exit_code(capsys):
    # an impossible tolerance makes the check fail
    code, _, err = _run(capsys, "lemma-check", "--lemma", "norm", "--dims", "3", "--tol", "-1")
    assert code == 3 and "check failed" in err


def test_ergodic_average_mode(capsys, tmp_path):
    matrix = tmp_path / "a.csv"
    matrix.write_text("0.25\n")
    code, out, _ = _run(capsys, "ergodic", "--dim", "1", "--matrix", str(matrix), "--wave", "1", "--e", "1",
                        "--radii", "3.3,7.1", "--mode", "average", "--omega", "0.2")
    assert code == 0
    rows = [list(map(float, line.split(","))) for line in out.splitlines()[3:]]
    for r, e, fre, fim, err, sre, sim in rows:
        assert abs(complex(fre, fim) - complex(sre, sim)) <= 4 * err + 1e-12


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "annuli", "volume", "--dim", "1", "--r", "5", "--e", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "4.0\n"


def test_output_independent_of_threads(tmp_path):
    outs = []
    for threads in ("1", "4"):
        path = tmp_path / f"m{threads}.csv"
        env = dict(os.environ, ANNULI_THREADS=threads)
        subprocess.run([sys.executable, "-m", "annuli", "average", "--dim", "3", "--field", "cex", "--x", "0.3",
                        "--r", "0.4", "--e", "0.1", "--scheme", "mc:300000,5", "--out", str(path)], env=env, check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
