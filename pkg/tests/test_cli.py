import csv
import io
import json
import subprocess
import sys

import pytest

from compactbvp.cli import EXIT_CODES, load_config, main

LAMBDA16 = 500.5581628012596  # smallest clamped discrete biharmonic eigenvalue on [0, 1], n = 16


def _rows(text):
    return list(csv.reader(line for line in io.StringIO(text) if not line.startswith("#")))


def _comments(text):
    return dict(line[2:].strip().split("=", 1) for line in text.splitlines() if line.startswith("# "))


def test_solve_csv(tmp_path):
    out = tmp_path / "sol.csv"
    assert main(["solve", "--problem", "problem1", "--n", "32", "--out", str(out)]) == 0
    text = out.read_text()
    rows = _rows(text)
    assert rows[0] == ["x", "u", "p", "d2", "d3", "d4"]
    assert len(rows) == 34
    meta = _comments(text)
    assert meta["problem"] == "problem1" and meta["n"] == "32"
    assert float(meta["rcond"]) > 1e-14
    assert float(rows[1][0]) == pytest.approx(0.3)
    assert float(rows[1][1]) == pytest.approx(-0.417129, abs=1e-6)


def test_solve_json_stdout(capsys):
    assert main(["solve", "--n", "8", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["n"] == 8
    assert len(doc["rows"]) == 9


def test_reruns_are_byte_identical(tmp_path):
    paths = [tmp_path / f"r{i}.csv" for i in range(2)]
    for p in paths:
        assert main(["study", "--ns", "8,16,32", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_accuracy_study_table(tmp_path):
    out = tmp_path / "acc.csv"
    assert main(["study", "--kind", "accuracy", "--ns", "8,16,32,64,128", "--out", str(out)]) == 0
    rows = _rows(out.read_text())
    assert rows[0] == ["field", "n", "norm_h", "norm_sup", "rate_h", "rate_sup"]
    body = rows[1:]
    assert len(body) == 25
    u32 = next(r for r in body if r[0] == "u" and r[1] == "32")
    assert float(u32[2]) == pytest.approx(1.07e-5, rel=0.02)
    first = next(r for r in body if r[0] == "u" and r[1] == "8")
    assert first[4] == "" and first[5] == ""


def test_truncation_study_with_pointwise(tmp_path):
    out, pw = tmp_path / "t.csv", tmp_path / "pw.csv"
    code = main([
        "study", "--kind", "truncation", "--ns", "16,32,64", "--out", str(out),
        "--pointwise-out", str(pw), "--pointwise-pair", "32,64", "--align", "index",
    ])
    assert code == 0
    assert _comments(out.read_text())["endpoints"] == "exclude"
    rows = _rows(pw.read_text())
    assert rows[0] == ["x", "j", "field", "slope"]
    d4_1 = next(r for r in rows[1:] if r[1] == "1" and r[2] == "d4")
    assert float(d4_1[3]) == pytest.approx(1.0, abs=0.3)


def test_pointwise_kind(capsys):
    assert main(["study", "--kind", "pointwise", "--ns", "32,64", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n_coarse"] == 32 and len(doc["rows"]) == 5 * 33


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    out = tmp_path / "o.csv"
    cfg.write_text(f"# accuracy on two grids\nproblem = problem1\nkind = accuracy\nns = 8,16\nout = {out}\n")
    assert main(["study", "--config", str(cfg)]) == 0
    assert len(_rows(out.read_text())) == 11
    # flags override the file
    assert main(["study", "--config", str(cfg), "--ns", "8,16,32"]) == 0
    assert len(_rows(out.read_text())) == 16


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["study", "--config", str(bad)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["exit_code"] == 1 and err["kind"] == "config"
    with pytest.raises(ValueError):
        load_config(str(bad))
    assert main(["study", "--config", str(tmp_path / "missing.cfg")]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["study", "--ns", ""],
        ["study", "--ns", "16,8"],
        ["solve", "--n", "2"],
        ["solve", "--bogus"],
        ["solve", "--n", "16", "--coef", "Q=1"],
        ["solve", "--n", "16", "--coef", "B"],
        ["study", "--kind", "pointwise", "--ns", "32,48"],
        ["solve", "--problem", "problem2", "--n", "16", "--coef", "A=1"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == EXIT_CODES["config"]
    assert json.loads(capsys.readouterr().err)["kind"] == "config"


def test_solvability_exit_2(capsys):
    h = 1.1 / 32
    assert main(["solve", "--n", "32", "--coef", f"D={(12 + 100 * h * h) / (4 * h)!r}"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["side"] == "left" and err["error"] == "SolvabilityViolation"


def test_singular_exit_3(capsys):
    b = -LAMBDA16 / 1.1**4
    argv = ["solve", "--n", "16", "--coef", "A=0", "--coef", "D=0", "--coef", "H=0", "--coef", f"B={b!r}"]
    assert main(argv) == 3
    assert json.loads(capsys.readouterr().err)["rcond"] < 1e-14


def test_console_entry_point(tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "compactbvp.cli", "solve", "--n", "8", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert len(_rows(out.read_text())) == 10
