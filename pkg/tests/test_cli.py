import json

import pytest

from trotter_jordan import cli, formulas
from trotter_jordan.linalg import MatrixOverflowError


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sweep_json(tmp_path, capsys):
    out = tmp_path / "g.json"
    argv = ["sweep", "--dim", "3", "--terms", "3", "--formula", "g", "--n", "1,2,4,8,16,32",
            "--trials", "4", "--seed", "9", "--scale", "1", "--out", str(out)]
    code, stdout, _ = run(argv, capsys)
    assert code == cli.EXIT_OK
    data = json.loads(out.read_text())
    assert data["config"]["formula"] == "g"
    assert len(data["records"]) == 24
    assert data["max_ratio"] <= 1.0
    assert "max ratio" in stdout


def test_sweep_csv_hermitian(tmp_path, capsys):
    out = tmp_path / "h.csv"
    argv = ["sweep", "--dim", "2", "--terms", "5", "--formula", "h", "--norm", "frobenius",
            "--n", "1,4", "--trials", "2", "--hermitian", "--out", str(out), "--format", "csv"]
    code, _, _ = run(argv, capsys)
    assert code == cli.EXIT_OK
    assert len(out.read_text().splitlines()) == 5


def test_sweep_classic_reports_no_violation(tmp_path, capsys):
    # the 1/(3n^2) bound does not cover the first-order ordered product
    argv = ["sweep", "--dim", "4", "--terms", "2", "--formula", "classic", "--n", "8,64,512",
            "--trials", "2", "--out", str(tmp_path / "c.json")]
    code, stdout, _ = run(argv, capsys)
    assert code == cli.EXIT_OK


@pytest.mark.parametrize(
    "extra",
    [
        ["--formula", "h", "--terms", "2"],
        ["--formula", "g", "--terms", "2", "--n", "4,2"],
        ["--formula", "g", "--terms", "2", "--scale", "50"],
        ["--formula", "g", "--terms", "2", "--dim", "1"],
    ],
)
def test_sweep_config_errors(tmp_path, capsys, extra):
    out = tmp_path / "bad.json"
    argv = ["sweep", "--dim", "3", "--out", str(out)] + extra
    code, _, err = run(argv, capsys)
    assert code == cli.EXIT_CONFIG
    assert not out.exists()


def test_argparse_errors_map_to_config_exit(capsys):
    assert cli.main(["sweep", "--dim", "3"]) == cli.EXIT_CONFIG
    assert cli.main(["no-such-command"]) == cli.EXIT_CONFIG


def test_sweep_overflow_exit(tmp_path, capsys, monkeypatch):
    def boom(terms, n):
        raise MatrixOverflowError("synthetic")

    monkeypatch.setitem(formulas.FORMULAS, "g", boom)
    argv = ["sweep", "--dim", "2", "--terms", "2", "--formula", "g", "--n", "1,2",
            "--out", str(tmp_path / "o.json")]
    code, _, err = run(argv, capsys)
    assert code == cli.EXIT_OVERFLOW
    assert "synthetic" in err


def test_verify_bounds_small(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, stdout, _ = run(["verify-bounds", "--trials", "8", "--seed", "3", "--out", str(out)], capsys)
    assert code == cli.EXIT_OK
    data = json.loads(out.read_text())
    assert data["passed"] is True
    names = {c["name"] for c in data["checks"]}
    assert names == {"g_bound", "h_bound", "taylor_C", "taylor_D", "taylor_H", "telescoping_CD", "telescoping_GH"}
    assert stdout.count("ok  ") == 14


def test_jet_check_cli(capsys):
    code, stdout, _ = run(["jet-check", "--dim", "3", "--max-terms", "4", "--trials", "5"], capsys)
    assert code == cli.EXIT_OK
    assert "notice: h base skipped for even m=2" in stdout
    assert stdout.strip().endswith("PASS")


def test_jet_check_bad_dim(capsys):
    code, _, _ = run(["jet-check", "--dim", "12"], capsys)
    assert code == cli.EXIT_CONFIG


def test_demo(capsys):
    code, stdout, _ = run(["demo"], capsys)
    assert code == cli.EXIT_OK
    assert "|exact - g_n|" in stdout
    assert len(stdout.strip().splitlines()) >= 10
