import csv
import io
import json

import pytest

from henon.cli import run
from henon.morse_index import MorseReport


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    return list(csv.reader(io.StringIO(text)))


def test_zeros(capsys):
    code, out, _ = call(capsys, "zeros", "--beta", "0", "--count", "2")
    assert code == 0
    rows = table(out)
    assert rows[0] == ["i", "zero"]
    assert rows[1][0] == "1" and rows[1][1].startswith("2.404825558")
    assert rows[2][0] == "2" and rows[2][1].startswith("5.52007811")
    assert "\r" not in out


def test_morse_limit_json(capsys):
    code, out, _ = call(capsys, "morse-limit", "--N", "2", "--alpha", "0", "--m", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["schema_version"] == 1
    assert obj["total"] == 6 and obj["resonant"] is False


def test_classify(capsys):
    code, out, _ = call(capsys, "classify", "--alpha", "0", "--n-max", "4")
    assert code == 0
    assert [r[1] for r in table(out)[1:]] == ["Nonradial", "Nonradial", "Radial", "Radial"]


def test_morse_json_roundtrip(capsys):
    code, out, _ = call(capsys, "morse", "--N", "2", "--alpha", "0", "--p", "1.001", "--m", "2",
                        "--precision", "17")
    assert code == 0
    obj = json.loads(out)
    obj.pop("schema_version")
    report = MorseReport.from_dict(obj)
    assert report.total == 6
    assert report.to_dict()["nus"] == obj["nus"]


def test_exit_codes(capsys):
    assert call(capsys, "zeros", "--count", "2")[0] == 64
    assert call(capsys, "zeros", "--beta", "0", "--bogus")[0] == 64
    code, _, err = call(capsys, "zeros", "--beta", "-1")
    assert code == 1 and err.count("\n") == 1
    code, _, err = call(capsys, "beta-i", "--m", "20")
    assert code == 2 and err.startswith("numerical failure")
    assert call(capsys, "solve-radial", "--N", "3", "--p", "9")[0] == 1


@pytest.mark.parametrize("argv", [
    ["sweep", "--alpha", "0.5:0.7:3", "--m", "2"],
    ["spectrum", "--N", "3", "--alpha", "1"],
    ["nu", "--p", "1.5", "--m", "2"],
    ["expansion", "--p", "1.01", "--m", "1"],
])
def test_determinism(capsys, argv):
    first = call(capsys, *argv)
    second = call(capsys, *argv)
    assert first[0] == 0 and first == second


def test_sweep_shows_jump(capsys):
    code, out, _ = call(capsys, "sweep", "--command", "morse-limit", "--alpha", "0.55,0.65")
    assert code == 0
    rows = table(out)
    assert rows[0] == ["N", "alpha", "p", "m", "status", "value"]
    assert [r[5] for r in rows[1:]] == ["6", "8"]
    assert all(r[4] == "ok" for r in rows[1:])


def test_sweep_empty_grid_is_header_only(capsys):
    code, out, _ = call(capsys, "sweep", "--alpha", "")
    assert code == 0 and out == "N,alpha,p,m,status,value\n"


def test_sweep_records_failures(capsys):
    code, out, _ = call(capsys, "sweep", "--command", "amplitude", "--N", "3", "--p", "1.5,9")
    assert code == 0
    rows = table(out)
    assert rows[1][4] == "ok" and rows[2][4].startswith("DomainError")


def test_sweep_limit(capsys):
    assert call(capsys, "sweep", "--alpha", "0:1:200", "--m", "1:60:60")[0] == 1


def test_solve_radial_columns(capsys):
    code, out, _ = call(capsys, "solve-radial", "--p", "2", "--m", "2")
    rows = table(out)
    assert rows[0] == ["t", "r", "w", "u_normalized"]
    assert float(rows[1][3]) == 1.0 and float(rows[-1][3]) == 0.0


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HENON_OUTPUT_DIR", str(tmp_path))
    code, out, _ = call(capsys, "beta-i", "--output", "sub/beta.csv")
    assert code == 0 and out == ""
    rows = table((tmp_path / "sub" / "beta.csv").read_text())
    assert rows[1][0] == "1" and abs(float(rows[1][1]) - 2.305) < 5e-3


def test_resonances(capsys):
    code, out, _ = call(capsys, "resonances", "--n-max", "4", "--format", "json")
    obj = json.loads(out)
    alphas = [row[obj["columns"].index("alpha")] for row in obj["rows"]]
    assert code == 0 and abs(alphas[0] - 0.6030) < 5e-4
