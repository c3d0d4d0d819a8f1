import csv
import io
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from bohrkit.cli import main, parse_grid, schema_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def validated(out: str, schema: str) -> dict:
    data = json.loads(out)
    jsonschema.validate(data, json.loads(schema_path(schema).read_text()))
    return data


def test_radius_json(capsys):
    code, out, _ = run(capsys, "radius", "--kind", "Rnp", "--N", "1", "--p", "2")
    assert code == 0
    data = validated(out, "radius")
    assert data["value"] == pytest.approx(1 / 3, abs=1e-12)


def test_radius_csv(capsys):
    code, out, _ = run(capsys, "radius", "--kind", "rp", "--a", "0.5", "--p", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert float(rows[0]["value"]) == pytest.approx(0.4, abs=1e-15)
    assert rows[0]["value"] == "0.40000000000000002"


def test_radius_domain_error(capsys):
    code, out, err = run(capsys, "radius", "--kind", "rp", "--a", "1", "--p", "1")
    assert code == 1
    assert out == ""
    assert "a must be < 1" in err
    assert err.count("\n") == 1


def test_radius_missing_a(capsys):
    code, _, err = run(capsys, "radius", "--kind", "rap")
    assert code == 1 and "--a is required" in err


def test_unknown_flag_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["radius", "--kind", "rp", "--bogus"])
    assert exc.value.code == 1


def test_parse_grid():
    assert parse_grid("0:0.3:0.1") == [0.0, 0.1, 0.2, 0.3]
    assert parse_grid("2:5:1", integer=True) == [2, 3, 4, 5]
    assert parse_grid("1:0:0.1") == []
    assert parse_grid("0.5,0.7") == [0.5, 0.7]


def test_table_rap_approaches_limit(tmp_path, capsys):
    out = tmp_path / "rap.csv"
    code, _, _ = run(capsys, "table", "--kind", "rap", "--p", "1", "--a", "0:0.999:0.001", "--out", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == ["kind", "a", "p", "N", "value", "method", "residual"]
    assert float(rows[-1][4]) == pytest.approx(math.sqrt(5) - 2, abs=2e-3)
    values = [float(r[4]) for r in rows[1:]]
    assert values == sorted(values, reverse=True)


def test_table_kn0_first_row(capsys):
    code, out, _ = run(capsys, "table", "--kind", "kn0", "--n", "2:16:1")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[1][:3] == ["2", "0.5", "0.70710678118654746"]
    assert len(rows) == 16


def test_table_empty_grid_is_header_only(capsys):
    code, out, _ = run(capsys, "table", "--kind", "rp", "--a", "1:0:0.1")
    assert code == 0
    assert out == "kind,a,p,N,value,method,residual\n"


def test_table_json_schema(capsys):
    _, out, _ = run(capsys, "table", "--kind", "kn", "--n", "2:4:1", "--format", "json")
    validated(out, "table_bounds")
    _, out, _ = run(capsys, "table", "--kind", "Rnp", "--N", "1,2", "--p", "1", "--format", "json")
    assert len(validated(out, "table_radius")["rows"]) == 2


def test_table_gnuplot(tmp_path, capsys):
    out = tmp_path / "rp.csv"
    code, _, _ = run(capsys, "table", "--kind", "rp", "--out", str(out), "--gnuplot")
    assert code == 0
    script = (tmp_path / "rp.gp").read_text()
    assert str(out) in script and script.startswith("set datafile separator")


def test_table_gnuplot_needs_out(capsys):
    code, _, err = run(capsys, "table", "--kind", "rp", "--gnuplot")
    assert code == 1 and "--out" in err


def test_table_unwritable_path(capsys):
    code, _, err = run(capsys, "table", "--kind", "rp", "--out", "/nonexistent/dir/x.csv")
    assert code == 1 and err.startswith("bohrkit: error:")


def test_verify_refined_a(capsys):
    code, out, _ = run(capsys, "verify", "--kind", "refined-a", "--r", "0.5", "--trials", "1000", "--seed", "7")
    assert code == 0
    assert validated(out, "campaign")["violations"] == 0


def test_verify_improved_precondition(capsys):
    code, _, err = run(capsys, "verify", "--kind", "improved", "--N", "1", "--p", "1", "--r", "0.5")
    assert code == 1 and "radius" in err


def test_verify_dr(capsys):
    code, out, _ = run(capsys, "verify", "--kind", "dr", "--n", "2", "--q", "2", "--trials", "100", "--seed", "1")
    assert code == 0
    assert validated(out, "campaign")["violations"] == 0


def test_sharpness_bombieri(capsys):
    code, out, _ = run(capsys, "sharpness", "--kind", "bombieri", "--r", "0.75")
    data = validated(out, "witness")
    assert code == 0
    assert data["excess"] == pytest.approx(0.12915490210770176, abs=1e-12)


def test_sharpness_classical(capsys):
    code, out, _ = run(capsys, "sharpness", "--kind", "classical", "--r", "0.34")
    assert code == 0
    assert validated(out, "witness")["witness"]["a"] >= 0.9706


def test_sharpness_classical_below(capsys):
    code, _, err = run(capsys, "sharpness", "--kind", "classical", "--r", "0.33")
    assert code == 1 and "radius" in err


def test_multidim_subcommands(capsys):
    code, out, _ = run(capsys, "multidim", "dr-check", "--n", "3", "--q", "3", "--seed", "2")
    assert code == 0 and validated(out, "dr_check")["ok"]
    code, out, _ = run(capsys, "multidim", "bounds", "--n", "2:8:1")
    assert code == 0 and len(validated(out, "bounds")["rows"]) == 7
    code, out, _ = run(capsys, "multidim", "extremal-scan", "--grid", "0.7:0.75:0.05")
    rows = validated(out, "extremal_scan")["rows"]
    assert rows[-1]["full_sum"] == pytest.approx(1.1291549021077018, abs=1e-12)


def test_dr_check_from_file(tmp_path, capsys):
    from bohrkit.multidim import MultiSeries

    F = MultiSeries.from_dict_coeffs(2, {(0, 0): 0.5, (1, 0): 0.9})
    path = tmp_path / "f.json"
    path.write_text(json.dumps(F.to_dict()))
    code, out, _ = run(capsys, "multidim", "dr-check", "--series", str(path))
    assert code == 2
    assert not validated(out, "dr_check")["ok"]


def test_series_and_evaluate_round_trip(tmp_path, capsys):
    path = tmp_path / "f.json"
    code, _, _ = run(capsys, "series", "--family", "moebius", "--a", "0.6", "--M", "512", "--out", str(path))
    assert code == 0
    validated(path.read_text(), "series")
    code, out, _ = run(capsys, "evaluate", "--series", str(path), "--kind", "refined-a", "--r", "0.5")
    data = validated(out, "functional")
    assert code == 0
    assert abs(data["margin"]) <= 2 * data["truncation_error"]


def test_truncation_env_override(monkeypatch, capsys):
    monkeypatch.setenv("BOHR_TRUNCATION", "8")
    _, out, _ = run(capsys, "series", "--family", "moebius", "--a", "0.5")
    assert json.loads(out)["truncation_order"] == 8


def test_selfcheck_schema_and_determinism(capsys):
    argv = ("selfcheck", "--seed", "3", "--trials", "20", "--multidim-trials", "10")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    validated(out1, "selfcheck")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bohrkit", "radius", "--kind", "Rp", "--p", "1"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["value"] == pytest.approx(math.sqrt(5) - 2)
