import csv
import io
import json
import subprocess
import sys
import time

import pytest

from bohr_rogosinski.cli import TABLE_COLUMNS, main, parse_m_range, read_coefficient_file

TABLES = {
    "phi": [0.280776, 0.39149, 0.441112, 0.467644, 0.482442],
    "psi": [0.355416, 0.430586, 0.464327, 0.481418, 0.490359],
    "Phi": [0.280776, 0.316912, 0.327911, 0.33152, 0.332726],
    "lambda": [0.154701, 0.188829, 0.197544, 0.199494, 0.199898],
    "Lambda": [0.1671, 0.240751, 0.267472, 0.276691, 0.279585],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_m_range():
    assert parse_m_range("1..5") == [1, 2, 3, 4, 5]
    assert parse_m_range("3") == [3]
    assert parse_m_range("1,2") == [1, 2]


def test_tables_default(capsys):
    start = time.perf_counter()
    code, out, _ = run(["tables"], capsys)
    assert time.perf_counter() - start < 5
    assert code == 0
    rows = csv_rows(out)
    assert list(rows[0]) == TABLE_COLUMNS
    assert len(rows) == 25
    for row in rows:
        assert abs(float(row["value"]) - TABLES[row["family"]][int(row["m"]) - 1]) <= 1e-5


def test_tables_single_family(capsys):
    code, out, _ = run(["tables", "--family", "lambda", "--m", "1"], capsys)
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["value"]) == pytest.approx(0.154701, abs=1e-6)
    assert float(rows[0]["k"]) == 1.0
    code, out, _ = run(["tables", "--family", "psi", "--m", "1..1", "--format", "json"], capsys)
    record = json.loads(out)
    assert record["schema_version"] == 1 and record["command"] == "tables"
    assert record["results"][0]["selection"] == "minimal"


def test_tables_roundtrip_repr_precision(capsys, tmp_path):
    path = tmp_path / "t.json"
    code, out, _ = run(["tables", "--format", "json", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    record = json.loads(path.read_text())
    from bohr_rogosinski.radii import RadiusFamily, compute_radius
    for row in record["results"]:
        assert row["value"] == compute_radius(RadiusFamily(row["family"], row["m"], row["k"])).value


def test_unknown_family_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["tables", "--family", "omega"])
    assert exc.value.code == 2


def test_bad_m_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["tables", "--m", "0..x"])
    assert exc.value.code == 2


def test_verify_passes(capsys):
    code, out, _ = run(["verify", "--family", "phi", "--m", "2", "--trials", "40"], capsys)
    assert code == 0
    row = csv_rows(out)[0]
    assert row["violations"] == "0" and row["passed"] == "True"


def test_verify_rogosinski(capsys):
    code, out, _ = run(["verify", "--family", "rogosinski", "--trials", "20", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["results"][0]["max_value"] < 0


def test_verify_past_radius_exits_1(capsys):
    code, out, _ = run(["verify", "--family", "phi", "--m", "2", "--trials", "200",
                        "--r-fraction", "1.2", "--format", "json"], capsys)
    assert code == 1
    res = json.loads(out)["results"][0]
    assert res["violations"] > 0 and res["violation_list"]


def test_evaluate_A_matches_closed_form(capsys):
    a, r = 0.5, 0.2
    code, out, _ = run(["evaluate", "--functional", "A", "--mobius-a", "0.5", "--r", "0.2",
                        "--format", "json"], capsys)
    assert code == 0
    expected = (a + 2 * r + a * r * r) / (1 + a * r) ** 2 + (1 - a * a) * a * r * r / (1 - a * r)
    assert json.loads(out)["results"][0]["value"] == pytest.approx(expected, abs=1e-12)


def test_evaluate_at_zero(capsys):
    code, out, _ = run(["evaluate", "--functional", "A", "--mobius-a", "0.3", "--r", "0",
                        "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["results"][0]["value"] == pytest.approx(0.3)


def test_evaluate_rogosinski_identity(capsys):
    for n, expected in ((0, 0.5), (1, 1.0)):
        code, out, _ = run(["evaluate", "--functional", "rogosinski", "--mobius-a", "0",
                            "--z", "0.5", "--n", str(n), "--format", "json"], capsys)
        row = json.loads(out)["results"][0]
        assert code == 0
        assert row["partial"] == pytest.approx(expected)
        assert row["bound"] == [1.0, 1.25][n]


def test_evaluate_needs_a_source(capsys):
    code, _, err = run(["evaluate", "--functional", "A", "--r", "0.2"], capsys)
    assert code == 2 and "mobius-a" in err


def test_evaluate_D_outside_guarantee(capsys):
    code, out, _ = run(["evaluate", "--functional", "D", "--mobius-a", "0.5", "--r", "0.4",
                        "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["results"][0]["outside_guarantee"] is True


def test_coefficient_file(tmp_path, capsys):
    path = tmp_path / "f.txt"
    path.write_text("0.5 0\n0.75 0\n-0.375 0\n")
    assert read_coefficient_file(str(path)) == [0.5, 0.75, -0.375]
    code, out, _ = run(["evaluate", "--functional", "A", "--coeffs", str(path), "--r", "0.1",
                        "--format", "json"], capsys)
    row = json.loads(out)["results"][0]
    assert code == 0 and row["rigorous"] is False
    f_val = 0.5 + 0.75 * 0.1 - 0.375 * 0.01
    df_val = 0.75 - 2 * 0.375 * 0.1
    assert row["value"] == pytest.approx(f_val + df_val * 0.1 + 0.375 * 0.01)


def test_malformed_coefficient_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("0.5 0\n0.2 zz\n")
    code, _, err = run(["evaluate", "--functional", "A", "--coeffs", str(path), "--r", "0.1"], capsys)
    assert code == 2 and ":2:" in err


def test_sharpness_confirmed(capsys):
    code, out, _ = run(["sharpness", "--family", "phi", "--m", "1", "--format", "json"], capsys)
    record = json.loads(out)
    assert code == 0 and record["confirmed"] is True
    assert record["results"][-1]["exceeds_one"] is True


def test_sharpness_inconclusive_exits_3(capsys):
    code, out, _ = run(["sharpness", "--family", "phi", "--m", "1", "--r-multiplier", "0.5"], capsys)
    assert code == 3
    assert all(row["exceeds_one"] == "False" for row in csv_rows(out))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bohr_rogosinski", "tables", "--family", "Phi", "--m", "1"],
                          capture_output=True, text=True, check=True)
    assert float(csv_rows(proc.stdout)[0]["value"]) == pytest.approx(0.280776, abs=1e-6)
