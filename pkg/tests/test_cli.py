import csv
import io
import json
import math

import pytest

from cylstokes.cli import FIELD_COLUMNS, main
from cylstokes.noslip import F0_G0


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


def test_geometry_s_line(capsys):
    code, out, _ = run(capsys, "geometry", "--R", "1", "--delta", "0.01")
    assert code == 0
    assert float(kv(out)["s"]) == pytest.approx(math.asinh(math.sqrt(0.010025)), rel=1e-15)


def test_geometry_half_gap(capsys):
    code, out, _ = run(capsys, "geometry", "--R", "2", "--delta", "0.02")
    assert float(kv(out)["half_gap"]) == pytest.approx(0.01, rel=1e-9)


@pytest.mark.parametrize("argv,name", [
    (["geometry", "--R", "1", "--delta", "0"], "delta"),
    (["geometry", "--R", "-1"], "R"),
    (["field", "--nx", "1"], "resolution"),
    (["rates", "--deltas", "1e-2,1e-3"], "deltas"),
    (["coeffs", "--case", "swirl"], "case"),
])
def test_bad_arguments_exit_2(capsys, argv, name):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert name in capsys.readouterr().err


def test_bad_bounds_exit_2(capsys):
    code, _, err = run(capsys, "field", "--xmin", "1", "--xmax", "0")
    assert code == 2 and "xmin" in err


def test_degenerate_exit_4(capsys):
    code, _, err = run(capsys, "field", "--background", "0,0,0", "--nx", "2", "--ny", "2")
    assert code == 4 and "degenerate" in err


def test_io_failure_exit_3(capsys, tmp_path):
    code, _, _ = run(capsys, "field", "--nx", "2", "--ny", "2", "-o", str(tmp_path / "missing" / "f.csv"))
    assert code == 3


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(scope="module")
def shear_csv():
    import contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        main(["field", "--background", "sh", "--xmin", "-2.5", "--xmax", "2.5", "--ymin", "-1", "--ymax", "1",
              "--nx", "5", "--ny", "3"])
    return buf.getvalue()


def test_field_csv_layout(shear_csv):
    lines = shear_csv.splitlines()
    assert lines[0] == ",".join(FIELD_COLUMNS)
    rows = _rows(shear_csv)
    assert len(rows) == 15
    # row-major with y outer
    assert [float(r["y"]) for r in rows[:5]] == [-1.0] * 5
    assert [float(r["x"]) for r in rows[:5]] == [-2.5, -1.25, 0.0, 1.25, 2.5]


def test_field_shear_gap_stress(shear_csv):
    centre = [r for r in _rows(shear_csv) if float(r["x"]) == 0.0 and float(r["y"]) == 0.0][0]
    assert float(centre["Sxy"]) == pytest.approx(2 * math.sqrt(1 / 0.01), rel=0.01)


def test_field_extensional_gap_is_diagonal(capsys):
    code, out, _ = run(capsys, "field", "--background", "ex", "--xmin", "-0.1", "--xmax", "0.1",
                       "--ymin", "0", "--ymax", "0.01", "--nx", "3", "--ny", "2")
    centre = [r for r in _rows(out) if float(r["x"]) == 0.0 and float(r["y"]) == 0.0][0]
    assert abs(float(centre["Sxy"])) < 1e-6 * abs(float(centre["Sxx"]))


def test_field_mask(shear_csv):
    inside = [r for r in _rows(shear_csv) if r["inside_mask"] == "1"]
    assert inside
    # (1.25, 0) lies inside the right cylinder
    assert any(float(r["x"]) == 1.25 and float(r["y"]) == 0.0 for r in inside)
    for r in inside:
        assert all(r[c] == "" for c in FIELD_COLUMNS[5:])


def test_field_byte_stable(tmp_path, capsys):
    args = ["field", "--background", "0.3,1,-0.5", "--nx", "7", "--ny", "5"]
    assert main(args + ["-o", str(tmp_path / "a.csv")]) == 0
    assert main(args + ["-o", str(tmp_path / "b.csv")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_field_json(capsys):
    code, out, _ = run(capsys, "field", "--json", "--nx", "3", "--ny", "2", "--xmin", "0", "--xmax", "1.005",
                       "--ymin", "0", "--ymax", "1")
    doc = json.loads(out)
    assert doc["columns"] == list(FIELD_COLUMNS)
    masked = [r for r in doc["rows"] if r[4] == 1]
    assert masked and all(v is None for v in masked[0][2:4] + masked[0][5:])


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--delta", "1e-3")
    doc = json.loads(out)
    for key in ("I1", "J1", "I22", "I23", "I32", "Irot", "J2", "Jrot", "c21", "c22", "c23",
                "K_v", "K_rot", "A1", "B1", "A2", "C2", "F0", "G0"):
        assert key in doc
    s = doc["s"]
    assert doc["I1"] == pytest.approx(-4 * math.pi / (2 * s - math.tanh(2 * s)), rel=1e-14)
    assert doc["c21"] == pytest.approx(2 * 1e-3**1.5, rel=0.01)
    assert doc["F0"] == pytest.approx(0.7280987824952262, abs=1e-9)
    assert (doc["F0"], doc["G0"]) == F0_G0()


@pytest.mark.parametrize("case", ["extensional", "shear", "rotation"])
def test_coeffs(capsys, case):
    code, out, _ = run(capsys, "coeffs", "--case", case, "--N", "10", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["case"] == case and doc["N"] == 10
    assert set(doc) >= {"case", "K", "N", "n", "first", "second", "tail_bound"}


def test_geometry_json(capsys):
    code, out, _ = run(capsys, "geometry", "--json")
    assert json.loads(out)["delta"] == 0.01


def test_rates_extensional(capsys):
    code, out, _ = run(capsys, "rates", "--background", "ex", "--deltas", "1e-2,1e-3,1e-4,1e-5", "--json")
    doc = json.loads(out)
    assert -0.55 <= doc["pressure"]["slope"] <= -0.45


def test_rates_shear_table(capsys):
    code, out, _ = run(capsys, "rates", "--background", "sh", "--deltas", "1e-2,1e-3,1e-4")
    table = {line.split()[0]: line.split() for line in out.splitlines()[1:]}
    assert -0.55 <= float(table["strain"][1]) <= -0.45
    assert -0.1 <= float(table["pressure"][1]) <= 0.1


def test_validate_subset(capsys):
    code, out, _ = run(capsys, "validate", "--criteria", "2,4,12")
    assert code == 0
    assert out.splitlines()[-1].startswith("OK")
    assert all(line.startswith("[PASS]") for line in out.splitlines()[:-1])


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", "--criteria", "4", "--json")
    doc = json.loads(out)
    assert doc["ok"] and doc["checks"][0]["pass"]


def test_figures(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    fig = tmp_path / "field.png"
    assert main(["field", "--background", "sh", "--nx", "20", "--ny", "12", "-o", str(tmp_path / "f.csv"),
                 "--figure", str(fig)]) == 0
    assert fig.read_bytes()[:4] == b"\x89PNG"
