import csv
import io
import json
import math

import numpy as np
import pytest

from kafourier.cli import main
from kafourier.config import RunConfig, load_config, parse_complex, parse_k, parse_number


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def gaussian_csv(tmp_path):
    path = tmp_path / "gauss.csv"
    r = np.linspace(0, 8, 161)
    lines = ["r,value_re,value_im"] + [f"{v:.17g},{math.exp(-v * v / 2):.17g},0.0" for v in r]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_kernel_plane_wave(capsys):
    code, out, _ = run(capsys, "kernel", "--a", "2", "--k", "0", "--N", "1", "--z", "0+1.5707963i")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["x1", "y1", "z_re", "z_im", "val_re", "val_im", "provenance"]
    for row in table:
        val = complex(float(row["val_re"]), float(row["val_im"]))
        assert abs(val - np.exp(-1j * float(row["x1"]) * float(row["y1"]))) <= 1e-12


def test_kernel_invalid_parameters(capsys):
    code, out, err = run(capsys, "kernel", "--a", "1", "--k", "0", "--N", "1")
    assert code == 2 and out == ""
    assert "2k > 1 - a" in err


def test_kernel_json_pairs_and_determinism(capsys):
    args = ("kernel", "--N", "2", "--a", "1", "--k", "0", "--z", "0.4+1i", "--count", "3",
            "--format", "json")
    code, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert code == 0 and first == second
    recs = json.loads(first)["kernel"]
    assert len(recs) == 9
    assert all(len(r["value"]) == 2 and len(r["x"]) == 2 for r in recs)


def test_kernel_series_for_general_k(capsys):
    code, out, _ = run(capsys, "kernel", "--N", "2", "--a", "1", "--k", "0.3,0.2", "--count", "2")
    assert code == 0
    assert {r["provenance"] for r in rows(out)} == {"series"}


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "2", "--a", "1", "--k", "0.5", "--count", "4")
    assert code == 0
    assert [float(r["eigenvalue"]) for r in rows(out)] == [3.0, 5.0, 5.0, 7.0]
    code, out, _ = run(capsys, "spectrum", "--count", "0")
    assert code == 0 and out.strip() == "eigenvalue,l,m,multiplicity"


def test_transform_gaussian(capsys, gaussian_csv):
    code, out, err = run(capsys, "transform", str(gaussian_csv), "--N", "1", "--a", "2", "--k", "0")
    assert code == 0
    diag = json.loads(err.strip().splitlines()[-1])
    assert abs(diag["norm_ratio"] - 1) <= 1e-8 and diag["interpolated"]
    got = np.array([float(r["value_re"]) for r in rows(out)])
    r = np.array([float(r["r"]) for r in rows(out)])
    np.testing.assert_allclose(got, np.exp(-r ** 2 / 2), atol=1e-6)


def test_transform_basis_function_phase(capsys, tmp_path):
    """f_{2,0} for a = 1 comes back multiplied by exp(-2 pi i) = 1."""
    from kafourier.sl2 import RadialSector, phi_basis
    from kafourier.dunkl import DeformParams
    sector = RadialSector(0, DeformParams(1, 1, 0.5))
    r = np.linspace(0, 40, 801)
    vals = phi_basis(2, sector, r)
    path = tmp_path / "phi2.csv"
    path.write_text("r,value_re,value_im\n" + "".join(f"{a:.17g},{b:.17g},0.0\n" for a, b in zip(r, vals)))
    code, out, _ = run(capsys, "transform", str(path), "--N", "1", "--a", "1", "--k", "0.5",
                       "--format", "json")
    assert code == 0
    res = json.loads(out)
    got = np.array([v["value"][0] for v in res["values"]])
    np.testing.assert_allclose(got, vals, atol=1e-5)


def test_transform_errors(capsys, tmp_path, gaussian_csv):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    code, _, err = run(capsys, "transform", str(empty))
    assert code == 2 and "empty" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("q,value_re,value_im\n1,2,3\n")
    assert run(capsys, "transform", str(bad))[0] == 2
    scattered = tmp_path / "xy.csv"
    scattered.write_text("x1,x2,value_re,value_im\n" + "".join(f"{i},{i},1,0\n" for i in range(5)))
    assert run(capsys, "transform", str(scattered), "--N", "2", "--k", "0")[0] == 2
    code, _, err = run(capsys, "transform", str(gaussian_csv), "--N", "1", "--a", "1", "--k", "0.5",
                       "--l-max", "2", "--max-defect", "1e-12")
    assert code == 3 and "Parseval" in err


def test_verify_suite(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--suite", "weber", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    report = json.loads(target.read_text())
    assert report["suite"] == "weber" and len(report["cases"]) == 20
    assert all(c["pass"] for c in report["cases"])
    assert set(report["cases"][0]) >= {"name", "paper_ref", "residual", "tolerance", "pass"}


def test_usage_errors(capsys):
    assert run(capsys, "kernel", "--nope")[0] == 2
    assert run(capsys, "verify", "--suite", "nope")[0] == 2
    assert run(capsys, "kernel", "--z", "abc")[0] == 2


# ------------------------------------------------------------------ config

def test_parsers():
    assert parse_number("2/3").denominator == 3
    assert parse_number("2") == 2 and isinstance(parse_number("1.5"), float)
    assert parse_k("0.5,1") == (0.5, 1)
    assert parse_complex("0+1.5i") == 1.5j and parse_complex("2") == 2


def test_config_file_and_flag_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.toml"
    cfg.write_text('N = 2\na = "2/3"\nk = [0.5, 0.5]\ncount = 3\n')
    loaded = load_config(cfg)
    assert loaded.N == 2 and loaded.count == 3
    assert loaded.params().a.denominator == 3
    monkeypatch.setenv("KAFOURIER_CONFIG", str(cfg))
    code, out, _ = run(capsys, "spectrum")
    assert code == 0 and len(rows(out)) == 3
    code, out, _ = run(capsys, "spectrum", "--count", "5")
    assert len(rows(out)) == 5


def test_config_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("colour = 1\n")
    with pytest.raises(ValueError, match="colour"):
        load_config(cfg)
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == 2


def test_default_config_values():
    cfg = RunConfig()
    assert cfg.with_overrides(count=None).count == 5
    assert cfg.with_overrides(count=9, unknown=1).count == 9
