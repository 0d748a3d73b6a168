import csv
import io
import json
import math
import subprocess
import sys

import pytest

from swave.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_moments_rows(capsys):
    code, out, _ = run(["moments", "--dim", "2", "--taus", f"0,{1 / math.sqrt(7)},1"], capsys)
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["tau", "mean_r_scaled", "mean_p_scaled", "source", "N"]
    assert float(rows[2][1]) == pytest.approx(math.sqrt(224 / 225), abs=1e-11)
    assert float(rows[2][2]) == pytest.approx(0.0, abs=1e-12)
    assert rows[1][1:] == ["1", "0", "analytic", "2"]


def test_moments_default_grid(capsys):
    code, out, _ = run(["moments"], capsys)
    rows = rows_of(out)
    assert code == 0 and len(rows) == 1 + 2 * 301
    assert {r[4] for r in rows[1:]} == {"2", "3"}


def test_moments_natural_units(capsys):
    code, out, _ = run(["moments", "--dim", "3", "--taus", "0", "--units", "natural",
                        "--delta-r", "2"], capsys)
    rows = rows_of(out)
    assert rows[0][1] == "mean_r"
    assert float(rows[1][1]) == pytest.approx(2 * 16 / (5 * math.sqrt(math.pi)), rel=1e-11)


def test_zero_samples_gives_header_only(capsys):
    code, out, _ = run(["moments", "--samples", "0"], capsys)
    assert code == 0
    assert out == "tau,mean_r_scaled,mean_p_scaled,source,N\n"


@pytest.mark.parametrize("argv", [
    ["moments", "--dim", "7"],
    ["moments", "--tau-max", "-1"],
    ["moments", "--taus", "0.5,0.2"],
    ["evolve", "--dim", "2,3"],
    ["evolve", "--gamma", "-1"],
    ["evolve", "--dim", "4", "--method", "spectral"],
    ["evolve", "--r-max", "3"],
    ["evolve", "--dt", "0.01"],
    ["evolve", "--family", "displaced", "--rho", "0"],
    ["wigner", "--dim", "4"],
    ["wigner", "--dim", "3", "--n-inner", "200"],
    ["sweep-gamma", "--gammas", "0.5,2"],
])
def test_config_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert out == ""
    assert "configuration error" in err


def test_config_error_writes_no_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, _, _ = run(["evolve", "--dim", "9", "--output", str(target)], capsys)
    assert code == 2 and not target.exists()


def test_bad_config_file(tmp_path, capsys):
    bad = tmp_path / "c.json"
    bad.write_text('{"family": "power", "colour": 3}')
    assert run(["moments", "--config", str(bad)], capsys)[0] == 2
    bad.write_text("not json")
    assert run(["moments", "--config", str(bad)], capsys)[0] == 2
    bad.write_text('{"grid": {"spacing": 1}}')
    assert run(["evolve", "--config", str(bad)], capsys)[0] == 2


def test_flags_beat_config_beat_defaults(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"dim": 3, "tau_max": 1.0, "samples": 5}))
    rows = rows_of(run(["moments", "--config", str(cfg)], capsys)[1])
    assert len(rows) == 6 and rows[-1][0] == "1" and rows[-1][4] == "3"
    rows = rows_of(run(["moments", "--config", str(cfg), "--samples", "3"], capsys)[1])
    assert len(rows) == 4 and rows[-1][0] == "1"


def test_evolve_spectral_summary(tmp_path, capsys):
    target = tmp_path / "ev.csv"
    code, out, _ = run(["evolve", "--method", "spectral", "--n", "1023",
                        "--samples", "101", "--output", str(target)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["implosion"] is True
    assert summary["tau_min"] == pytest.approx(1 / math.sqrt(7), abs=2e-3)
    assert summary["r_min_ratio"] == pytest.approx(math.sqrt(224 / 225), abs=1e-5)
    rows = rows_of(target.read_text())
    assert rows[0] == ["tau", "mean_r_scaled", "mean_p_scaled", "norm", "source", "N"]
    assert len(rows) == 102 and rows[1][4] == "spectral"


def test_evolve_three_dimensions_has_no_minimum(tmp_path, capsys):
    code, out, _ = run(["evolve", "--dim", "3", "--n", "1023", "--samples", "41",
                        "--output", str(tmp_path / "x.csv")], capsys)
    assert code == 0
    assert json.loads(out)["implosion"] is False


def test_evolve_solver_failure_keeps_partial_output(tmp_path, capsys):
    target = tmp_path / "ev.csv"
    code, out, err = run(["evolve", "--dim", "3", "--r-max", "9", "--n", "400",
                          "--tau-max", "10", "--samples", "101",
                          "--output", str(target)], capsys)
    assert code == 3
    assert json.loads(out)["status"] == "solver_error"
    rows = rows_of(target.read_text())
    assert 2 <= len(rows) < 102


def test_evolve_too_few_samples_is_numeric_failure(tmp_path, capsys):
    code, out, _ = run(["evolve", "--n", "511", "--samples", "8",
                        "--output", str(tmp_path / "x.csv")], capsys)
    assert code == 3
    assert json.loads(out)["status"] == "insufficient_sampling"


def test_wigner_json(capsys):
    code, out, _ = run(["wigner", "--n-r", "48", "--n-p", "48", "--n-angle", "24",
                        "--tol", "0.05"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["v_minus"] == pytest.approx(0.27, abs=0.02)
    assert doc["status"] == "ok"


def test_wigner_resolution_failure_exit_3(capsys):
    code, out, _ = run(["wigner", "--n-r", "8", "--n-p", "8", "--n-angle", "4",
                        "--n-inner", "32", "--tol", "1e-12"], capsys)
    assert code == 3
    assert json.loads(out)["status"] == "resolution_insufficient"


def test_sweep_gamma(capsys):
    code, out, _ = run(["sweep-gamma", "--gammas", "2,3"], capsys)
    rows = rows_of(out)
    assert code == 0
    assert rows[0] == ["gamma", "tau_min", "r_min_ratio", "method", "status"]
    assert float(rows[1][1]) == pytest.approx(1 / math.sqrt(7), abs=1e-5)
    assert float(rows[1][2]) == pytest.approx(math.sqrt(224 / 225), abs=1e-9)
    assert rows[2][4] == "ok"


def test_sweep_gamma_depth_band(capsys):
    # (0, 0.05) is our reading of "same order of magnitude" for the depth
    code, out, _ = run(["sweep-gamma", "--gammas", "1.5,2,3,4", "--method", "both"], capsys)
    rows = rows_of(out)[1:]
    assert code == 0 and len(rows) == 8
    for row in rows:
        assert row[4] == "ok"
        assert 0 < 1 - float(row[2]) < 0.05


def test_sweep_gamma_workers_same_bytes(capsys):
    one = run(["sweep-gamma", "--gammas", "1.5,2,3"], capsys)[1]
    two = run(["sweep-gamma", "--gammas", "1.5,2,3", "--workers", "2"], capsys)[1]
    assert one == two


@pytest.mark.parametrize("argv", [
    ["moments", "--dim", "2,3", "--tau-max", "3", "--samples", "301"],
    ["sweep-gamma", "--gammas", "1.5,2,3,4"],
])
def test_byte_identical_reruns(tmp_path, argv):
    outs = []
    for k in range(2):
        target = tmp_path / f"{k}.csv"
        proc = subprocess.run([sys.executable, "-m", "swave", *argv, "--output", str(target)],
                              capture_output=True)
        assert proc.returncode == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_validate_subset(capsys):
    code, out, _ = run(["validate", "--only", "1,2"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2 and all(line.startswith("PASS criterion") for line in lines)
