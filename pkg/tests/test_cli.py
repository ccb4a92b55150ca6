import json
import subprocess
import sys

import numpy as np
import pytest

from dlh.cli import main
from dlh.errors import ConvergenceError


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_spectrum_csv_header_and_rows(capsys):
    rc, out, _ = run_cli(capsys, "spectrum", "--n", "1", "--m", "1")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "n,m,l,E_over_hw,Lz_over_h"
    assert lines[1] == "0,0,0,0.5,0"
    assert lines[2] == "0,1,1,0.5,1"
    assert lines[3] == "1,0,-1,1.5,-1"
    assert lines[4] == "1,1,0,1.5,0"
    assert len(lines) == 5


def test_spectrum_json(capsys):
    rc, out, _ = run_cli(capsys, "spectrum", "--format", "json", "--n", "0", "--m", "2")
    assert rc == 0
    payload = json.loads(out)
    assert payload["sigma"] == 1
    assert [r["Lz_over_h"] for r in payload["rows"]] == [0, 1, 2]


def test_derive_csv_and_json(capsys):
    rc, out, _ = run_cli(capsys, "derive")
    assert rc == 0
    rows = dict(line.split(",", 1) for line in out.splitlines()[1:])
    assert rows["sigma"] == "1"
    assert rows["u"] == "0.5"
    assert rows["l_m"] == "1.0"
    # desk-scale units sit far from the lab regime, so screening warns
    assert rows["regime_verdict"] == "warn"
    rc, out, _ = run_cli(capsys, "derive", "--format", "json")
    payload = json.loads(out)
    assert payload["omega"] == 1.0
    assert payload["nu"] == [0.0, 0.0]
    assert payload["regime"]["verdict"] == "warn"


def test_phase_c1_rectangle(capsys):
    rc, out, _ = run_cli(capsys, "phase", "--named", "C1")
    assert rc == 0
    payload = json.loads(out)
    assert payload["kind"] == "C1_rectangle"
    assert payload["signed_area"] == 1.0
    assert payload["gamma_area_law"] == -0.125
    assert payload["line_over_area_law"] == pytest.approx(-2.0)
    rc, out, _ = run_cli(capsys, "phase", "--named", "C1", "--area", "2.0")
    assert json.loads(out)["gamma_area_law"] == -0.25


def test_phase_box_kinds(capsys):
    rc, out, _ = run_cli(capsys, "phase", "--named", "ABCHEFA")
    assert rc == 0
    payload = json.loads(out)
    assert payload["S_closed_form"] == pytest.approx(-0.75)
    assert payload["S_deviation"] < 1e-12
    # u = 0.5 for the default config, so the angle prefactor is S/2
    assert payload["angle_prefactor"] == pytest.approx(payload["S_quadrature"] / 2.0)
    rc, out, _ = run_cli(capsys, "phase", "--named", "ADCHEFA", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "quantity,value"
    assert any(line.startswith("S_closed_form,0.5") for line in lines)


def test_displace_json_and_csv(capsys):
    rc, out, _ = run_cli(
        capsys, "displace", "--nu-re", "0.3", "--nu-im", "-0.2", "--n-max", "14", "--m-max", "2"
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["nu"] == [0.3, -0.2]
    assert len(payload["coefficients"]) == 15 * 3
    assert payload["trunc_deficit"] < 1e-9
    rc, out, _ = run_cli(capsys, "displace", "--format", "csv", "--nu-re", "0.3")
    lines = out.splitlines()
    assert lines[0].startswith("# displaced state n=0 m=0 nu_re=0.3")
    assert lines[1].startswith("# trunc_deficit")
    assert lines[2] == "n,m,re,im"


def test_connection_csv_and_json(capsys):
    rc, out, _ = run_cli(capsys, "connection", "--param", "lambda", "--window", "0..2")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "row,col,re,im"
    assert len(lines) == 1 + 9
    rc, out, _ = run_cli(
        capsys, "connection", "--param", "B", "--window", "0..3", "--format", "json"
    )
    payload = json.loads(out)
    mat = np.array([[complex(re, im) for re, im in row] for row in payload["matrix"]])
    assert mat.shape == (4, 4)
    assert np.abs(mat - mat.conj().T).max() < 1e-15


def test_holonomy_identity_loop(capsys, tmp_path):
    plot = tmp_path / "defects.txt"
    rc, out, _ = run_cli(
        capsys,
        "holonomy",
        "--named", "ABCHEFA",
        "--Ey2", "0.0",
        "--steps", "64",
        "--target", "0",
        "--window", "0..1",
        "--emit-plot-data", str(plot),
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["identity_distance"] < 1e-7
    assert payload["unitarity_defect"] < 1e-12
    assert payload["steps"] == 64
    assert len(payload["matrix"]) == 2
    assert len(payload["vertices"]) == 7
    series = [line.split() for line in plot.read_text().splitlines()]
    assert all(float(d) < 1e-12 for _, d in series)
    assert int(series[-1][0]) >= 64


def test_holonomy_rejects_csv(capsys):
    rc, _, err = run_cli(capsys, "holonomy", "--named", "ABCHEFA", "--format", "csv")
    assert rc == 2
    assert "validation error" in err


def test_vertices_file(capsys, tmp_path):
    vf = tmp_path / "loop.txt"
    vf.write_text(
        "# a flat rectangle in the field plane\n"
        "0 0 1 1\n0.5 0 1 1\n0.5 0.5 1 1\n0 0.5 1 1\n0 0 1 1\n"
    )
    rc, out, _ = run_cli(
        capsys, "holonomy", "--vertices", str(vf), "--steps", "64", "--target", "0",
        "--window", "0..0",
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["kind"] == "custom"
    rc, out, _ = run_cli(capsys, "phase", "--vertices", str(vf))
    payload = json.loads(out)
    # planar custom loop gets the abelian treatment
    assert payload["signed_area"] == pytest.approx(0.25)
    rc, _, err = run_cli(capsys, "holonomy", "--vertices", str(vf), "--named", "C1")
    assert rc == 2 and "mutually exclusive" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0 1\n0 1 1\n")
    rc, _, err = run_cli(capsys, "holonomy", "--vertices", str(bad))
    assert rc == 2


def test_out_file_matches_stdout(capsys, tmp_path):
    rc, out, _ = run_cli(capsys, "phase", "--named", "ABCHGFA")
    target = tmp_path / "phase.json"
    rc2 = main(["phase", "--named", "ABCHGFA", "--out", str(target)])
    capsys.readouterr()
    assert rc == rc2 == 0
    assert target.read_text() == out


def test_byte_determinism(capsys):
    _, out1, _ = run_cli(capsys, "holonomy", "--named", "ABCHGFA", "--steps", "64",
                         "--target", "0", "--window", "0..1")
    _, out2, _ = run_cli(capsys, "holonomy", "--named", "ABCHGFA", "--steps", "64",
                         "--target", "0", "--window", "0..1")
    assert out1 == out2
    _, d1, _ = run_cli(capsys, "derive", "--format", "json")
    _, d2, _ = run_cli(capsys, "derive", "--format", "json")
    assert d1 == d2


def test_config_file_loading(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "mass_kg": 1.0,
                "alpha_Fm2": 1.0,
                "hbar": 1.0,
                "lambda_Vm2": 1.0,
                "B_T": 1.0,
                "Ex_Vm": 0.0,
                "Ey_Vm": 0.5,
                "sigma_override": -1,
            }
        )
    )
    rc, out, _ = run_cli(capsys, "derive", "--config", str(cfg))
    assert rc == 0
    rows = dict(line.split(",", 1) for line in out.splitlines()[1:])
    assert rows["sigma"] == "-1"
    assert rows["nu_re"] != "0.0"


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mass_kg": 1.0, "alpha_Fm2": 1.0, "lambda_Vm2": 1.0,
                               "B_T": 1.0, "Ex_Vm": 0.0, "Ey_Vm": 0.0, "charge_C": 2.0}))
    rc, _, err = run_cli(capsys, "derive", "--config", str(bad))
    assert rc == 2
    assert "charge_C" in err
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"mass_kg": 1.0}))
    rc, _, err = run_cli(capsys, "derive", "--config", str(missing))
    assert rc == 2 and "alpha_Fm2" in err
    nonjson = tmp_path / "nonjson.json"
    nonjson.write_text("{not json")
    rc, _, err = run_cli(capsys, "derive", "--config", str(nonjson))
    assert rc == 2
    boolval = tmp_path / "bool.json"
    boolval.write_text(json.dumps({"mass_kg": True, "alpha_Fm2": 1.0, "lambda_Vm2": 1.0,
                                   "B_T": 1.0, "Ex_Vm": 0.0, "Ey_Vm": 0.0}))
    rc, _, err = run_cli(capsys, "derive", "--config", str(boolval))
    assert rc == 2
    rc, _, err = run_cli(capsys, "derive", "--config", str(tmp_path / "absent.json"))
    assert rc == 2


def test_bad_inputs_exit_2(capsys):
    rc, _, err = run_cli(capsys, "phase", "--named", "Q3")
    assert rc == 2
    rc, _, err = run_cli(capsys, "holonomy", "--named", "ABCHEFA", "--steps", "8")
    assert rc == 2
    rc, _, err = run_cli(capsys, "phase", "--named", "C1", "--area", "-1")
    assert rc == 2
    rc, _, err = run_cli(capsys, "holonomy")
    assert rc == 2 and "path is required" in err
    with pytest.raises(SystemExit) as exc:
        main(["connection", "--param", "B", "--window", "3..1"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_exit_3_on_numerical_failure(capsys, monkeypatch):
    def explode(*args, **kwargs):
        raise ConvergenceError("no convergence at step cap")

    monkeypatch.setattr("dlh.holonomy.holonomy_path_ordered", explode)
    rc, _, err = run_cli(capsys, "holonomy", "--named", "ABCHEFA")
    assert rc == 3
    assert "numerical failure" in err


def test_sweep_c1_area(capsys):
    rc, out, _ = run_cli(capsys, "sweep", "--named", "C1", "--sweep", "area=0.5,1.0,2.0")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "area,signed_area,curvature,gamma_line_integral,gamma_area_law"
    rows = [line.split(",") for line in lines[1:]]
    areas = [float(r[0]) for r in rows]
    gammas = [float(r[4]) for r in rows]
    assert areas == [0.5, 1.0, 2.0]
    # area-law phase is linear in the loop area
    assert gammas == pytest.approx([-0.0625, -0.125, -0.25])


def test_sweep_box_steps_convergence(capsys):
    rc, out, _ = run_cli(
        capsys, "sweep", "--named", "ABCHEFA", "--window", "0..1",
        "--sweep", "steps=64,128,256",
    )
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "steps,S_closed_form,identity_distance,unitarity_defect,convergence_estimate,steps_used"
    rows = [line.split(",") for line in lines[1:]]
    estimates = [float(r[4]) for r in rows]
    assert estimates[0] > estimates[1] > estimates[2]
    assert [float(r[1]) for r in rows] == pytest.approx([-0.75] * 3)


def test_sweep_two_axes_sorted(capsys):
    rc, out, _ = run_cli(
        capsys, "sweep", "--named", "ABCHGFA", "--window", "0..1", "--steps", "64",
        "--sweep", "Ey2=1.0,0.5", "--sweep", "B2=4.0,2.0",
    )
    assert rc == 0
    lines = out.splitlines()
    combos = [tuple(float(v) for v in line.split(",")[:2]) for line in lines[1:]]
    assert combos == sorted(combos)
    assert len(combos) == 4


def test_sweep_validation(capsys):
    rc, _, err = run_cli(capsys, "sweep", "--named", "C1", "--sweep", "Ey2=1,2")
    assert rc == 2 and "does not apply" in err
    rc, _, err = run_cli(capsys, "sweep", "--named", "C1", "--sweep", "area=1")
    assert rc == 2 and "at least 2" in err
    rc, _, err = run_cli(capsys, "sweep", "--named", "C1")
    assert rc == 2
    rc, _, err = run_cli(capsys, "sweep", "--named", "C1", "--sweep", "zz=1,2")
    assert rc == 2 and "unknown sweep axis" in err


def test_threads_env_validation(capsys, monkeypatch):
    monkeypatch.setenv("DLH_THREADS", "0")
    rc, _, err = run_cli(capsys, "sweep", "--named", "C1", "--sweep", "area=1,2")
    assert rc == 2 and "DLH_THREADS" in err
    monkeypatch.setenv("DLH_THREADS", "abc")
    rc, _, err = run_cli(capsys, "sweep", "--named", "C1", "--sweep", "area=1,2")
    assert rc == 2
    monkeypatch.setenv("DLH_THREADS", "2")
    rc, out, _ = run_cli(capsys, "sweep", "--named", "C1", "--sweep", "area=1,2")
    assert rc == 0


def test_oracle_check_passes(capsys, tmp_path):
    out_file = tmp_path / "oracle.json"
    rc, _, err = run_cli(capsys, "oracle-check", "--grid-points", "128", "--out", str(out_file))
    assert rc == 0
    payload = json.loads(out_file.read_text())
    assert payload["pass"] is True
    assert payload["sign_report"]["diagonal"]["resolved_relative_sign"] == "opposite"
    assert payload["cross_checks"]["ladder_commutator_max_dev"] <= 1e-12
    assert "sign convention report" in err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dlh.cli", "derive"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("quantity,value")
