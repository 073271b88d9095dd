"""Command-line surface: subcommands, exit codes, artifacts, and determinism."""

import json

import numpy as np
import pytest

from framedcurves.cli import main

BUTTERFLY_CONFIG = {
    "curve": {
        "kind": "curvature",
        "delta": 0,
        "kappa": [["1"], ["0"], {"2,0": "1", "0,1": "-1"}],
    },
    "grids": {"t": [-1.0, 1.0, 200], "lambda": [-0.2, 0.2, 41]},
}


def _write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


# -- exit codes -----------------------------------------------------------------


def test_unknown_config_key_is_a_config_error(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"geometri": "euclidean"})
    assert main(["type", "--config", cfg, "--t", "0.0"]) == 2
    assert "config error" in capsys.readouterr().err


def test_bad_geometry_is_a_config_error(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"geometry": "parabolic"})
    assert main(["type", "--config", cfg, "--t", "0.0"]) == 2


def test_float_in_exact_slot_is_a_config_error(tmp_path, capsys):
    cfg = _write_config(
        tmp_path,
        {"curve": {"kind": "polynomial", "coefficients": [[0, 0.5], [0, 1], [0, 0, 1]]}},
    )
    assert main(["type", "--config", cfg, "--t", "0.0"]) == 2
    assert "exact" in capsys.readouterr().err


def test_malformed_json_is_a_config_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["type", "--config", str(path), "--t", "0.0"]) == 2


def test_degenerate_curve_is_a_numeric_failure(tmp_path, capsys):
    # three proportional components never span: finite type detection fails
    cfg = _write_config(
        tmp_path,
        {"curve": {"kind": "polynomial", "coefficients": [["1"], ["0", "1"], ["0", "2"]]}},
    )
    assert main(["type", "--config", cfg, "--t", "0.0"]) == 3
    assert "numeric failure" in capsys.readouterr().err


# -- type -----------------------------------------------------------------------------


def test_type_of_default_builtin(capsys):
    assert main(["type", "--t", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "(1, 2, 3)" in out
    assert "confidence" in out


def test_type_of_monomial_polynomial(tmp_path, capsys):
    cfg = _write_config(
        tmp_path,
        {
            "curve": {
                "kind": "polynomial",
                "coefficients": [["1"], ["0", "1"], ["0", "0", "1/2"], ["0", "0", "0", "0", "1/24"]],
            }
        },
    )
    assert main(["type", "--config", cfg, "--t", "0"]) == 0
    out = capsys.readouterr().out
    assert "(1, 2, 4)" in out


# -- enumerate --------------------------------------------------------------------------


def test_enumerate_adapted_table(capsys):
    assert main(["enumerate", "--n", "2", "--budget", "2", "--mode", "adapted"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "a1,a2,a3,schubert,codim_D,codim_C"
    assert lines[1] == "1,2,3,0,0,0"
    assert lines[-1] == "2,3,4,3,2,1"
    assert len(lines) == 6


def test_enumerate_writes_csv(tmp_path, capsys):
    assert main(["enumerate", "--n", "2", "--budget", "2", "--out", str(tmp_path)]) == 0
    path = tmp_path / "enumerate.csv"
    assert path.exists()
    assert path.read_text().splitlines()[0] == "a1,a2,a3,schubert,codim_D,codim_C"


# -- normal-form --------------------------------------------------------------------------


def test_normal_form_mesh_contains_the_reference_vertex(tmp_path):
    assert main(["normal-form", "--type", "1,2,3", "--out", str(tmp_path)]) == 0
    obj = (tmp_path / "normal-form-123.obj").read_text()
    assert "v 0.0 -0.5 0.3333333333333333" in obj
    assert (tmp_path / "normal-form-123.locus.obj").exists()


def test_normal_form_rejects_bad_type(capsys):
    assert main(["normal-form", "--type", "3,2,1"]) == 2


# -- scan ------------------------------------------------------------------------------------


def test_scan_butterfly_event_csv(tmp_path):
    cfg = _write_config(tmp_path, BUTTERFLY_CONFIG)
    out = tmp_path / "out"
    assert main(["scan", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "events.csv").read_text().splitlines()
    assert lines[0] == "lambda,t,a1,a2,a3,class,codim_D,codim_C,schubert,confidence"
    assert lines[1] == "0.0,0.0,3,4,5,Unresolved(3,4,5),4,2,6,exact"
    report = json.loads((out / "report.json").read_text())
    assert len(report["events"]) == 1
    assert report["events"][0]["dual"] == [1, 2, 5]


def test_scan_is_deterministic(tmp_path):
    cfg = _write_config(tmp_path, BUTTERFLY_CONFIG)
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert main(["scan", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["scan", "--config", cfg, "--out", str(out2)]) == 0
    assert (out1 / "events.csv").read_bytes() == (out2 / "events.csv").read_bytes()
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()


def test_scan_requires_a_curvature_family(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"curve": {"kind": "builtin", "name": "helix"}})
    assert main(["scan", "--config", cfg, "--out", str(tmp_path)]) == 2


# -- envelope and frame -------------------------------------------------------------------------


def test_envelope_writes_mesh_locus_and_report(tmp_path):
    out = tmp_path / "env"
    assert main(["envelope", "--out", str(out)]) == 0
    assert (out / "envelope.obj").exists()
    assert (out / "envelope.locus.obj").exists()
    report = json.loads((out / "report.json").read_text())
    assert report["mesh"]["vertices"] > 0
    assert "residual_maxima" in report


def test_envelope_of_the_radial_circle_is_a_cylinder(tmp_path):
    cfg = _write_config(tmp_path, {"curve": {"kind": "builtin", "name": "circle-radial"}})
    out = tmp_path / "cyl"
    assert main(["envelope", "--config", cfg, "--out", str(out)]) == 0
    rows = [
        [float(x) for x in line.split()[1:]]
        for line in (out / "envelope.obj").read_text().splitlines()
        if line.startswith("v ")
    ]
    radii = np.hypot(*np.array(rows)[:, :2].T)
    assert float(np.max(np.abs(radii - 1.0))) < 1e-9


def test_frame_writes_orthonormal_table(tmp_path, capsys):
    out = tmp_path / "fr"
    assert main(["frame", "--out", str(out)]) == 0
    lines = (out / "frames.txt").read_text().splitlines()
    assert lines[0].startswith("#")
    assert len(lines) > 100
    out_text = capsys.readouterr().out
    assert "gram" in out_text.lower()


# -- help and argument basics -----------------------------------------------------------------


def test_help_lists_all_subcommands(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    for name in ("type", "frame", "envelope", "normal-form", "scan", "enumerate", "verify"):
        assert name in out
