import json
import subprocess
import sys

import numpy as np
import pytest

from mannheim_s3 import io
from mannheim_s3.cli import main
from mannheim_s3.zoo import KNOT_KAPPA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zoo_list(capsys):
    code, out, _ = run(capsys, "zoo", "list")
    assert code == 0
    assert {line.split()[0] for line in out.splitlines()} == {
        "ccr", "conical_helix", "general_helix", "torus_knot"}
    code, out, _ = run(capsys, "zoo", "list", "--format", "json")
    assert set(json.loads(out)) >= {"ccr", "torus_knot"}


def test_frenet_torus_knot(capsys, tmp_path):
    out = tmp_path / "frames.csv"
    code, _, _ = run(capsys, "frenet", "--zoo", "torus_knot", "--out", str(out), "--grid", "16")
    assert code == 0
    header, data = io.read_table(out, io.FRAME_COLUMNS)
    assert len(header) == 19
    assert np.ptp(data[:, 1]) <= 1e-8
    assert np.allclose(data[:, 1], KNOT_KAPPA)


def test_frenet_json_from_profile_family(capsys, tmp_path):
    out = tmp_path / "frames.json"
    assert run(capsys, "frenet", "--zoo", "ccr", "--grid", "64", "--out", str(out))[0] == 0
    d = json.loads(out.read_text())
    assert np.allclose(np.array(d["kappa"]) / np.array(d["tau"]), 2.0)


def test_frenet_great_circle_input_exits_2(capsys, tmp_path):
    t = np.linspace(0, 1, 200)
    pts = np.column_stack([np.cos(t), np.sin(t), 0 * t, 0 * t])
    path = tmp_path / "gc.csv"
    path.write_text(io.curve_to_csv(t, pts))
    code, _, err = run(capsys, "frenet", "--input", str(path))
    assert code == 2
    assert "FrameDegenerate" in err


def test_missing_file_exits_1(capsys, tmp_path):
    assert run(capsys, "frenet", "--input", str(tmp_path / "nope.csv"))[0] == 1


@pytest.mark.parametrize("argv", [
    ["frenet"],
    ["pair", "generate", "--a", "0.5"],
    ["frenet", "--zoo", "torus_knot", "--grid", "4"],
    ["frenet", "--zoo", "torus_knot", "--tol", "-1"],
    ["synthesize", "--kappa", "import os", "--tau", "1"],
    ["nonsense"],
])
def test_usage_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_synthesize_csv(capsys, tmp_path):
    out = tmp_path / "c.csv"
    code, _, _ = run(capsys, "synthesize", "--kappa", "1 + 0.2*sin(s)", "--tau", "0.5",
                     "--domain", "0:2", "--grid", "64", "--out", str(out))
    assert code == 0
    t, pts = io.read_curve_csv(out)
    assert t[-1] == 2.0 and np.allclose(np.linalg.norm(pts, axis=1), 1.0)


def test_pair_generate_deterministic(capsys, tmp_path):
    args = ["pair", "generate", "--a", "0.7853981633974483", "--tau", "1 - 0.5*s",
            "--grid", "128"]
    code, first, _ = run(capsys, *args)
    assert code == 0
    report = json.loads(first)
    assert report["lambda"] == pytest.approx(1.0)
    assert max(report["residuals"].values()) <= 1e-6
    assert run(capsys, *args)[1] == first


def test_pair_generate_degenerate_angle_exits_2(capsys):
    assert run(capsys, "pair", "generate", "--a", "0", "--tau", "1 - s")[0] == 2


def test_pair_generate_inadmissible_exits_2(capsys):
    assert run(capsys, "pair", "generate", "--a", "0.5", "--tau", "1 + s")[0] == 2


def test_pair_round_trip_through_files(capsys, tmp_path):
    a_path, b_path = tmp_path / "alpha.csv", tmp_path / "beta.csv"
    code, _, _ = run(capsys, "pair", "generate", "--a", "0.7853981633974483",
                     "--tau", "1 - 0.5*s", "--alpha-out", str(a_path),
                     "--beta-out", str(b_path), "--out", str(tmp_path / "gen.json"))
    assert code == 0
    # the partner is re-extracted from positions alone, so the tolerance is
    # that of grid differentiation rather than of the synthesis
    code, out, err = run(capsys, "pair", "verify", "--a", "0.7853981633974483",
                         "--alpha", str(a_path), "--beta", str(b_path), "--tol", "1e-5")
    assert code == 0, err
    assert max(json.loads(out)["residuals"].values()) <= 1e-5


def test_pair_verify_mismatched_grids_exit_1(capsys, tmp_path):
    t = np.linspace(0, 1, 50)
    pts = np.tile([1.0, 0, 0, 0], (50, 1))
    (tmp_path / "a.csv").write_text(io.curve_to_csv(t, pts))
    (tmp_path / "b.csv").write_text(io.curve_to_csv(t[:-1], pts[:-1]))
    assert run(capsys, "pair", "verify", "--a", "0.5", "--alpha", str(tmp_path / "a.csv"),
               "--beta", str(tmp_path / "b.csv"))[0] == 1


def test_gm4(capsys, tmp_path):
    table = tmp_path / "gm4.csv"
    code, out, err = run(capsys, "gm4", "--kappa", "1", "--tau", "1/(1+s)", "--lambda", "1",
                         "--csv", str(table))
    assert code == 0, err
    d = json.loads(out)
    assert d["epsilon"] == 1 and abs(d["fit_c"] - 1.0) <= 1e-5
    header, data = io.read_table(table, io.GM4_COLUMNS)
    assert data.shape[1] == 9


def test_gm4_sign_mismatch_exits_2(capsys):
    assert run(capsys, "gm4", "--kappa", "1", "--tau", "1/(1+s)", "--lambda", "-1")[0] == 2


def test_project(capsys, tmp_path):
    out = tmp_path / "xyz.csv"
    code, _, _ = run(capsys, "project", "--zoo", "torus_knot", "--grid", "32", "--out", str(out))
    assert code == 0
    _, xyz = io.read_table(out, io.PROJECTION_COLUMNS)
    assert np.allclose(xyz[0], xyz[-1])


def test_project_pole_on_curve_exits_2(capsys, tmp_path):
    t = np.linspace(0, 1, 20)
    pts = np.column_stack([np.cos(t), np.sin(t), 0 * t, 0 * t])
    path = tmp_path / "c.csv"
    path.write_text(io.curve_to_csv(t, pts))
    assert run(capsys, "project", "--input", str(path), "--pole", "1,0,0,0")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mannheim_s3", "zoo", "list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "torus_knot" in proc.stdout
