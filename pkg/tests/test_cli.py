import subprocess
import sys

import pytest

from minsurf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_point_output(self, capsys):
        code, out, _ = run(capsys, "eval", "-n", "3", "-w", "1", "-u", "1", "-v", "0")
        assert code == 0
        assert out == "x=0\ny=0\nz=1.7320508075688772\n"

    def test_conjugate_flag(self, capsys):
        code, out, _ = run(
            capsys, "eval", "-n", "3", "-w", "1", "-u", "1", "-v", "0", "--conjugate"
        )
        assert code == 0
        assert out == "x=0\ny=-2\nz=0\n"

    def test_phase_flag(self, capsys):
        code, out, _ = run(
            capsys, "eval", "-n", "3", "-w", "1", "-u", "1", "-v", "0",
            "--phase", "0",
        )
        assert code == 0
        assert out.startswith("x=0\ny=0\nz=1.732")

    def test_low_degree_is_usage_error(self, capsys):
        code, _, err = run(capsys, "eval", "-n", "2", "-w", "1", "-u", "0", "-v", "0")
        assert code == 2
        assert "--degree" in err and "degree must be >= 3" in err

    def test_negative_omega_is_usage_error(self, capsys):
        code, _, err = run(capsys, "eval", "-n", "3", "-w", "-1", "-u", "0", "-v", "0")
        assert code == 2
        assert "--omega" in err

    def test_conjugate_and_phase_conflict(self, capsys):
        code, _, err = run(
            capsys, "eval", "-n", "3", "-u", "0", "-v", "0",
            "--conjugate", "--phase", "1",
        )
        assert code == 2
        assert "mutually exclusive" in err

    def test_extra_sections(self, capsys):
        code, out, _ = run(
            capsys, "eval", "-n", "3", "-w", "1", "-u", "1", "-v", "0",
            "--jet", "--forms", "--curvatures",
        )
        assert code == 0
        keys = dict(line.split("=", 1) for line in out.splitlines())
        assert keys["xu"] == "-2"
        assert keys["e"] == keys["g"] or abs(float(keys["e"]) - 16.0) < 1e-13
        assert keys["singular"] == "false"
        assert abs(float(keys["h"])) < 1e-10


class TestVerify:
    def test_passes_for_degree_seven(self, capsys):
        code, out, _ = run(capsys, "verify", "-n", "7", "-w", "1", "--grid", "21")
        assert code == 0
        assert "overall: PASS" in out
        assert out.count("PASS") >= 7

    def test_singular_point_is_reported(self, capsys):
        code, out, _ = run(capsys, "verify", "-n", "5", "-w", "1", "--grid", "41")
        assert code == 0
        assert "singular points skipped: 1" in out
        assert "(u=0, v=0)" in out

    def test_validation_failure(self, capsys):
        code, _, err = run(capsys, "verify", "-n", "3", "-w", "-1")
        assert code == 2
        assert "--omega" in err

    def test_report_file_is_empty_on_pass(self, capsys, tmp_path):
        report = tmp_path / "records.txt"
        code, _, _ = run(
            capsys, "verify", "-n", "4", "-w", "1", "--grid", "11", "-o", str(report)
        )
        assert code == 0
        assert report.read_text() == ""

    def test_failure_emits_records_and_exit_one(self, capsys, tmp_path):
        report = tmp_path / "records.txt"
        code, out, _ = run(
            capsys, "verify", "-n", "4", "-w", "1", "--grid", "11",
            "--tol-minimality", "1e-30", "-o", str(report),
        )
        assert code == 1
        assert "overall: FAIL" in out
        lines = report.read_text().splitlines()
        assert lines
        assert all(len(l.split()) == 6 for l in lines)


class TestAnalyze:
    def test_quintic(self, capsys):
        code, out, _ = run(
            capsys, "analyze", "-n", "5", "-w", "1",
            "--domain", "-4", "4", "-4", "4", "--grid", "64",
        )
        assert code == 0
        assert "class: 4k+1 (k=1)" in out
        assert out.count("plane") >= 4
        assert "self-intersection hits:" in out
        assert "enforced" in out
        assert "overall: PASS" in out

    def test_degree_six_planes(self, capsys):
        code, out, _ = run(capsys, "analyze", "-n", "6", "-w", "1", "--grid", "48")
        assert code == 0
        assert "class: 4k+2 (k=1)" in out
        assert "plane Z=0" in out and "plane Y=0" in out

    def test_cubic_lines(self, capsys):
        code, out, _ = run(capsys, "analyze", "-n", "3", "-w", "1", "--grid", "48")
        assert code == 0
        assert "class: 4k-1 (k=1)" in out
        assert "straight lines:" in out
        assert "mutual angle: 90.000000000000 deg" in out

    def test_small_grid_rejected(self, capsys):
        code, _, err = run(capsys, "analyze", "-n", "5", "-w", "1", "--grid", "16")
        assert code == 2
        assert "--grid" in err

    def test_enforced_plane_check_can_fail(self, capsys):
        code, out, _ = run(
            capsys, "analyze", "-n", "5", "-w", "1", "--grid", "48",
            "--tol-self-intersection", "1e-300",
        )
        assert code == 1
        assert "overall: FAIL" in out


class TestMeshCommand:
    def test_obj_counts(self, capsys, tmp_path):
        out_path = tmp_path / "surf7.obj"
        code, out, _ = run(
            capsys, "mesh", "-n", "7", "-w", "1", "--grid", "64", "-o", str(out_path)
        )
        assert code == 0
        assert "4225 vertices, 8192 faces" in out
        text = out_path.read_text()
        assert sum(1 for l in text.splitlines() if l.startswith("v ")) == 4225
        assert sum(1 for l in text.splitlines() if l.startswith("f ")) == 8192

    def test_csv_rows(self, capsys, tmp_path):
        out_path = tmp_path / "pts.csv"
        code, out, _ = run(
            capsys, "mesh", "-n", "3", "-w", "1", "--format", "csv",
            "-o", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "u,v,x,y,z"
        assert len(lines) == 1 + 4225

    def test_ply_format(self, capsys, tmp_path):
        out_path = tmp_path / "s.ply"
        code, _, _ = run(
            capsys, "mesh", "-n", "4", "--grid", "8", "--format", "ply",
            "-o", str(out_path),
        )
        assert code == 0
        assert "element vertex 81" in out_path.read_text()

    def test_format_inferred_from_output_extension(self, capsys, tmp_path):
        out_path = tmp_path / "s.ply"
        code, _, _ = run(capsys, "mesh", "-n", "4", "--grid", "4", "-o", str(out_path))
        assert code == 0
        assert out_path.read_text().startswith("ply\n")

    def test_unwritable_path_is_io_error(self, capsys, tmp_path):
        target = tmp_path / "missing_dir" / "x.obj"
        code, _, err = run(
            capsys, "mesh", "-n", "3", "--grid", "4", "-o", str(target)
        )
        assert code == 3
        assert "i/o error" in err

    def test_runs_are_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.obj", tmp_path / "b.obj"
        run(capsys, "mesh", "-n", "5", "--grid", "16", "-o", str(a))
        run(capsys, "mesh", "-n", "5", "--grid", "16", "-o", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestFramesCommand:
    def test_writes_six_frames(self, capsys, tmp_path):
        outdir = tmp_path / "frames"
        code, out, _ = run(
            capsys, "frames", "-n", "3", "-w", "1", "--grid", "8", "-o", str(outdir)
        )
        assert code == 0
        names = sorted(p.name for p in outdir.iterdir())
        assert names == [
            "frame_0_0.obj",
            "frame_1_314.obj",
            "frame_2_628.obj",
            "frame_3_942.obj",
            "frame_4_1257.obj",
            "frame_5_1571.obj",
        ]
        assert "6 frames" in out


class TestConfigPrecedence:
    def test_flag_beats_env_beats_config(self, capsys, tmp_path, monkeypatch):
        config = tmp_path / "cfg.txt"
        config.write_text("degree = 4\nomega = 1\n")
        monkeypatch.setenv("MINSURF_DEGREE", "5")

        # config only
        monkeypatch.delenv("MINSURF_DEGREE", raising=False)
        code, out, _ = run(
            capsys, "eval", "--config", str(config), "-u", "1", "-v", "0"
        )
        assert code == 0
        assert out.splitlines()[0] == "x=0"  # degree 4: X = -P_4 + P_2 = -1 + 1

        # env overrides config
        monkeypatch.setenv("MINSURF_DEGREE", "5")
        code, out, _ = run(
            capsys, "eval", "--config", str(config), "-u", "1", "-v", "0"
        )
        assert code == 0
        assert out.splitlines()[2] == "z=1.9364916731037085"  # degree 5 height

        # flag overrides env
        code, out, _ = run(
            capsys, "eval", "--config", str(config), "-n", "3", "-u", "1", "-v", "0"
        )
        assert code == 0
        assert out.splitlines()[2] == "z=1.7320508075688772"

    def test_env_config_path(self, capsys, tmp_path, monkeypatch):
        config = tmp_path / "cfg.txt"
        config.write_text("degree=3\n")
        monkeypatch.setenv("MINSURF_CONFIG", str(config))
        code, out, _ = run(capsys, "eval", "-u", "1", "-v", "0")
        assert code == 0
        assert out.splitlines()[2] == "z=1.7320508075688772"

    def test_unknown_config_key_is_rejected(self, capsys, tmp_path):
        config = tmp_path / "cfg.txt"
        config.write_text("degre = 3\n")
        code, _, err = run(
            capsys, "eval", "--config", str(config), "-n", "3", "-u", "0", "-v", "0"
        )
        assert code == 2
        assert "unknown key" in err

    def test_tolerance_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("MINSURF_TOL_MINIMALITY", "1e-30")
        code, out, _ = run(capsys, "verify", "-n", "4", "-w", "1", "--grid", "11")
        assert code == 1
        assert "overall: FAIL" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "minsurf", "eval", "-n", "3", "-w", "1",
         "-u", "1", "-v", "0"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0
    assert proc.stdout == "x=0\ny=0\nz=1.7320508075688772\n"


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
