"""Command-line driver: subcommands, config files, exit codes."""

import numpy as np
import pytest

from activeflux.cli import main
from activeflux.snapshots import read_snapshot


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestRun:
    def test_basic_run_writes_binary_snapshot(self, tmp_path, capsys):
        code, out, _ = run_cli(capsys, "run", "--problem", "gaussian",
                               "--nx", "8", "--ny", "8", "--t-end", "0.005",
                               "--limiter", "off", "--out", str(tmp_path))
        assert code == 0
        assert "done:" in out
        files = list(tmp_path.glob("*.afx"))
        assert len(files) == 1
        snap = read_snapshot(files[0])
        assert snap.nx == 8 and snap.time == pytest.approx(0.005)
        assert not snap.limiter

    def test_csv_format(self, tmp_path, capsys):
        code, _, _ = run_cli(capsys, "run", "--problem", "gaussian",
                             "--nx", "8", "--ny", "8", "--t-end", "0.002",
                             "--out", str(tmp_path), "--format", "csv")
        assert code == 0
        names = {p.name.rsplit("_", 1)[-1] for p in tmp_path.glob("*.csv")}
        assert names == {"averages.csv", "nodes.csv", "xedges.csv",
                         "yedges.csv"}

    def test_config_file_presets_and_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("problem = gaussian\n"
                       "nx = 8\nny = 8\n"
                       "t-end = 0.002\n"
                       "limiter = off\n"
                       f"out = {tmp_path / 'a'}\n"
                       "# trailing comment line\n")
        # flag overrides the config's out directory
        code, _, _ = run_cli(capsys, "run", "--config", str(cfg),
                             "--out", str(tmp_path / "b"))
        assert code == 0
        assert not (tmp_path / "a").exists()
        assert list((tmp_path / "b").glob("*.afx"))

    def test_unknown_problem_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "run", "--problem", "nope",
                               "--out", str(tmp_path))
        assert code == 2
        assert "error" in err

    def test_bad_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("problem gaussian\n")
        code, _, err = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 2
        assert "key = value" in err
        cfg.write_text("problem = gaussian\nwarp = 9\n")
        code, _, err = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 2
        assert "unknown config keys" in err

    def test_missing_problem(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "run", "--out", str(tmp_path))
        assert code == 2


class TestConvergence:
    def test_study_writes_table(self, tmp_path, capsys):
        code, out, _ = run_cli(capsys, "convergence", "--problem", "gaussian",
                               "--grids", "8,16", "--t-end", "0.004",
                               "--out", str(tmp_path))
        assert code == 0
        table = (tmp_path / "convergence.txt").read_text()
        assert table.splitlines()[0].startswith("# nx")
        assert table.splitlines()[1].startswith("8 ")
        assert (tmp_path / "gaussian_8x8.afx").exists()
        assert (tmp_path / "gaussian_16x16.afx").exists()

    def test_single_grid_rejected(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "convergence", "--grids", "32",
                               "--out", str(tmp_path))
        assert code == 2


class TestNormsAndExtract:
    @pytest.fixture
    def snaps(self, tmp_path, capsys):
        run_cli(capsys, "convergence", "--problem", "gaussian",
                "--grids", "8,16", "--t-end", "0.004", "--out", str(tmp_path))
        return tmp_path / "gaussian_8x8.afx", tmp_path / "gaussian_16x16.afx"

    def test_norms(self, snaps, capsys):
        coarse, ref = snaps
        code, out, _ = run_cli(capsys, "norms", "--coarse", str(coarse),
                               "--reference", str(ref))
        assert code == 0
        assert "l1_rho" in out

    def test_norms_bad_file(self, tmp_path, capsys):
        junk = tmp_path / "junk.afx"
        junk.write_bytes(b"not a snapshot")
        code, _, err = run_cli(capsys, "norms", "--coarse", str(junk),
                               "--reference", str(junk))
        assert code == 2

    def test_extract_radial(self, snaps, capsys):
        coarse, _ = snaps
        code, out, _ = run_cli(capsys, "extract", "--snapshot", str(coarse),
                               "--mode", "radial")
        assert code == 0
        assert out.startswith("# r rho")
        assert len(out.splitlines()) == 1 + 8 * 8

    def test_extract_line(self, snaps, capsys):
        coarse, _ = snaps
        code, out, _ = run_cli(capsys, "extract", "--snapshot", str(coarse),
                               "--mode", "line", "--at", "0.0")
        assert code == 0
        assert "# cut at x = 0" in out

    def test_extract_line_requires_at(self, snaps, capsys):
        coarse, _ = snaps
        code, _, err = run_cli(capsys, "extract", "--snapshot", str(coarse),
                               "--mode", "line")
        assert code == 2


def test_usage_error_on_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2
