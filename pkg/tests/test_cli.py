import os

import numpy as np
import pytest

from nlslab.cli import main
from nlslab.tables import read_table

TINY = """\
grid.n = 64
grid.length = 32
time.dt = 0.01
time.t_final = 5
epsilon = 0.1
outputs.directory = {out}
"""

SWEEPABLE = """\
grid.n = 64
grid.length = 32
time.dt = 0.01
time.t_final = 10
epsilon = 0.05, 0.1, 0.2, 0.4
outputs.directory = {out}
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    out = tmp_path / "out"
    path = tmp_path / name
    path.write_text(text.format(out=out))
    return str(path), str(out)


class TestDispatch:
    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 1
        assert "usage" in capsys.readouterr().err

    def test_unknown_command_prints_usage(self, capsys):
        assert main(["frobnicate"]) == 1
        err = capsys.readouterr().err
        assert "unknown command" in err and "usage" in err

    def test_missing_config_is_validation_error(self, capsys):
        assert main(["evolve", "no_such_file.cfg"]) == 1
        assert "cannot read config" in capsys.readouterr().err

    def test_invalid_config_reports_line(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("grid.n = 17\n")
        assert main(["evolve", str(path)]) == 1
        assert "line 1" in capsys.readouterr().err

    def test_runtime_abort_exit_code(self, tmp_path, capsys):
        # amplitude overflow produces non-finite samples: exit 2, not 1
        cfg, _ = write_cfg(
            tmp_path,
            "grid.n = 64\ngrid.length = 32\ntime.t_final = 5\n"
            "data.psi1 = gaussian(1e300, 1, 0, 0)\nepsilon = 1e300\n"
            "outputs.directory = {out}\n",
        )
        assert main(["evolve", cfg]) == 2
        assert "runtime abort" in capsys.readouterr().err


class TestEvolveCommand:
    def test_writes_tables(self, tmp_path, capsys):
        cfg, out = write_cfg(tmp_path, TINY)
        assert main(["evolve", cfg]) == 0
        header, rows = read_table(os.path.join(out, "observers.tsv"))
        assert header == ["t", "mass1", "mass2", "sup_norm", "j_norm1", "j_norm2", "dissipation_rate"]
        assert rows[0, 0] == 0.0 and rows[-1, 0] == pytest.approx(5.0)
        header2, rows2 = read_table(os.path.join(out, "snapshots.tsv"))
        assert header2 == ["t", "x", "re_u1", "im_u1", "re_u2", "im_u2"]
        assert rows2.shape[0] % 64 == 0

    def test_epsilon_list_rejected(self, tmp_path, capsys):
        cfg, _ = write_cfg(tmp_path, SWEEPABLE)
        assert main(["evolve", cfg]) == 1
        assert "single epsilon" in capsys.readouterr().err

    def test_table_filter_respected(self, tmp_path):
        cfg, out = write_cfg(tmp_path, TINY + "outputs.tables = observers\n")
        assert main(["evolve", cfg]) == 0
        assert os.path.exists(os.path.join(out, "observers.tsv"))
        assert not os.path.exists(os.path.join(out, "snapshots.tsv"))


class TestMProfileCommand:
    def test_writes_profile_and_classification(self, tmp_path, capsys):
        cfg, out = write_cfg(tmp_path, TINY)
        assert main(["mprofile", cfg]) == 0
        header, rows = read_table(os.path.join(out, "mprofile.tsv"))
        assert header == ["xi", "m_endpoint", "m_integral", "tail_estimate"]
        assert rows.shape == (64, 4)
        header2, rows2 = read_table(os.path.join(out, "classification.tsv"))
        assert header2 == ["xi", "m_endpoint", "tag"]
        assert set(np.unique(rows2[:, 2])) <= {-1.0, 0.0, 1.0}


class TestSweepCommand:
    def test_writes_sweep_and_orderfit(self, tmp_path, capsys):
        cfg, out = write_cfg(tmp_path, SWEEPABLE)
        assert main(["sweep", cfg]) == 0
        header, rows = read_table(os.path.join(out, "sweep.tsv"))
        assert header[0] == "epsilon"
        assert rows.shape[0] == 4
        header2, rows2 = read_table(os.path.join(out, "orderfit.tsv"))
        assert header2 == ["quantity", "slope", "intercept", "residual", "n_points"]
        assert rows2.shape == (3, 5)
        # lemma slopes land near cubic even on this tiny grid
        assert 2.0 < rows2[0, 1] < 4.0


class TestScenarioCommand:
    def test_symmetric_scenario_with_small_override(self, tmp_path, capsys):
        cfg, out = write_cfg(tmp_path, TINY)
        assert main(["scenario", "symmetric", cfg]) == 0
        printed = capsys.readouterr().out
        assert "both-vanish" in printed
        header, rows = read_table(os.path.join(out, "scenario_symmetric_monitor.tsv"))
        assert header == ["t", "mass1", "mass2", "alpha2_norm", "orth_defect"]
        assert np.array_equal(rows[:, 1], rows[:, 2])  # symmetric masses identical

    def test_unknown_scenario(self, tmp_path, capsys):
        assert main(["scenario", "Z"]) == 1


class TestVerifyCommand:
    def test_verify_passes_and_prints_lines(self, capsys):
        assert main(["verify"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") >= 12
        assert "FAIL" not in out

    def test_verify_rejects_arguments(self, capsys):
        assert main(["verify", "extra"]) == 1
