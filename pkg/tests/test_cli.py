import math

import numpy as np
import pandas as pd
import pytest

from epr_memory import COMMAND_CLASS_MAPPINGS
from epr_memory.cli import validation
from epr_memory.cli.commands import FidelityCommand, MapCommand, ProtocolCommand, ReadoutCommand
from epr_memory.cli.config import load_config, parse_config
from epr_memory.cli.main import build_parser, main
from epr_memory.cli.utils import parallel_map
from epr_memory.cli.validation import CheckResult, run_validation
from epr_memory.errors import ConfigError, NumericalError

SMALL_SWEEP = """
[sweep]
i_f_min = 0.6
i_f_max = 2.0
i_f_count = 5
c_min = 10
c_max = 1000
c_count = 4
t_count = 5
t_store_count = 4
"""

FAST_MC = """
[mc]
n_traj = 200
dt = 0.05
duration = 10
cases = 2
"""


class TestParseConfig:
    def test_defaults_are_the_reference_point(self):
        config = parse_config("")
        assert config.params.cooperativity == pytest.approx(100.0)
        assert config.params.pumping_rate == pytest.approx(15.0)
        assert config.params.scheme == "EIT"
        assert config.raman_strategy is None
        assert config.sweep.i_f_fixed == 1.0
        assert config.readout.t0 is None
        assert config.output.precision == 12

    def test_values_and_comments(self):
        config = parse_config("[ensemble]\ncooperativity = 50   # weaker cavity\n[readout]\nlo_profile = flat\n")
        assert config.params.cooperativity == pytest.approx(50.0)
        assert config.readout.lo_profile == "flat"

    def test_microscopic_parameters(self):
        config = parse_config("[ensemble]\ng = 0.001\nomega = 3\n")
        assert config.params.g == 0.001
        assert config.params.cooperativity == pytest.approx(10.0)
        assert config.params.pumping_rate == pytest.approx(9.0)

    def test_raman(self):
        config = parse_config("[ensemble]\nscheme = Raman\ndelta_raman = 1000\ngamma_e = 1e-4\n")
        assert config.params.scheme == "Raman"
        assert config.raman_strategy == "cavity_enhanced"

    @pytest.mark.parametrize("text, line", [
        ("[ensemble]\ncooperativity = 50\nbogus = 1\n", 3),
        ("\n[ensmble]\ncooperativity = 50\n", 2),
        ("[sweep]\ni_f_count = many\n", 2),
        ("cooperativity = 1\n", 1),
        ("[mc]\nseed = 1\nseed = 2\n", 3),
        ("[ensemble]\ngamma0 = -1\n", 2),
        ("[ensemble]\ncooperativity = 50\ng = 0.1\nomega = 3\n", 2),
        ("[ensemble]\ng = 0.1\n", 2),
        ("[ensemble]\nscheme = Raman\n", 2),
        ("[ensemble]\nscheme = Raman\ndelta_raman = 100\nraman_strategy = guess\n", 4),
        ("[sweep]\ni_f_fixed = 2.0\n", 2),
        ("[sweep]\nc_min = 0\n", 2),
        ("[readout]\nlo_profile = gaussian\n", 2),
        ("[readout]\nquadrature_samples = 2\n", 2),
        ("[mc]\nn_traj = 10\n", 2),
        ("[output]\nprecision = 0\n", 2),
        ("[ensemble]\nkappa = nan\n", 2),
        ("[ensemble]\ncooperativity = 50\nkappa = 2\ntransmission = 1.5\n", 4),
        ("[ensemble]\nkappa = 2\ncooperativity = 50\ngamma_e = -1\n", 4),
        ("[ensemble]\nkappa = 2\nomega = 3\ng = 0.1\ngamma_e = 15\n", 5),
        ("[ensemble]\nkappa = 2\nomega = 3\n", 3),
        ("[ensemble]\ngamma = 1\nscheme = Raman\ndelta_raman = 0\n", 4),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ConfigError) as excinfo:
            parse_config(text, "run.ini")
        assert excinfo.value.line == line
        assert f"line {line}" in str(excinfo.value)

    def test_load_config(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[ensemble]\ncooperativity = 20\n", encoding="utf-8")
        config = load_config(str(path))
        assert config.params.cooperativity == pytest.approx(20.0)
        assert config.source == str(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(str(tmp_path / "absent.ini"))


class TestCommands:
    def test_map_columns_and_fixed_point(self):
        frame = MapCommand().execute(parse_config(SMALL_SWEEP))
        assert list(frame.columns) == MapCommand.COLUMNS
        assert len(frame) == 5
        last = frame.iloc[-1]
        assert last["i_f"] == 2.0
        assert last["i_at_simple"] == pytest.approx(2.0, abs=1e-12)
        assert last["epr_correlation"] == 0.0
        assert frame["i_at_full"].isna().all()
        assert frame["eof_atoms_full"].isna().all()

    def test_map_full_model(self):
        frame = MapCommand().execute(parse_config(SMALL_SWEEP), full=True, threads=2)
        gap = (frame["i_at_full"] - frame["i_at_simple"]).abs() / frame["i_at_simple"]
        assert (gap <= 0.05).all()
        assert frame["eof_atoms_full"].notna().all()

    def test_fidelity_non_decreasing(self):
        frame = FidelityCommand().execute(parse_config(SMALL_SWEEP))
        assert list(frame.columns) == ["c", "gamma_e_star", "eta_star", "at_bound"]
        assert np.all(np.diff(frame["eta_star"]) >= -1e-6)
        assert (frame["gamma_e_star"] > 0).all()
        assert frame["at_bound"].all()

    def test_fidelity_infeasible_window_gives_nan(self, caplog):
        config = parse_config("[ensemble]\ngamma0 = 0.5\n" + SMALL_SWEEP)
        frame = FidelityCommand().execute(config)
        assert frame["eta_star"].isna().all()
        assert "Empty pumping window" in caplog.text

    def test_readout_of_coherent_state(self):
        config = parse_config(SMALL_SWEEP + "[readout]\nstored_inseparability = 2.0\n")
        frame = ReadoutCommand().execute(config)
        assert list(frame.columns) == ReadoutCommand.COLUMNS
        np.testing.assert_allclose(frame["p1"], frame["n_cal"], rtol=1e-12)
        assert frame["i_measured_at_0"].iloc[0] == pytest.approx(2.0)

    def test_readout_of_mapped_state(self):
        frame = ReadoutCommand().execute(parse_config(SMALL_SWEEP))
        assert frame["t"].iloc[0] == 0.0
        assert np.all(np.diff(frame["p1"]) > 0)
        assert frame["i_measured_at_0"].iloc[0] < 2.0

    def test_protocol(self):
        frame = ProtocolCommand().execute(parse_config(SMALL_SWEEP))
        assert list(frame.columns) == ProtocolCommand.COLUMNS
        assert frame["i_at_after_storage"].iloc[0] == pytest.approx(frame["i_at_stored"].iloc[0])
        assert np.all(np.diff(frame["i_at_after_storage"]) > 0)
        assert frame["t_store"].iloc[-1] == pytest.approx(3000.0)

    def test_registry(self):
        assert set(COMMAND_CLASS_MAPPINGS) == {"map", "fidelity", "readout", "end-to-end", "validate"}


class TestParallelMap:
    def test_order_preserved(self):
        assert parallel_map(lambda x: x * x, range(10), threads=4) == [x * x for x in range(10)]

    def test_rejects_zero_threads(self):
        with pytest.raises(ValueError):
            parallel_map(abs, [1], threads=0)


class TestValidation:
    def test_default_suite_passes(self):
        report = run_validation(parse_config(""))
        names = [check.name for check in report.checks]
        assert names == [name for name, _ in validation._CHECKS]
        assert [c.name for c in report.checks if c.status == "fail"] == []
        assert report.passed
        checks = {c.name: c for c in report.checks}

        monte_carlo = checks["monte_carlo"]
        assert monte_carlo.status == "pass"
        assert monte_carlo.measured >= 0.95
        assert "of 20 cases" in monte_carlo.detail

        assert checks["duan_epr"].status == "pass"
        assert checks["lyapunov_vs_frequency"].status == "pass"
        assert "10 random stable systems" in checks["lyapunov_vs_frequency"].detail
        assert checks["snr_bound"].status == "pass"
        assert "at C = 10, 100, 1000" in checks["snr_bound"].detail

        # reference point sits close to the upper edge of the adiabatic window
        full_vs_reduced = checks["full_vs_reduced"]
        assert full_vs_reduced.status == "warn"
        assert full_vs_reduced.measured == pytest.approx(0.091, abs=3e-3)
        assert "I_f=0.2" in full_vs_reduced.detail

        fidelity = checks["fidelity_optimum"]
        assert fidelity.status == "warn"
        assert fidelity.measured == pytest.approx(0.978, abs=2e-3)
        assert "upper edge" in fidelity.detail
        assert "summary:" in report.to_text()

    def test_broken_regime_is_flagged(self):
        config = parse_config("[ensemble]\ngamma_e = 1e-6\n" + FAST_MC)
        assert validation.check_regime(config).status == "warn"
        assert validation.check_full_vs_reduced(config).status in ("pass", "warn")
        assert validation.check_estimator(config).status in ("pass", "warn")

    def test_full_vs_reduced_in_deep_regime(self):
        config = parse_config("[ensemble]\ngamma0 = 1e-4\ngamma_e = 1.9899\n")
        result = validation.check_full_vs_reduced(config)
        assert result.status == "pass"
        assert result.measured <= 0.05

    def test_fidelity_thresholds_met_in_a_wider_window(self):
        result = validation.check_fidelity_optimum(parse_config("[ensemble]\nregime_strictness = 3\n"))
        assert result.status == "pass"
        assert result.measured >= 0.99
        assert "monotone over 20 C values" in result.detail

    def test_fidelity_check_skips_infeasible_window(self):
        result = validation.check_fidelity_optimum(parse_config("[ensemble]\ngamma0 = 0.5\n"))
        assert result.status == "skip"
        assert "Empty pumping window" in result.detail

    def test_seeded_checks_are_reproducible(self):
        config = parse_config(FAST_MC)
        assert validation.check_spectral(config) == validation.check_spectral(config)
        first = validation.check_monte_carlo(config)
        assert first == validation.check_monte_carlo(config, threads=2)

    def test_raman_skips_microscopic_check(self):
        config = parse_config("[ensemble]\nscheme = Raman\ndelta_raman = 1000\ngamma_e = 1e-4\n")
        assert validation.check_beta_sq(config).status == "skip"

    def test_report_text(self):
        report = validation.ValidationReport("run.ini", 7, [
            CheckResult("a", "pass", 1e-13, 1e-12, "ok"),
            CheckResult("b", "fail", math.nan, 0.05, "broken"),
        ])
        text = report.to_text()
        assert not report.passed
        assert report.counts() == {"pass": 1, "warn": 0, "fail": 1, "skip": 0}
        assert "seed: 7" in text
        assert text.endswith("summary: 1 pass, 0 warn, 1 fail, 0 skip\n")


class TestMain:
    def test_parser(self):
        args = build_parser().parse_args(["map", "--full", "--threads", "2"])
        assert args.command == "map"
        assert args.full
        assert args.threads == 2
        with pytest.raises(SystemExit):
            build_parser().parse_args(["map", "--threads", "0"])

    def test_map_writes_csv(self, tmp_path):
        config = tmp_path / "run.ini"
        config.write_text(SMALL_SWEEP, encoding="utf-8")
        assert main(["map", "--config", str(config), "--out", str(tmp_path / "out")]) == 0
        frame = pd.read_csv(tmp_path / "out" / "fig2a.csv")
        assert list(frame.columns) == MapCommand.COLUMNS
        assert len(frame) == 5

    def test_output_is_byte_identical(self, tmp_path):
        config = tmp_path / "run.ini"
        config.write_text(SMALL_SWEEP, encoding="utf-8")
        main(["map", "--config", str(config), "--out", str(tmp_path / "a"), "--full"])
        main(["map", "--config", str(config), "--out", str(tmp_path / "b"), "--full", "--threads", "3"])
        assert (tmp_path / "a" / "fig2a.csv").read_bytes() == (tmp_path / "b" / "fig2a.csv").read_bytes()

    def test_config_error_exit_code(self, tmp_path, caplog):
        config = tmp_path / "bad.ini"
        config.write_text("[ensemble]\ncooperativity = 50\nbogus = 1\n", encoding="utf-8")
        assert main(["map", "--config", str(config), "--out", str(tmp_path)]) == 1
        assert "line 3" in caplog.text

    def test_missing_config_exit_code(self, tmp_path):
        assert main(["map", "--config", str(tmp_path / "absent.ini"), "--out", str(tmp_path)]) == 1

    def test_numerical_failure_exit_code(self, tmp_path, monkeypatch):
        def explode(self, config, *, full=False, threads=1):
            raise NumericalError("solver diverged")

        monkeypatch.setattr(MapCommand, "execute", explode)
        assert main(["map", "--out", str(tmp_path)]) == 2

    def test_validation_exit_codes(self, tmp_path, monkeypatch):
        monkeypatch.setattr(validation, "_CHECKS", [("duan_epr", validation.check_duan)])
        assert main(["validate", "--out", str(tmp_path / "ok")]) == 0
        assert "pass" in (tmp_path / "ok" / "validation.txt").read_text(encoding="utf-8")

        def failing(config):
            return CheckResult("always_fails", "fail", 1.0, 0.0, "")

        monkeypatch.setattr(validation, "_CHECKS", [("always_fails", failing)])
        assert main(["validate", "--out", str(tmp_path / "bad"), "--seed", "3"]) == 3
        text = (tmp_path / "bad" / "validation.txt").read_text(encoding="utf-8")
        assert "seed: 3" in text
        assert "always_fails" in text
