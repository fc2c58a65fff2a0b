"""Tests for environment settings, logging setup and TOML experiment configs."""

import logging
from pathlib import Path

import pytest

from lgfnoma.config import presets
from lgfnoma.config.config_loader import (
    ExperimentConfig,
    SchemeSpec,
    default_schemes,
    experiment_from_mapping,
    find_config_path,
    load_config,
    load_experiment_config,
)
from lgfnoma.config.settings import Settings, setup_logging
from lgfnoma.core.params import SystemParams
from lgfnoma.utils.error_handling import ConfigError

SWEEP_TOML = Path(__file__).resolve().parent.parent / "configs" / "device_sweep.toml"


class TestSettings:
    def test_defaults_from_environment(self):
        assert Settings.LGF_SEED == 20240601
        assert Settings.LGF_MAX_ENUMERATION == 10_000_000
        assert Settings.LGF_MAX_DEVICE_SLOTS == 5_000_000_000
        assert Settings.LGF_PARALLEL is True
        assert Settings.validate()

    def test_refresh_from_env(self, monkeypatch):
        monkeypatch.setenv("LGF_SEED", "7")
        monkeypatch.setenv("LGF_PARALLEL", "off")
        monkeypatch.setenv("LGF_MAX_ENUMERATION", "2.5e3")
        Settings.refresh_from_env()
        assert Settings.LGF_SEED == 7
        assert Settings.LGF_PARALLEL is False
        assert Settings.LGF_MAX_ENUMERATION == 2500

    def test_validate_rejects_bad_budgets(self, monkeypatch):
        monkeypatch.setenv("LGF_REPLICATION_SLOTS", "0")
        Settings.refresh_from_env()
        assert not Settings.validate()

    def test_log_config(self, caplog):
        with caplog.at_level(logging.INFO, logger="lgfnoma.config.settings"):
            Settings.log_config()
        assert "Default seed: 20240601" in caplog.text


class TestSetupLogging:
    def teardown_method(self):
        logging.getLogger().setLevel(logging.ERROR)

    def test_named_level(self):
        setup_logging("DEBUG")
        assert logging.getLogger().level == logging.DEBUG
        assert logging.getLogger("numpy").level == logging.WARNING

    def test_no_disables_output(self):
        setup_logging("NO")
        assert logging.getLogger().level > logging.CRITICAL

    def test_unknown_level_falls_back_to_info(self):
        setup_logging("chatty")
        assert logging.getLogger().level == logging.INFO


class TestConfigDiscovery:
    def test_nothing_found(self):
        assert find_config_path() is None
        assert load_config() == {}

    def test_working_directory(self, tmp_path):
        path = tmp_path / "lgfnoma.toml"
        path.write_text("[experiment]\nname = 'cwd'\n")
        assert find_config_path() == str(path)
        assert load_experiment_config().name == "cwd"

    def test_xdg_directory(self, tmp_path):
        path = tmp_path / "xdg" / "lgfnoma" / "lgfnoma.toml"
        path.parent.mkdir(parents=True)
        path.write_text("[experiment]\nname = 'xdg'\n")
        assert find_config_path() == str(path)

    def test_environment_variable_wins(self, tmp_path, monkeypatch):
        (tmp_path / "lgfnoma.toml").write_text("[experiment]\nname = 'cwd'\n")
        env_path = tmp_path / "env.toml"
        env_path.write_text("[experiment]\nname = 'env'\n")
        monkeypatch.setenv("LGF_CONFIG", str(env_path))
        assert load_experiment_config().name == "env"

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.toml"))

    def test_missing_environment_file(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LGF_CONFIG", str(tmp_path / "absent.toml"))
        with pytest.raises(ConfigError):
            load_config()

    def test_malformed_explicit_file(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[experiment\n")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_malformed_discovered_file_is_ignored(self, tmp_path):
        (tmp_path / "lgfnoma.toml").write_text("not = [toml\n")
        assert load_config() == {}


class TestExperimentConfig:
    def test_bundled_sweep(self):
        config = load_experiment_config(str(SWEEP_TOML))
        assert config.name == "device_sweep"
        assert config.system == SystemParams()
        assert config.sweep_points() == [float(q) for q in range(50, 501, 50)]
        assert [s.label for s in config.schemes] == [s.label for s in default_schemes()]
        assert config.placement == "balanced"

    def test_cli_overrides(self):
        config = load_experiment_config(str(SWEEP_TOML), master_seed=5, n_slots=None)
        assert config.master_seed == 5
        assert config.n_slots == 10_000

    def test_defaults_follow_settings(self):
        config = ExperimentConfig()
        assert config.master_seed == Settings.LGF_SEED
        assert config.output_dir == Settings.LGF_OUTPUT_DIR
        assert config.sweep_points() == [300.0]

    def test_single_point_defaults(self):
        assert ExperimentConfig(sweep_variable="M").sweep_points() == [48.0]
        assert ExperimentConfig(sweep_variable="L").sweep_points() == [5.0]

    def test_fractional_range(self):
        config = ExperimentConfig(
            sweep_variable="p_E", sweep_start=0.1, sweep_stop=0.5, sweep_step=0.1
        )
        assert config.sweep_points() == [0.1, 0.2, 0.3, 0.4, 0.5]

    @pytest.mark.parametrize(
        "data",
        [
            {"system": {"bandwidth": 1.0}},
            {"system": {"subchannel_bandwidth_khz": 7.0}},
            {"experiment": {"sweep_start": 100, "sweep_stop": 50}},
            {"experiment": {"sweep_values": [50.5]}},
            {"experiment": {"sweep_variable": "L", "sweep_values": [0]}},
            {"experiment": {"sweep_variable": "M", "sweep_values": [1]}},
            {"experiment": {"sweep_variable": "p_E", "sweep_values": [1.5]}},
            {"experiment": {"grid_step": 0.0}},
            {"experiment": {"master_seed": -1}},
            {"experiment": {"unknown": 1}},
            {"schemes": []},
            {"schemes": [{"kind": "aloha"}]},
        ],
    )
    def test_invalid_mappings(self, data):
        with pytest.raises(ConfigError):
            experiment_from_mapping(data)

    def test_error_names_location(self):
        with pytest.raises(ConfigError, match="system"):
            experiment_from_mapping({"system": {"pathloss_exponent": 1.0}})


class TestSchemeSpec:
    def test_labels(self):
        assert SchemeSpec(kind="hybrid-layered", eab_enabled=True).label == "hybrid-layered"
        assert SchemeSpec(kind="random-noma", eab_enabled=True).label == "random-noma+eab"
        assert SchemeSpec(kind="random-noma").label == "random-noma"
        assert SchemeSpec(kind="coordinated-oma").label == "coordinated-oma"

    def test_default_schemes(self):
        labels = [s.label for s in default_schemes()]
        assert labels == [
            "hybrid-layered",
            "random-noma+eab",
            "random-noma",
            "grant-free-oma",
            "coordinated-oma",
        ]


class TestPresets:
    def test_evaluation_defaults(self):
        assert presets.DEFAULT_SYSTEM == SystemParams()
        assert presets.FIG3_TOTAL_CONTENDERS == (200, 500)
        assert len(presets.FIG4C_SUCCESSES) == 25
        assert presets.FIG5_DEVICES[0] == 50 and presets.FIG5_DEVICES[-1] == 500
        assert set(presets.FIGURE_DESCRIPTIONS) == {"fig3", "fig4a", "fig4b", "fig4c", "fig5"}
