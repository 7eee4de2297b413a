"""Tests for configuration management."""

import json

import pytest

from dp_toolkit.config_manager import ConfigManager, EngineConfig, load_toolkit_config
from dp_toolkit.exceptions import ConfigurationError


@pytest.fixture
def clean_env(monkeypatch):
    for name in ("FUEL", "FUEL_FACTOR", "ORACLE_CAP", "SEED", "OUTPUT_DIR", "LOG_LEVEL", "LOG_DIR"):
        monkeypatch.delenv(f"DP_TOOLKIT_{name}", raising=False)
    return monkeypatch


class TestConfigManager:
    """Defaults, file, environment and command-line layers."""

    def test_defaults(self, tmp_path, clean_env):
        manager = ConfigManager(str(tmp_path / "absent.json")).load_config(use_dotenv=False)
        assert manager.engine.fuel is None
        assert manager.engine.fuel_factor == 10
        assert manager.engine.oracle_cap == 200
        assert manager.corpus.seed == 0
        assert manager.logging.level == "WARNING"

    def test_file_values(self, tmp_path, clean_env):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"engine": {"fuel": 50}, "corpus": {"generated": 5, "bogus": 1}}))
        manager = ConfigManager(str(path)).load_config(use_dotenv=False)
        assert manager.engine.fuel == 50
        assert manager.corpus.generated == 5
        assert not hasattr(manager.corpus, "bogus")

    def test_environment_overrides_file(self, tmp_path, clean_env):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"engine": {"oracle_cap": 10}}))
        clean_env.setenv("DP_TOOLKIT_ORACLE_CAP", "50")
        clean_env.setenv("DP_TOOLKIT_LOG_LEVEL", "debug")
        manager = ConfigManager(str(path)).load_config(use_dotenv=False)
        assert manager.engine.oracle_cap == 50
        assert manager.logging.level == "DEBUG"

    def test_non_numeric_environment(self, tmp_path, clean_env):
        clean_env.setenv("DP_TOOLKIT_SEED", "abc")
        with pytest.raises(ConfigurationError):
            ConfigManager(str(tmp_path / "absent.json")).load_config(use_dotenv=False)

    def test_unreadable_file(self, tmp_path, clean_env):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        with pytest.raises(ConfigurationError):
            ConfigManager(str(path)).load_config(use_dotenv=False)

    def test_validation(self, tmp_path, clean_env):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"logging": {"level": "LOUD"}, "engine": {"fuel_factor": 0}}))
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(str(path)).load_config(use_dotenv=False)
        assert len(excinfo.value.context["errors"]) == 2

    def test_overrides(self, tmp_path, clean_env):
        manager = ConfigManager(str(tmp_path / "absent.json")).load_config(use_dotenv=False)
        manager.apply_overrides(fuel=3, seed=None, output_dir="out")
        assert manager.engine.fuel == 3
        assert manager.corpus.seed == 0
        assert manager.output.output_dir == "out"
        with pytest.raises(ConfigurationError):
            manager.apply_overrides(oracle_cap=-1)

    def test_run_config(self, tmp_path, clean_env):
        manager = ConfigManager(str(tmp_path / "absent.json")).load_config(use_dotenv=False)
        manager.apply_overrides(seed=9)
        config = manager.to_run_config("corpus", verbose=True)
        assert config.command == "corpus"
        assert config.seed == 9
        assert config.options == {"verbose": True}

    def test_save_and_reload(self, tmp_path, clean_env):
        path = tmp_path / "nested" / "config.json"
        manager = ConfigManager(str(path)).load_config(use_dotenv=False)
        manager.engine.oracle_cap = 77
        manager.save_config()
        assert load_toolkit_config(str(path)).engine.oracle_cap == 77

    def test_summary(self, tmp_path, clean_env):
        summary = ConfigManager(str(tmp_path / "absent.json")).load_config(use_dotenv=False).get_summary()
        assert summary["fuel"] == "10*|d|^2"
        assert summary["oracle_cap"] == 200


def test_fuel_for():
    assert EngineConfig().fuel_for(3) == 90
    assert EngineConfig().fuel_for(0) == 10
    assert EngineConfig(fuel=7).fuel_for(100) == 7
