"""Configuration management: dataclass sections, JSON file, .env and environment overrides."""

import json
import logging
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from .constants import (
    DEFAULT_CONFIG_FILE,
    DEFAULT_FUEL_FACTOR,
    DEFAULT_GENERATED,
    DEFAULT_ORACLE_CAP,
    DEFAULT_SEED,
    ENV_FUEL,
    ENV_FUEL_FACTOR,
    ENV_LOG_DIR,
    ENV_LOG_LEVEL,
    ENV_ORACLE_CAP,
    ENV_OUTPUT_DIR,
    ENV_SEED,
    LOG_LEVELS,
)
from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass
class EngineConfig:
    """Normalization and oracle limits."""
    fuel: Optional[int] = None  # None: fuel_factor * |d|^2
    fuel_factor: int = DEFAULT_FUEL_FACTOR
    oracle_cap: int = DEFAULT_ORACLE_CAP

    def fuel_for(self, size: int) -> int:
        if self.fuel is not None:
            return self.fuel
        return self.fuel_factor * max(size, 1) ** 2


@dataclass
class CorpusConfig:
    seed: int = DEFAULT_SEED
    generated: int = DEFAULT_GENERATED
    atoms: List[str] = field(default_factory=lambda: ["p", "q", "r", "s"])
    max_depth: int = 3


@dataclass
class OutputConfig:
    output_dir: str = "."
    certificate_suffix: str = ".cert"


@dataclass
class LoggingConfig:
    level: str = "WARNING"
    log_dir: Optional[str] = None
    json_logs: bool = False
    max_file_size_mb: float = 10.0
    backup_count: int = 3


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""
    command: str
    engine: EngineConfig
    corpus: CorpusConfig
    output: OutputConfig
    logging: LoggingConfig
    options: Dict[str, Any] = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return self.corpus.seed


class ConfigManager:
    """Configuration manager for the toolkit."""

    SECTIONS = ("engine", "corpus", "output", "logging")

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file or DEFAULT_CONFIG_FILE

        self.engine = EngineConfig()
        self.corpus = CorpusConfig()
        self.output = OutputConfig()
        self.logging = LoggingConfig()

    def load_config(self, config_file: Optional[str] = None, use_dotenv: bool = True) -> "ConfigManager":
        """Load defaults, then the JSON file, then environment overrides; raise on invalid values."""
        if config_file:
            self.config_file = config_file

        if Path(self.config_file).exists():
            self._load_from_file()
            logger.info(f"✅ Loaded config from {self.config_file}")
        else:
            logger.debug(f"Config file {self.config_file} not found, using defaults")

        if use_dotenv:
            load_dotenv()
        self._load_from_environment()

        validation_errors = self._validate_config()
        if validation_errors:
            logger.error(f"❌ Config validation errors: {validation_errors}")
            raise ConfigurationError("Invalid configuration", validation_errors)

        return self

    def _load_from_file(self) -> None:
        try:
            with open(self.config_file, "r") as f:
                config_data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Cannot read config file {self.config_file}: {e}") from e

        for section in self.SECTIONS:
            if section in config_data:
                self._update_dataclass(getattr(self, section), config_data[section])

    def _load_from_environment(self) -> None:
        try:
            if os.getenv(ENV_FUEL):
                self.engine.fuel = int(os.environ[ENV_FUEL])
            if os.getenv(ENV_FUEL_FACTOR):
                self.engine.fuel_factor = int(os.environ[ENV_FUEL_FACTOR])
            if os.getenv(ENV_ORACLE_CAP):
                self.engine.oracle_cap = int(os.environ[ENV_ORACLE_CAP])
            if os.getenv(ENV_SEED):
                self.corpus.seed = int(os.environ[ENV_SEED])
        except ValueError as e:
            raise ConfigurationError(f"Non-numeric environment override: {e}") from e

        if os.getenv(ENV_OUTPUT_DIR):
            self.output.output_dir = os.environ[ENV_OUTPUT_DIR]
        if os.getenv(ENV_LOG_LEVEL):
            self.logging.level = os.environ[ENV_LOG_LEVEL].upper()
        if os.getenv(ENV_LOG_DIR):
            self.logging.log_dir = os.environ[ENV_LOG_DIR]

    def _update_dataclass(self, obj: Any, data: Dict[str, Any]) -> None:
        for key, value in data.items():
            if hasattr(obj, key):
                setattr(obj, key, value)
            else:
                logger.warning(f"⚠️ Unknown config key {type(obj).__name__}.{key} ignored")

    def apply_overrides(self, **overrides: Any) -> None:
        """Apply command-line flags; None means 'not given'."""
        mapping = {
            "fuel": (self.engine, "fuel"),
            "oracle_cap": (self.engine, "oracle_cap"),
            "seed": (self.corpus, "seed"),
            "output_dir": (self.output, "output_dir"),
            "log_level": (self.logging, "level"),
        }
        for key, value in overrides.items():
            if value is None or key not in mapping:
                continue
            target, attribute = mapping[key]
            setattr(target, attribute, value)

        validation_errors = self._validate_config()
        if validation_errors:
            raise ConfigurationError("Invalid configuration", validation_errors)

    def _validate_config(self) -> List[str]:
        errors = []

        if self.engine.fuel is not None and self.engine.fuel < 0:
            errors.append("Fuel must be non-negative")
        if self.engine.fuel_factor <= 0:
            errors.append("Fuel factor must be positive")
        if self.engine.oracle_cap <= 0:
            errors.append("Oracle cap must be positive")

        if self.corpus.generated < 0:
            errors.append("Generated corpus size must be non-negative")
        if self.corpus.max_depth < 1:
            errors.append("Generator depth must be at least 1")
        if not self.corpus.atoms:
            errors.append("Generator needs at least one atom")

        if self.logging.level not in LOG_LEVELS:
            errors.append(f"Invalid log level {self.logging.level!r}")
        if self.logging.backup_count < 0:
            errors.append("Backup count must be non-negative")

        return errors

    def to_run_config(self, command: str, **options: Any) -> RunConfig:
        return RunConfig(
            command=command,
            engine=self.engine,
            corpus=self.corpus,
            output=self.output,
            logging=self.logging,
            options=options,
        )

    def save_config(self, config_file: Optional[str] = None) -> None:
        if config_file:
            self.config_file = config_file

        config_data = {section: self._dataclass_to_dict(getattr(self, section)) for section in self.SECTIONS}
        Path(self.config_file).parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, "w") as f:
            json.dump(config_data, f, indent=2)

        logger.info(f"✅ Configuration saved to {self.config_file}")

    def _dataclass_to_dict(self, obj: Any) -> Dict[str, Any]:
        return {f.name: getattr(obj, f.name) for f in fields(obj)}

    def get_summary(self) -> Dict[str, Any]:
        return {
            "fuel": self.engine.fuel if self.engine.fuel is not None else f"{self.engine.fuel_factor}*|d|^2",
            "oracle_cap": self.engine.oracle_cap,
            "seed": self.corpus.seed,
            "generated": self.corpus.generated,
            "output_dir": self.output.output_dir,
            "log_level": self.logging.level,
            "config_file": self.config_file,
        }


def load_toolkit_config(config_file: Optional[str] = None) -> ConfigManager:
    """Load configuration (convenience function)."""
    return ConfigManager(config_file).load_config()
