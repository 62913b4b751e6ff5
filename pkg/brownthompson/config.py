"""Configuration management for brownthompson."""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class EnumerationConfig(BaseModel):
    """Budgets and parallelism for the enumeration engines."""

    brute_budget: int = Field(default=2_000_000, ge=1)
    mitm_budget: int = Field(default=300_000, ge=1)
    dp_budget: int = Field(default=2_000_000, ge=1)
    workers: int = Field(default=1, ge=1, le=256)


class VerifyConfig(BaseModel):
    """Sizes of the verification suites."""

    seed: int = 20240101
    confluence_samples: int = Field(default=1000, ge=1)
    strategies: int = Field(default=5, ge=1)
    oracle_max_length: int = Field(default=4, ge=1, le=8)
    completion_samples: int = Field(default=100, ge=1)


class TelemetryConfig(BaseModel):
    """Logging configuration."""

    json_logging: bool = False
    sink: str = Field(default="stderr", pattern="^(stderr|file|both)$")
    log_file: str = "logs/brownthompson.log"


class Settings(BaseSettings):
    """Settings loaded from environment variables (prefix BT_)."""

    model_config = SettingsConfigDict(
        env_prefix="BT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    log_level: str = Field(default="WARNING", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$")
    workers: Optional[int] = Field(default=None, ge=1)
    brute_budget: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None


class Config:
    """Combined configuration from YAML and environment."""

    def __init__(self, config_path: Optional[Path] = None):
        self.settings = Settings()
        self._config_path = config_path or Path(__file__).parent.parent / "configs" / "config.yaml"
        self._yaml_config = self._load_yaml_config()

        self.enumeration = EnumerationConfig(**self._yaml_config.get("enumeration", {}))
        self.verify = VerifyConfig(**self._yaml_config.get("verify", {}))
        self.telemetry = TelemetryConfig(**self._yaml_config.get("telemetry", {}))

        # Environment wins over YAML
        if self.settings.workers:
            self.enumeration.workers = self.settings.workers
        if self.settings.brute_budget:
            self.enumeration.brute_budget = self.settings.brute_budget
        if self.settings.seed is not None:
            self.verify.seed = self.settings.seed

    def _load_yaml_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        if self._config_path.exists():
            with open(self._config_path, "r") as f:
                return yaml.safe_load(f) or {}
        return {}

    @property
    def log_to_file(self) -> bool:
        """Check if a file sink is configured."""
        return self.telemetry.sink in ("file", "both")


# Global config instance
config = Config()
