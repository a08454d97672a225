"""
Settings for Primitive Forge.

Defaults come from PRIMITIVE_FORGE_* environment variables (a .env file is
honoured by the CLI) and can be overridden by a JSON or YAML config file.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .construction.oscillation import DEFAULT_CHUNK_SIZE, DEFAULT_SAMPLES
from .construction.partition import ABSOLUTE_MAX_LEVEL, DEFAULT_MAX_LEVEL
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "PRIMITIVE_FORGE_"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(ENV_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}") from e


class ForgeSettings(BaseModel):
    """Engine and CLI defaults."""

    max_level: int = Field(
        default_factory=lambda: _env_int("MAX_LEVEL", DEFAULT_MAX_LEVEL),
        ge=1, le=ABSOLUTE_MAX_LEVEL,
        description="Highest partition level the refinement loop may reach",
    )
    samples: int = Field(
        default_factory=lambda: _env_int("SAMPLES", DEFAULT_SAMPLES),
        ge=2, description="Sub-samples per member for oscillation estimates",
    )
    chunk_size: int = Field(
        default_factory=lambda: _env_int("CHUNK_SIZE", DEFAULT_CHUNK_SIZE),
        ge=1, description="Members evaluated per call of f",
    )
    materialize_limit: int = Field(
        default_factory=lambda: _env_int("MATERIALIZE_LIMIT", DEFAULT_MAX_LEVEL),
        ge=1, le=ABSOLUTE_MAX_LEVEL,
        description="Highest level at which segment coefficients are stored",
    )
    log_level: str = Field(
        default_factory=lambda: os.getenv(ENV_PREFIX + "LOG_LEVEL", "WARNING"),
        description="Logging level",
    )

    model_config = ConfigDict(extra="forbid", frozen=True)

    def model_post_init(self, __context: Any) -> None:
        logger.debug(
            f"ForgeSettings loaded: max_level={self.max_level}, samples={self.samples}, "
            f"chunk_size={self.chunk_size}, materialize_limit={self.materialize_limit}"
        )


def _read_config_file(config_path: Path) -> Dict[str, Any]:
    try:
        text = config_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"Cannot read config file {config_path}: {e}") from e
    try:
        if config_path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"Cannot parse config file {config_path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {config_path} must contain a mapping")
    return data


def load_settings(config_path: Optional[Path] = None) -> ForgeSettings:
    """
    Build settings from the environment, overridden by an optional config file.

    Args:
        config_path: Optional JSON (.json) or YAML (.yaml/.yml) file

    Returns:
        Validated ForgeSettings

    Raises:
        ConfigurationError: On unreadable files, unknown keys or invalid values
    """
    overrides: Dict[str, Any] = {}
    if config_path is not None:
        overrides = _read_config_file(config_path)
        logger.info(f"Loaded configuration from {config_path}")
    try:
        return ForgeSettings(**overrides)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid settings: {e}") from e
