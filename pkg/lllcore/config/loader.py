"""
Configuration loader for lllcore.

Handles loading configuration from multiple sources with precedence:
1. Environment variables (highest priority, .env honoured)
2. Configuration files (YAML, JSON)
3. Default constants (lowest priority)

Also reads the JSON/YAML inputs of the CLI (instances, parameter files,
colorings) so every file access shares one error policy.
"""

import os
import json
import yaml
from pathlib import Path
from typing import Dict, Any, Optional, Union
import logging

from dotenv import load_dotenv

from .constants import EngineConfig, EnumerationConfig, ExperimentConfig, PathConfig
from lllcore.core.errors import InputError
from lllcore.models import Settings

logger = logging.getLogger(__name__)

# Environment variable -> settings field
ENV_OVERRIDES = {
    "LLLCORE_MAX_STEPS": "max_steps",
    "LLLCORE_MAX_ROUNDS": "max_rounds",
    "LLLCORE_MAX_STATES": "max_states",
    "LLLCORE_MAX_SUBSETS": "max_subsets",
    "LLLCORE_MAX_WORDS": "max_words",
    "LLLCORE_MAX_WALKS": "max_walks",
    "LLLCORE_SHEARER_MAX_FLAWS": "shearer_max_flaws",
    "LLLCORE_TRIALS": "trials",
    "LLLCORE_JOBS": "jobs",
    "LLLCORE_DATA_DIR": "data_dir",
}


def default_settings() -> Dict[str, Any]:
    """Settings taken from the constants classes."""
    return {
        "max_steps": EngineConfig.MAX_STEPS,
        "max_rounds": EngineConfig.MAX_ROUNDS,
        "max_states": EnumerationConfig.MAX_STATES,
        "max_subsets": EnumerationConfig.MAX_SUBSETS,
        "max_words": EnumerationConfig.MAX_WORDS,
        "max_walks": EnumerationConfig.MAX_WALKS,
        "shearer_max_flaws": EnumerationConfig.SHEARER_MAX_FLAWS,
        "trials": ExperimentConfig.DEFAULT_TRIALS,
        "jobs": ExperimentConfig.DEFAULT_JOBS,
        "data_dir": PathConfig.DATA_DIR,
    }


class ConfigLoader:
    """Unified configuration loader."""

    def __init__(self, data_dir: Optional[str] = None, load_env_file: bool = True):
        """Initialize the config loader.

        Args:
            data_dir: Base directory for configuration files
            load_env_file: Whether to read a .env file into the environment
        """
        if load_env_file:
            load_dotenv(PathConfig.ENV_FILE, override=False)
        self.data_dir = Path(data_dir or os.getenv("LLLCORE_DATA_DIR", PathConfig.DATA_DIR))

    def load_settings(self, config_path: Optional[str] = None) -> Settings:
        """Build the effective settings.

        Args:
            config_path: Optional YAML/JSON settings file; defaults to
                data_dir/settings.yaml when that file exists

        Returns:
            Settings with env > file > constants precedence applied
        """
        values = default_settings()

        if config_path:
            values.update(self.load_file(config_path))
        else:
            default_file = self.data_dir / PathConfig.SETTINGS_FILE
            if default_file.exists():
                values.update(self.load_file(default_file))

        for env_name, field in ENV_OVERRIDES.items():
            raw = os.getenv(env_name)
            if raw is None:
                continue
            if field == "data_dir":
                values[field] = raw
                continue
            try:
                values[field] = int(raw)
            except ValueError:
                raise InputError(f"Environment variable {env_name} must be an integer, got {raw!r}")

        logger.debug(f"Effective settings: {values}")
        return Settings(**values)

    def load_file(self, path: Union[str, Path]) -> Dict[str, Any]:
        """Load a JSON or YAML file chosen by extension.

        Args:
            path: File path; relative paths that do not exist are retried
                under data_dir

        Returns:
            Parsed mapping

        Raises:
            InputError: When the file is missing or cannot be parsed
        """
        filepath = Path(path)
        if not filepath.exists() and not filepath.is_absolute():
            candidate = self.data_dir / filepath
            if candidate.exists():
                filepath = candidate
        if not filepath.exists():
            raise InputError(f"File not found: {filepath}")

        try:
            with open(filepath, 'r') as f:
                if filepath.suffix.lower() in (".yaml", ".yml"):
                    data = yaml.safe_load(f) or {}
                else:
                    data = json.load(f)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise InputError(f"Failed to parse {filepath}: {e}")

        if not isinstance(data, dict):
            raise InputError(f"{filepath} must contain a mapping at top level")
        return data

    def save_json(self, path: Union[str, Path], data: Dict[str, Any]) -> bool:
        """Save a JSON file with sorted keys.

        Args:
            path: Destination path
            data: Data to save

        Returns:
            True if successful
        """
        filepath = Path(path)
        try:
            if filepath.parent and not filepath.parent.exists():
                filepath.parent.mkdir(parents=True, exist_ok=True)
            with open(filepath, 'w') as f:
                json.dump(data, f, indent=2, sort_keys=True)
            logger.info(f"Saved {filepath}")
            return True
        except OSError as e:
            logger.error(f"Failed to save JSON {filepath}: {e}")
            return False

    def save_yaml(self, path: Union[str, Path], data: Dict[str, Any]) -> bool:
        """Save a YAML file.

        Args:
            path: Destination path
            data: Data to save

        Returns:
            True if successful
        """
        filepath = Path(path)
        try:
            with open(filepath, 'w') as f:
                yaml.dump(data, f, default_flow_style=False)
            logger.info(f"Saved {filepath}")
            return True
        except OSError as e:
            logger.error(f"Failed to save YAML {filepath}: {e}")
            return False
