"""
Configuration module for lllcore.

Provides centralized access to constants and configuration loading.
"""

from .constants import (
    EnumerationConfig,
    EngineConfig,
    ToleranceConfig,
    ExperimentConfig,
    PathConfig,
    APIConfig,
    LogConfig
)
from .loader import ConfigLoader, default_settings

__all__ = [
    'EnumerationConfig',
    'EngineConfig',
    'ToleranceConfig',
    'ExperimentConfig',
    'PathConfig',
    'APIConfig',
    'LogConfig',
    'ConfigLoader',
    'default_settings',
]
