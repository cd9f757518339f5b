"""
Centralized constants for lllcore.

All caps, tolerances and defaults are defined here.
This provides a single source of truth for configuration values.
"""


# Enumeration caps
class EnumerationConfig:
    """Caps on every exhaustive enumeration; exceeding one raises ResourceLimitError."""
    MAX_STATES = 200_000
    MAX_SUBSETS = 100_000
    MAX_WORDS = 100_000
    MAX_WALKS = 100_000
    SHEARER_MAX_FLAWS = 20

    # Reports keep at most this many witnesses; violation counts stay exact
    MAX_WITNESSES = 25


# Engine Configuration
class EngineConfig:
    """Random walk engine constants."""
    MAX_STEPS = 10_000_000
    MAX_ROUNDS = 1_000_000

    # RNG identity recorded in every report
    RNG_NAME = "philox4x64"
    RNG_VERSION = "numpy.random.Philox/2"

    # Spawn-key prefix of the uniform_random strategy stream
    STRATEGY_STREAM = 1


# Numeric tolerances
class ToleranceConfig:
    """Tolerances used by the float backend only; the rational backend is exact."""
    DISTRIBUTION_SUM = 1e-9
    PRODUCT_EQUALITY = 1e-12
    RELATIVE = 1e-12


# Experiment Configuration
class ExperimentConfig:
    """Monte Carlo experiment constants."""
    DEFAULT_TRIALS = 100
    TAIL_RANGE = 10
    SIGMA_MULTIPLIER = 3
    DEFAULT_JOBS = 1


# Path Configuration
class PathConfig:
    """File and directory path constants."""
    DATA_DIR = "data"
    SETTINGS_FILE = "settings.yaml"
    ENV_FILE = ".env"


# API Configuration
class APIConfig:
    """Tool identity recorded in report provenance."""
    TITLE = "lllcore"
    DESCRIPTION = "Algorithmic local lemma core: random walks, certificates and stable-sequence tooling"
    VERSION = "0.3.0"


# Logging Configuration
class LogConfig:
    """Logging-related constants."""
    DEFAULT_LOG_LEVEL = "INFO"
    CONSOLE_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"
    FILE_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(filename)s:%(lineno)d - %(message)s"
    LOG_FILE_NAME = "lllcore.log"
    MAX_LOG_SIZE = 10485760  # 10MB
    BACKUP_COUNT = 5
