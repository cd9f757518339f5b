"""
lllcore.logger
--------------
Centralized logging configuration for lllcore.

This module provides a consistent logging setup across all lllcore components,
with features like:
- Configurable log levels via environment variables
- Console logging on stderr (stdout carries CLI reports)
- Optional rotating file logs when LLLCORE_LOG_DIR is set
- Structured log format for easier parsing
"""

import os
import logging
from logging.handlers import RotatingFileHandler
import sys
import time
from datetime import datetime
import platform
import json

from lllcore.config.constants import LogConfig

# File logging is opt-in; a library should not create directories on import
LOG_DIR = os.environ.get("LLLCORE_LOG_DIR")

# Get log level from environment or use the configured default
LOG_LEVEL = os.environ.get("LLLCORE_LOG_LEVEL", LogConfig.DEFAULT_LOG_LEVEL).upper()
LOG_FILE = os.path.join(LOG_DIR, LogConfig.LOG_FILE_NAME) if LOG_DIR else None

# Configure log format for different handlers
CONSOLE_FORMAT = LogConfig.CONSOLE_FORMAT
FILE_FORMAT = LogConfig.FILE_FORMAT

STARTUP_TIME = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
SYSTEM_INFO = {
    "platform": platform.platform(),
    "python_version": platform.python_version(),
    "startup_time": STARTUP_TIME,
    "hostname": platform.node()
}

# Configure the package logger rather than the root logger
package_logger = logging.getLogger("lllcore")

try:
    numeric_level = getattr(logging, LOG_LEVEL)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {LOG_LEVEL}")
    package_logger.setLevel(numeric_level)
except (AttributeError, ValueError):
    sys.stderr.write(f"WARNING: Invalid log level '{LOG_LEVEL}'. Using INFO.\n")
    package_logger.setLevel(logging.INFO)

# Clear any existing handlers (to avoid duplicates during reloads)
for handler in package_logger.handlers[:]:
    package_logger.removeHandler(handler)

console_formatter = logging.Formatter(CONSOLE_FORMAT)
file_formatter = logging.Formatter(FILE_FORMAT)

console_handler = logging.StreamHandler(sys.stderr)
console_handler.setFormatter(console_formatter)
package_logger.addHandler(console_handler)

if LOG_FILE:
    try:
        os.makedirs(LOG_DIR, exist_ok=True)
        file_handler = RotatingFileHandler(
            LOG_FILE,
            maxBytes=LogConfig.MAX_LOG_SIZE,
            backupCount=LogConfig.BACKUP_COUNT
        )
        file_handler.setFormatter(file_formatter)
        package_logger.addHandler(file_handler)
    except Exception as e:
        # If file logging fails, log to console only
        package_logger.error(f"Failed to setup file logging: {str(e)}")

logger = logging.getLogger(__name__)

logger.debug(f"lllcore logger initialized at {STARTUP_TIME}")
logger.debug(f"Log level set to {LOG_LEVEL}")
logger.debug(f"System info: {json.dumps(SYSTEM_INFO)}")


def get_logger(name):
    """
    Get a logger instance for a module.

    Args:
        name: The name of the module (typically __name__)

    Returns:
        A configured logger instance
    """
    return logging.getLogger(name)


class LoggerAdapter(logging.LoggerAdapter):
    """
    Adapter for adding run context (seed, trial, strategy) to log messages.

    Usage:
        log = LoggerAdapter(get_logger(__name__), {"seed": 7, "strategy": "pi_stable"})
        log.info("run finished")
    """

    def process(self, msg, kwargs):
        extra = kwargs.get("extra", {})

        if hasattr(self, "extra") and isinstance(self.extra, dict):
            for key, value in self.extra.items():
                if key not in extra:
                    extra[key] = value

        if "timestamp" not in extra:
            extra["timestamp"] = time.time()

        kwargs["extra"] = extra

        context = " ".join(
            f"{key}={value}" for key, value in sorted(extra.items()) if key != "timestamp"
        )
        if context:
            msg = f"[{context}] {msg}"
        return msg, kwargs
