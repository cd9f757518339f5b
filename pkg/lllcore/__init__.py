"""
lllcore - Algorithmic Local Lemma Core

A library and command-line tool for resampling random walks over discrete
spaces that provides:
- Flaw/action models: explicit tables, the variable model, perfect matchings
- Sequential and round-based walks with pluggable flaw-selection strategies
- Exhaustive checks of atomicity, causality and commutativity
- Cluster-expansion and Shearer certificates with runtime bounds
- Stable words, swapping mappings and bad-walk enumeration
- The rainbow perfect matching experiment
"""

__version__ = "0.3.0"

# Package metadata
__license__ = "MIT"

# Package requirements
__requires__ = {
    "python": ">=3.8",
    "pydantic": ">=1.8.0",
    "PyYAML": ">=6.0",
    "python-dotenv": ">=0.19.0",
    "numpy": ">=1.21.0",
    "scipy": ">=1.7.0",
    "networkx": ">=2.6",
    "hypothesis": ">=6.0.0",
    "pytest": ">=7.0.0",
    "pytest-cov": ">=3.0.0",
}

# Initialize logging first
from lllcore.logger import get_logger

logger = get_logger(__name__)
logger.debug(f"lllcore v{__version__} initializing")

# Import core functionality
from lllcore.core import (
    DependencyGraph, ModelInstance, Walk, Step, LLLCoreError, InputError,
)
from lllcore.engine import make_strategy, run_sequential, run_parallel, run_trials
from lllcore.oracles import InstanceFactory, ExplicitInstance, VariableModel, MatchingInstance
from lllcore.conditions import LLLParams

# This version information is for compatibility checking
version_info = {
    "version": __version__,
    "requires_python": ">=3.8"
}
