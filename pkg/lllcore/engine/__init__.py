"""Random walk engine: strategies and the sequential and round-based runners."""

from lllcore.engine.strategies import (
    Strategy, PiStableStrategy, UniformRandomStrategy, FirstPresentStrategy, ScriptedStrategy,
    StrategyFactory, make_strategy,
)
from lllcore.engine.runner import RoundRecord, RunOutcome, run_sequential, run_parallel, run_trials

__all__ = [
    'Strategy', 'PiStableStrategy', 'UniformRandomStrategy', 'FirstPresentStrategy', 'ScriptedStrategy',
    'StrategyFactory', 'make_strategy',
    'RoundRecord', 'RunOutcome', 'run_sequential', 'run_parallel', 'run_trials',
]
