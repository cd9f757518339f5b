"""Flaw-selection strategies.

A strategy is a deterministic function of the walk history. To make that
explicit (and to let enumerators branch a run), strategies are stateless
objects whose per-run memory is an immutable value threaded through
``select``: ``start()`` gives the initial value, ``select`` returns the chosen
flaw with the next value. Randomized selection is modelled as a family of
deterministic strategies indexed by the strategy's own seed.
"""

from abc import ABC, abstractmethod
import logging
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Type

from lllcore.config.constants import EngineConfig
from lllcore.core.errors import InputError, StrategyContractError
from lllcore.core.graph import restrict_order
from lllcore.core.instance import ModelInstance
from lllcore.core.rng import keyed_rng

logger = logging.getLogger(__name__)


class Strategy(ABC):
    """Base class for all selection strategies."""

    kind: str = ""

    def start(self) -> Any:
        """Memory value at the start of a run."""
        return None

    def on_round_start(self, memory: Any) -> Any:
        """Hook called by the round-based engine before each round."""
        return memory

    @abstractmethod
    def select(self, memory: Any, inst: ModelInstance, history, present: FrozenSet[int]) -> Tuple[int, Any]:
        """Choose a flaw from ``present`` (never empty).

        Args:
            memory: Value returned by the previous call (or ``start()``)
            inst: The instance being walked
            history: Walk prefix so far (``start``, ``steps``, ``length``)
            present: Candidate flaws

        Returns:
            (flaw, next memory value)
        """

    def describe(self) -> str:
        return self.kind


class PiStableStrategy(Strategy):
    """Lowest flaw of F_σ − Γ⁺(I) under the order π, where I collects the flaws
    addressed since the last time that set ran empty. This is the sequential
    form of the round-based algorithm's maximal-independent-set selection.
    """

    kind = "pi_stable"

    def __init__(self, order: Optional[Sequence[int]] = None):
        self.order = list(order) if order is not None else None
        self._rank: Optional[List[int]] = None

    def rank(self, flaw_count: int) -> List[int]:
        if self._rank is None or len(self._rank) != flaw_count:
            self._rank = restrict_order(self.order, flaw_count)
        return self._rank

    def start(self) -> int:
        return 0

    def on_round_start(self, memory: int) -> int:
        return 0

    def select(self, memory: int, inst: ModelInstance, history, present: FrozenSet[int]) -> Tuple[int, int]:
        dep = inst.require_dependency()
        rank = self.rank(inst.flaw_count)
        blocked = dep.gamma_mask(memory, plus=True)
        available = [f for f in present if not blocked >> f & 1]
        if not available:
            memory = 0
            available = list(present)
        flaw = min(available, key=lambda f: rank[f])
        return flaw, memory | (1 << flaw)

    def describe(self) -> str:
        return self.kind if self.order is None else f"{self.kind}:{','.join(map(str, self.order))}"


class UniformRandomStrategy(Strategy):
    """Uniform choice among present flaws, keyed by (seed, history length).

    Draws come from the strategy stream of the seed, apart from the stream
    the engine samples states with.
    """

    kind = "uniform_random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def select(self, memory: Any, inst: ModelInstance, history, present: FrozenSet[int]) -> Tuple[int, Any]:
        options = sorted(present)
        rng = keyed_rng(self.seed, EngineConfig.STRATEGY_STREAM, history.length)
        return options[int(rng.integers(len(options)))], memory

    def describe(self) -> str:
        return f"{self.kind}:{self.seed}"


class FirstPresentStrategy(Strategy):
    """Smallest flaw id present."""

    kind = "first_present"

    def select(self, memory: Any, inst: ModelInstance, history, present: FrozenSet[int]) -> Tuple[int, Any]:
        return min(present), memory


class ScriptedStrategy(Strategy):
    """Replays a fixed flaw sequence; used for testing."""

    kind = "scripted"

    def __init__(self, script: Sequence[int]):
        self.script = list(script)

    def start(self) -> int:
        return 0

    def select(self, memory: int, inst: ModelInstance, history, present: FrozenSet[int]) -> Tuple[int, int]:
        if memory >= len(self.script):
            raise StrategyContractError(f"Script exhausted after {len(self.script)} selections")
        flaw = self.script[memory]
        if flaw not in present:
            raise StrategyContractError(
                f"Scripted flaw {flaw} at position {memory} is not present (present: {sorted(present)})"
            )
        return flaw, memory + 1

    def describe(self) -> str:
        return f"{self.kind}:{','.join(map(str, self.script))}"


class StrategyFactory:
    """Builds strategies from spec strings such as ``pi_stable:2,0,1``."""

    _strategy_types: Dict[str, Type[Strategy]] = {
        'pi_stable': PiStableStrategy,
        'uniform_random': UniformRandomStrategy,
        'first_present': FirstPresentStrategy,
        'scripted': ScriptedStrategy,
    }

    @classmethod
    def create(cls, spec: str, seed: int = 0) -> Strategy:
        """Create a strategy.

        Args:
            spec: ``kind`` or ``kind:args``; args are a comma-separated order
                (pi_stable), a seed (uniform_random) or a flaw script (scripted)
            seed: Seed for uniform_random when the spec gives none

        Raises:
            InputError: When the spec cannot be parsed
        """
        kind, _, arg = spec.strip().partition(":")
        if kind not in cls._strategy_types:
            raise InputError(f"Unknown strategy {kind!r}; available: {', '.join(sorted(cls._strategy_types))}")
        try:
            numbers = [int(x) for x in arg.split(",") if x.strip()] if arg else []
        except ValueError:
            raise InputError(f"Cannot parse strategy arguments in {spec!r}")
        if kind == "pi_stable":
            return PiStableStrategy(numbers or None)
        if kind == "uniform_random":
            return UniformRandomStrategy(numbers[0] if numbers else seed)
        if kind == "scripted":
            if not numbers:
                raise InputError("scripted strategy needs a flaw list, e.g. scripted:0,1")
            return ScriptedStrategy(numbers)
        if numbers:
            raise InputError(f"Strategy {kind} takes no arguments")
        return cls._strategy_types[kind]()

    @classmethod
    def get_available_types(cls) -> List[str]:
        return sorted(cls._strategy_types)


def make_strategy(spec: str, seed: int = 0) -> Strategy:
    return StrategyFactory.create(spec, seed)
