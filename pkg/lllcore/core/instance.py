"""Abstract base class for all model instances.

An instance bundles the state space Ω, the flaws, the measure ω, the initial
distribution ω^init and the action distributions ρ(·|f, σ). Concrete oracles
(explicit tables, variable models, matchings) implement the abstract methods;
everything else has a default built on them.

States must be hashable. Enumerable instances list Ω in a canonical order;
generative instances only sample and evaluate.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
import logging
from typing import Any, Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from lllcore.config.constants import ToleranceConfig
from lllcore.core.errors import CapabilityError, ContractViolationError, InputError
from lllcore.core.graph import DependencyGraph
from lllcore.core.numeric import Prob, close
from lllcore.core.rng import choose_weighted

logger = logging.getLogger(__name__)

State = Hashable
Outcome = Tuple[State, Prob]


class ModelInstance(ABC):
    """Base class for flaw/action models.

    Attributes:
        name: Human-readable instance name
        flaw_names: One label per flaw id
        dependency: Attached causality graph, or None
        exact: True when every probability is a Fraction
        atomic: True when the instance guarantees atomicity (enables
            backward-step SWAP realization); None when unknown
    """

    exact: bool = True
    atomic: Optional[bool] = None

    def __init__(self, name: str, flaw_names: Sequence[str], dependency: Optional[DependencyGraph] = None):
        self.name = name
        self.flaw_names = list(flaw_names)
        if dependency is not None and dependency.flaw_count != len(self.flaw_names):
            raise InputError(
                f"Dependency graph has {dependency.flaw_count} flaws, instance has {len(self.flaw_names)}"
            )
        self.dependency = dependency
        self._state_index: Optional[Dict[State, int]] = None
        self._predecessors: Optional[Dict[Tuple[int, State], List[State]]] = None

    @property
    def flaw_count(self) -> int:
        return len(self.flaw_names)

    def check_flaw(self, f: int) -> None:
        if not isinstance(f, int) or not 0 <= f < self.flaw_count:
            raise InputError(f"Flaw id {f!r} out of range [0, {self.flaw_count})")

    @abstractmethod
    def flaws_present(self, state: State) -> FrozenSet[int]:
        """F_σ: the flaws present in ``state``."""

    @abstractmethod
    def action_support(self, flaw: int, state: State) -> List[Outcome]:
        """A(f, σ) with ρ(·|f, σ): a list of (target, probability > 0) summing to 1."""

    @abstractmethod
    def measure(self, state: State) -> Prob:
        """ω(σ) > 0."""

    @abstractmethod
    def initial_measure(self, state: State) -> Prob:
        """ω^init(σ) ≥ 0."""

    # -- enumeration -----------------------------------------------------

    @property
    def enumerable(self) -> bool:
        return False

    def states(self) -> Sequence[State]:
        """Ω in canonical order.

        Raises:
            CapabilityError: For generative instances
        """
        raise CapabilityError(f"Instance '{self.name}' is not enumerable")

    def state_id(self, state: State) -> int:
        if self._state_index is None:
            self._state_index = {s: i for i, s in enumerate(self.states())}
        try:
            return self._state_index[state]
        except KeyError:
            raise InputError(f"Unknown state {state!r}")

    def initial_support(self) -> List[State]:
        return [s for s in self.states() if self.initial_measure(s) > 0]

    def init_ratio_max(self) -> Prob:
        """γ^init = max over σ of ω^init(σ) / ω(σ)."""
        return max(self.initial_measure(s) / self.measure(s) for s in self.initial_support())

    def flaw_measure(self, flaw: int) -> Prob:
        """ω(f) = Σ_{σ∈f} ω(σ)."""
        return sum((self.measure(s) for s in self.states() if flaw in self.flaws_present(s)), Fraction(0))

    # -- sampling --------------------------------------------------------

    def sample_initial(self, rng: np.random.Generator) -> State:
        support = [(s, self.initial_measure(s)) for s in self.initial_support()]
        state, _ = choose_weighted(rng, support)
        return state

    def sample_action(self, flaw: int, state: State, rng: np.random.Generator) -> Outcome:
        """Draw σ′ ~ ρ(·|f, σ); returns (σ′, ρ(σ′|f, σ))."""
        return choose_weighted(rng, self.action_support(flaw, state))

    def action_probability(self, flaw: int, state: State, target: State) -> Prob:
        """ρ(σ′|f, σ), zero when σ′ ∉ A(f, σ)."""
        for outcome, prob in self.action_support(flaw, state):
            if outcome == target:
                return prob
        return 0

    # -- backward steps --------------------------------------------------

    def predecessors(self, flaw: int, target: State) -> List[State]:
        """All σ ∈ f with target ∈ A(f, σ), by scanning an enumerable instance."""
        if self._predecessors is None:
            index: Dict[Tuple[int, State], List[State]] = {}
            for s in self.states():
                for f in sorted(self.flaws_present(s)):
                    for t, _ in self.action_support(f, s):
                        index.setdefault((f, t), []).append(s)
            self._predecessors = index
        return self._predecessors.get((flaw, target), [])

    def backward_step(self, flaw: int, target: State) -> Optional[State]:
        """The unique σ with σ →f target, or None when no such σ exists.

        Raises:
            CapabilityError: When several predecessors exist (non-atomic)
        """
        found = self.predecessors(flaw, target)
        if len(found) > 1:
            raise CapabilityError(f"Flaw {flaw} has {len(found)} predecessors of {target!r}; not atomic")
        return found[0] if found else None

    # -- presentation ----------------------------------------------------

    def describe_state(self, state: State) -> Any:
        """JSON-friendly rendering of a state."""
        if isinstance(state, tuple):
            return list(state)
        return state

    def flaw_label(self, flaw: int) -> str:
        return self.flaw_names[flaw]

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        """Check the instance invariants on an enumerable instance.

        Raises:
            ContractViolationError: On the first broken invariant
        """
        tol = ToleranceConfig.DISTRIBUTION_SUM
        states = self.states()
        known = set(states)
        total = 0
        init_total = 0
        for s in states:
            w = self.measure(s)
            if not w > 0:
                raise ContractViolationError(f"ω({s!r}) must be positive")
            total += w
            init_total += self.initial_measure(s)
            for f in self.flaws_present(s):
                self.check_flaw(f)
                support = self.action_support(f, s)
                if not support:
                    raise ContractViolationError(f"A({f}, {s!r}) is empty")
                mass = 0
                for t, p in support:
                    if t not in known:
                        raise ContractViolationError(f"A({f}, {s!r}) leaves Ω: {t!r}")
                    if not p > 0:
                        raise ContractViolationError(f"ρ({t!r}|{f}, {s!r}) must be positive")
                    mass += p
                if not close(mass, 1, tol):
                    raise ContractViolationError(f"ρ(·|{f}, {s!r}) sums to {mass}")
        if not close(total, 1, tol):
            raise ContractViolationError(f"ω sums to {total}")
        if not close(init_total, 1, tol):
            raise ContractViolationError(f"ω^init sums to {init_total}")
        for f in range(self.flaw_count):
            if not any(f in self.flaws_present(s) for s in states):
                raise ContractViolationError(f"Flaw {f} ({self.flaw_label(f)}) is empty")
        logger.debug(f"Instance '{self.name}' validated over {len(states)} states")

    def require_dependency(self) -> DependencyGraph:
        if self.dependency is None:
            raise InputError(f"Instance '{self.name}' has no causality graph attached")
        return self.dependency

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name={self.name!r}, flaws={self.flaw_count})"
