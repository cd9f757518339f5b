"""Walks, words and their probabilities.

A walk σ₁ →w₁ σ₂ →w₂ … records its start state and one ``Step`` per
transition. ``Walk`` is immutable; the engine grows a ``WalkBuilder`` and
freezes it at the end so long runs stay linear.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Hashable, List, Sequence, Tuple

from lllcore.core.errors import ContractViolationError
from lllcore.core.instance import ModelInstance
from lllcore.core.numeric import Prob

Word = Tuple[int, ...]
NamedFlaw = Tuple[int, int]


@dataclass(frozen=True)
class Step:
    """One transition: the flaw addressed and the state it led to."""
    flaw: int
    state: Hashable


@dataclass(frozen=True)
class Walk:
    """A finite walk with its probability p(τ) = ω^init(σ₁) Π ρ."""
    start: Hashable
    steps: Tuple[Step, ...] = ()
    prob: Prob = Fraction(1)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def word(self) -> Word:
        return tuple(step.flaw for step in self.steps)

    @property
    def states(self) -> Tuple[Hashable, ...]:
        return (self.start,) + tuple(step.state for step in self.steps)

    @property
    def final(self) -> Hashable:
        return self.steps[-1].state if self.steps else self.start

    def state_before(self, index: int) -> Hashable:
        """State from which step ``index`` (0-based) departs."""
        return self.start if index == 0 else self.steps[index - 1].state

    def extend(self, flaw: int, state: Hashable, prob: Prob) -> "Walk":
        return Walk(self.start, self.steps + (Step(flaw, state),), self.prob * prob)

    def prefix(self, length: int) -> "Walk":
        """Prefix with ``length`` steps; its probability is not recomputed."""
        return Walk(self.start, self.steps[:length], self.prob)

    def to_dict(self, inst: ModelInstance) -> dict:
        return {
            "start": inst.describe_state(self.start),
            "steps": [{"flaw": s.flaw, "state": inst.describe_state(s.state)} for s in self.steps],
            "prob": str(self.prob) if isinstance(self.prob, Fraction) else float(self.prob),
        }


@dataclass
class WalkBuilder:
    """Mutable walk prefix used while a run is in progress."""
    start: Hashable
    prob: Prob = Fraction(1)
    steps: List[Step] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def current(self) -> Hashable:
        return self.steps[-1].state if self.steps else self.start

    def append(self, flaw: int, state: Hashable, prob: Prob) -> None:
        self.steps.append(Step(flaw, state))
        self.prob = self.prob * prob

    def to_walk(self) -> Walk:
        return Walk(self.start, tuple(self.steps), self.prob)


def walk_probability(inst: ModelInstance, walk: Walk) -> Prob:
    """p(τ) = ω^init(σ₁) Π ρ(σ_{i+1}|w_i, σ_i).

    Raises:
        ContractViolationError: If some step is not a valid transition;
            ``step_index`` is 1-based
    """
    prob = inst.initial_measure(walk.start)
    state = walk.start
    for index, step in enumerate(walk.steps, start=1):
        inst.check_flaw(step.flaw)
        if step.flaw not in inst.flaws_present(state):
            raise ContractViolationError(
                f"Step {index}: flaw {step.flaw} is not present in {state!r}", step_index=index
            )
        p = inst.action_probability(step.flaw, state, step.state)
        if not p > 0:
            raise ContractViolationError(
                f"Step {index}: {step.state!r} is not in A({step.flaw}, {state!r})", step_index=index
            )
        prob = prob * p
        state = step.state
    return prob


def validate_walk(inst: ModelInstance, walk: Walk) -> None:
    """Replay ``walk`` and check every step; see ``walk_probability``."""
    walk_probability(inst, walk)


def lambda_of_word(lam: Sequence[Prob], word: Sequence[int]) -> Prob:
    """λ_W = Π λ_{w_i}; 1 for the empty word."""
    return math.prod((lam[f] for f in word), start=Fraction(1))


def named_word(word: Sequence[int]) -> Tuple[NamedFlaw, ...]:
    """Attach occurrence counts: a b a -> (a,1)(b,1)(a,2)."""
    seen: Counter = Counter()
    named = []
    for f in word:
        seen[f] += 1
        named.append((f, seen[f]))
    return tuple(named)
