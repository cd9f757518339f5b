"""
lllcore.stable.bad
------------------
Exhaustive enumeration of bad walks and the checks built on them.

Bad(t) holds every walk of the sequential algorithm that makes t steps,
obtained by unrolling all initial states and all action outcomes under a
deterministic strategy; Σ p(τ) over Bad(t) is the probability that a run
takes at least t steps. BadPar(s) holds the round-based walks cut right
after the first flaw addressed in round s.
"""

from collections import defaultdict
from fractions import Fraction
import logging
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import CausalityGraphError, InputError, ResourceLimitError, StrategyContractError
from lllcore.core.graph import DependencyGraph
from lllcore.core.instance import ModelInstance
from lllcore.core.numeric import Prob, leq
from lllcore.core.walk import Walk, Word, lambda_of_word
from lllcore.engine.strategies import Strategy
from lllcore.models import VerificationReport
from lllcore.stable.dag import longest_chain
from lllcore.stable.swapping import forward_canonicalize
from lllcore.stable.words import is_pi_stable
from lllcore.verify.checks import _Witnesses

logger = logging.getLogger(__name__)

MODE_FULL = "full"
MODE_PARALLEL = "parallel"


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def spend(self, what: str) -> None:
        self.used += 1
        if self.used > self.cap:
            raise ResourceLimitError(f"Enumerating {what} exceeds cap {self.cap}")


def _unroll_sequential(inst: ModelInstance, strategy: Strategy, t: int, budget: _Budget) -> List[Walk]:
    found: List[Walk] = []

    def visit(walk: Walk, memory: Any) -> None:
        if walk.length == t:
            found.append(walk)
            budget.spend("Bad(t)")
            return
        present = inst.flaws_present(walk.final)
        if not present:
            return
        flaw, memory = strategy.select(memory, inst, walk, present)
        if flaw not in present:
            raise StrategyContractError(f"Strategy {strategy.describe()} chose absent flaw {flaw}")
        for target, prob in inst.action_support(flaw, walk.final):
            budget.spend("Bad(t) branches")
            visit(walk.extend(flaw, target, prob), memory)

    for start in inst.initial_support():
        visit(Walk(start, (), inst.initial_measure(start)), strategy.start())
    return found


def _unroll_parallel(inst: ModelInstance, dep: DependencyGraph, picker: Strategy, s: int,
                     budget: _Budget) -> List[Walk]:
    found: List[Walk] = []

    def next_round(walk: Walk, memory: Any, index: int) -> None:
        present = inst.flaws_present(walk.final)
        if not present:
            return
        in_round(walk, picker.on_round_start(memory), index, dep.to_mask(present), 0)

    def in_round(walk: Walk, memory: Any, index: int, round_mask: int, blocked: int) -> None:
        available = frozenset(f for f in inst.flaws_present(walk.final) if not blocked >> f & 1)
        if not available:
            next_round(walk, memory, index + 1)
            return
        flaw, memory = picker.select(memory, inst, walk, available)
        if flaw not in available:
            raise StrategyContractError(f"Picker chose flaw {flaw} outside F_σ − Γ⁺(I)")
        if not round_mask >> flaw & 1:
            raise CausalityGraphError(f"Flaw {flaw} addressed in round {index} was not present at the round start")
        for target, prob in inst.action_support(flaw, walk.final):
            budget.spend("BadPar(s) branches")
            extended = walk.extend(flaw, target, prob)
            if index == s and blocked == 0:
                found.append(extended)
                continue
            in_round(extended, memory, index, round_mask, blocked | dep.plus_mask_of(flaw))

    for start in inst.initial_support():
        next_round(Walk(start, (), inst.initial_measure(start)), picker.start(), 1)
    return found


def enumerate_bad(inst: ModelInstance, strategy: Strategy, t: int, mode: str = MODE_FULL,
                  cap: int = EnumerationConfig.MAX_WALKS) -> List[Walk]:
    """Unroll every random branch of a deterministic strategy.

    Args:
        inst: Enumerable instance
        strategy: Deterministic strategy (the round picker in parallel mode)
        t: Step count (full mode) or round index s ≥ 1 (parallel mode)
        mode: ``full`` for Bad(t), ``parallel`` for BadPar(s)
        cap: Largest number of walks and branches explored

    Raises:
        InputError: On an unknown mode or a negative length
        ResourceLimitError: When the unrolling exceeds ``cap``
    """
    if t < 0 or (mode == MODE_PARALLEL and t < 1):
        raise InputError(f"Invalid length {t} for mode {mode}")
    budget = _Budget(cap)
    if mode == MODE_FULL:
        walks = _unroll_sequential(inst, strategy, t, budget)
    elif mode == MODE_PARALLEL:
        walks = _unroll_parallel(inst, inst.require_dependency(), strategy, t, budget)
    else:
        raise InputError(f"Unknown enumeration mode {mode!r}; use {MODE_FULL} or {MODE_PARALLEL}")
    logger.debug(f"enumerate_bad(mode={mode}, t={t}, strategy={strategy.describe()}): {len(walks)} walks")
    return walks


def bad_mass(walks: Sequence[Walk]) -> Prob:
    """Σ p(τ)."""
    return sum((w.prob for w in walks), Fraction(0))


def check_bad_chain_property(dep: DependencyGraph, walks: Sequence[Walk], s: int) -> VerificationReport:
    """Every walk of BadPar(s) has a longest ≅-chain of exactly s flaws."""
    witnesses = _Witnesses()
    for walk in walks:
        chain = longest_chain(dep, walk)
        if chain != s:
            witnesses.add({"word": list(walk.word), "longest_chain": chain, "expected": s})
    return witnesses.report("bad_chain", len(walks))


def check_forward_bijection(inst: ModelInstance, dep: DependencyGraph, order: Optional[Sequence[int]],
                            walks: Sequence[Walk]) -> VerificationReport:
    """Canonicalize every walk; images must be π-stable and pairwise distinct."""
    witnesses = _Witnesses()
    images: Dict[Tuple, Walk] = {}
    for walk in walks:
        image = forward_canonicalize(dep, order, walk, inst).walk
        if not is_pi_stable(dep, order, image.word):
            witnesses.add({"word": list(walk.word), "image": list(image.word), "reason": "not pi-stable"})
        key = (image.start, image.steps)
        if key in images:
            witnesses.add({"word": list(walk.word), "other": list(images[key].word), "reason": "collision"})
        else:
            images[key] = walk
    return witnesses.report("forward_bijection", len(walks))


def word_walk_mass(inst: ModelInstance, word: Sequence[int]) -> Dict[Hashable, Prob]:
    """Σ p(τ) over walks τ ≐ W, split by final state."""
    current: Dict[Hashable, Prob] = {}
    for s in inst.initial_support():
        current[s] = inst.initial_measure(s)
    for f in word:
        inst.check_flaw(f)
        following: Dict[Hashable, Prob] = defaultdict(Fraction)
        for s, mass in current.items():
            if f not in inst.flaws_present(s):
                continue
            for target, prob in inst.action_support(f, s):
                following[target] = following[target] + mass * prob
        current = dict(following)
    return current


def check_word_mass_bound(inst: ModelInstance, lam: Sequence[Prob], word: Sequence[int]) -> VerificationReport:
    """Σ_{τ ≐ W ending at σ} p(τ) ≤ γ^init · λ_W · ω(σ) for every σ."""
    gamma_init = inst.init_ratio_max()
    lam_word = lambda_of_word(lam, word)
    witnesses = _Witnesses()
    masses = word_walk_mass(inst, word)
    for sigma, mass in masses.items():
        bound = gamma_init * lam_word * inst.measure(sigma)
        if not leq(mass, bound):
            witnesses.add({"state": inst.describe_state(sigma), "mass": float(mass), "bound": float(bound)})
    return witnesses.report("word_mass", len(masses))


def check_valid_set(walks: Sequence[Walk]) -> None:
    """Walks must follow one deterministic strategy and be prefix-free.

    Raises:
        InputError: With the offending pair, when two walks share a history
            but address different flaws next, or one is a prefix of another
    """
    next_flaw: Dict[Tuple, Tuple[int, Word]] = {}
    for walk in walks:
        for i, step in enumerate(walk.steps):
            key = (walk.start, walk.steps[:i])
            seen = next_flaw.setdefault(key, (step.flaw, walk.word))
            if seen[0] != step.flaw:
                raise InputError(
                    f"Walks {list(seen[1])} and {list(walk.word)} leave a shared history with different flaws"
                )
    complete = set()
    for walk in walks:
        key = (walk.start, walk.steps)
        if key in next_flaw:
            raise InputError(f"Walk {list(walk.word)} is a proper prefix of another walk in the set")
        if key in complete:
            raise InputError(f"Walk {list(walk.word)} occurs twice in the set")
        complete.add(key)
