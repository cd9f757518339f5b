"""
lllcore.engine.runner
---------------------
The sequential random walk and its round-based parallel variant.

Sequential: sample σ from ω^init; while F_σ ≠ ∅ pick f with the strategy and
move to σ′ ~ ρ(·|f, σ). Parallel: each round starts with I = ∅ and keeps
addressing flaws of F_σ − Γ⁺(I) until that set is empty; every flaw picked in
a round must already be present at the round's start (shrinking property).

Every finished walk is replayed against the instance before it is returned.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging
from typing import Hashable, List, Optional, Sequence, Tuple

from lllcore.config.constants import EngineConfig
from lllcore.core.errors import CausalityGraphError, StrategyContractError
from lllcore.core.instance import ModelInstance
from lllcore.core.rng import make_rng
from lllcore.core.walk import Walk, WalkBuilder, validate_walk
from lllcore.engine.strategies import Strategy, make_strategy
from lllcore.logger import LoggerAdapter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoundRecord:
    """One round of the parallel engine."""
    index: int
    flaws: Tuple[int, ...]
    start_state: Hashable

    @property
    def flaw_set(self) -> frozenset:
        return frozenset(self.flaws)


@dataclass(frozen=True)
class RunOutcome:
    """Result of one run. ``terminated`` is True iff the final state is flawless."""
    walk: Walk
    terminated: bool
    steps: int
    seed: int
    strategy: str
    rounds: Optional[Tuple[RoundRecord, ...]] = None

    @property
    def final_state(self) -> Hashable:
        return self.walk.final

    @property
    def round_count(self) -> Optional[int]:
        return None if self.rounds is None else len(self.rounds)


def run_sequential(inst: ModelInstance, strategy: Strategy, seed: int,
                   max_steps: int = EngineConfig.MAX_STEPS) -> RunOutcome:
    """Run the sequential walk until a flawless state or ``max_steps`` steps.

    Raises:
        StrategyContractError: If the strategy picks a flaw not in F_σ
    """
    log = LoggerAdapter(logger, {"seed": seed, "strategy": strategy.describe()})
    rng = make_rng(seed)
    start = inst.sample_initial(rng)
    builder = WalkBuilder(start, inst.initial_measure(start))
    memory = strategy.start()
    sigma = start
    present = inst.flaws_present(sigma)

    while present and builder.length < max_steps:
        flaw, memory = strategy.select(memory, inst, builder, present)
        if flaw not in present:
            raise StrategyContractError(
                f"Strategy {strategy.describe()} chose flaw {flaw} not in F_σ={sorted(present)} at step {builder.length + 1}"
            )
        sigma, prob = inst.sample_action(flaw, sigma, rng)
        builder.append(flaw, sigma, prob)
        present = inst.flaws_present(sigma)

    walk = builder.to_walk()
    validate_walk(inst, walk)
    terminated = not present
    if not terminated:
        log.warning(f"Stopped after max_steps={max_steps} with {len(present)} flaws present")
    else:
        log.debug(f"Terminated after {walk.length} steps")
    return RunOutcome(walk, terminated, walk.length, seed, strategy.describe())


def run_parallel(inst: ModelInstance, picker: Strategy, seed: int,
                 max_rounds: int = EngineConfig.MAX_ROUNDS) -> RunOutcome:
    """Run the round-based walk.

    Raises:
        InputError: If the instance has no causality graph
        CausalityGraphError: If a picked flaw was absent at the round start
        StrategyContractError: If the picker leaves F_σ − Γ⁺(I)
    """
    log = LoggerAdapter(logger, {"seed": seed, "strategy": picker.describe(), "mode": "parallel"})
    dep = inst.require_dependency()
    rng = make_rng(seed)
    start = inst.sample_initial(rng)
    builder = WalkBuilder(start, inst.initial_measure(start))
    memory = picker.start()
    sigma = start
    rounds: List[RoundRecord] = []

    while len(rounds) < max_rounds:
        round_present = inst.flaws_present(sigma)
        if not round_present:
            break
        round_mask = dep.to_mask(round_present)
        boundary = sigma
        memory = picker.on_round_start(memory)
        blocked = 0
        addressed: List[int] = []
        present = round_present
        while True:
            available = frozenset(f for f in present if not blocked >> f & 1)
            if not available:
                break
            flaw, memory = picker.select(memory, inst, builder, available)
            if flaw not in available:
                raise StrategyContractError(
                    f"Picker chose flaw {flaw} outside F_σ − Γ⁺(I)={sorted(available)} in round {len(rounds) + 1}"
                )
            if not round_mask >> flaw & 1:
                raise CausalityGraphError(
                    f"Flaw {flaw} addressed in round {len(rounds) + 1} was not present at the round start"
                )
            sigma, prob = inst.sample_action(flaw, sigma, rng)
            builder.append(flaw, sigma, prob)
            blocked |= dep.plus_mask_of(flaw)
            addressed.append(flaw)
            present = inst.flaws_present(sigma)
        rounds.append(RoundRecord(len(rounds) + 1, tuple(addressed), boundary))
        log.debug(f"Round {len(rounds)} addressed {addressed}")

    walk = builder.to_walk()
    validate_walk(inst, walk)
    terminated = not inst.flaws_present(sigma)
    if not terminated:
        log.warning(f"Stopped after max_rounds={max_rounds}")
    return RunOutcome(walk, terminated, walk.length, seed, picker.describe(), tuple(rounds))


def _run_trial(args) -> RunOutcome:
    inst, strategy_spec, seed, parallel, max_steps, max_rounds = args
    strategy = make_strategy(strategy_spec, seed=seed)
    if parallel:
        return run_parallel(inst, strategy, seed, max_rounds)
    return run_sequential(inst, strategy, seed, max_steps)


def run_trials(inst: ModelInstance, strategy_spec: str, seeds: Sequence[int], parallel: bool = False,
               max_steps: int = EngineConfig.MAX_STEPS, max_rounds: int = EngineConfig.MAX_ROUNDS,
               jobs: int = 1) -> List[RunOutcome]:
    """Run one trial per seed and return outcomes in seed order.

    uniform_random without an explicit seed takes the trial seed, so a
    trial is reproducible from its seed alone. With ``jobs > 1`` trials run in
    worker processes; results are merged in trial order.
    """
    work = [(inst, strategy_spec, seed, parallel, max_steps, max_rounds) for seed in seeds]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_trial, work))
    else:
        outcomes = [_run_trial(item) for item in work]
    logger.info(f"Finished {len(outcomes)} trials of {strategy_spec} "
                f"({sum(o.terminated for o in outcomes)} terminated)")
    return outcomes
