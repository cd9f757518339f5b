"""
lllcore.rainbow.experiment
--------------------------
Monte Carlo runs of the walk on rainbow matching instances.

Each trial samples a uniform perfect matching (ω^init = ω), runs the
sequential or round-based walk and records its length. The summary
compares the empirical tail r ↦ Pr[steps ≥ T + r] with the certified θ^r,
allowing SIGMA_MULTIPLIER binomial standard errors.
"""

import csv
import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from lllcore.config.constants import EngineConfig, ExperimentConfig
from lllcore.core.errors import NoCertificateError
from lllcore.core.rng import spawn_seeds
from lllcore.engine.runner import RunOutcome, run_trials
from lllcore.logger import LoggerAdapter
from lllcore.models import ExperimentSummary, RainbowParams, TailPoint, TrialRecord, model_to_dict
from lllcore.rainbow.coloring import ColoredGraph, build_rainbow_instance
from lllcore.rainbow.params import compute_params

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["trial", "seed", "strategy", "steps", "rounds", "terminated", "rainbow"]


def tail_profile(lengths: Sequence[int], T: float, theta: float,
                 tail_range: int = ExperimentConfig.TAIL_RANGE,
                 sigma_multiplier: float = ExperimentConfig.SIGMA_MULTIPLIER) -> List[TailPoint]:
    """Empirical Pr[length ≥ ⌈T⌉ + r] against θ^r for r = 0..tail_range."""
    count = len(lengths)
    points = []
    base = max(0, math.ceil(T))
    for r in range(tail_range + 1):
        threshold = base + r
        frequency = sum(1 for x in lengths if x >= threshold) / count if count else 0.0
        bound = min(1.0, theta ** r)
        sigma = math.sqrt(bound * (1 - bound) / count) if count else 0.0
        points.append(TailPoint(r=r, threshold=threshold, frequency=frequency, bound=bound, sigma=sigma,
                                within=frequency <= bound + sigma_multiplier * sigma))
    return points


def summarize(outcomes: Sequence[RunOutcome], strategy: str, parallel: bool, T: Optional[float],
              theta: Optional[float], rainbow: Optional[Sequence[Optional[bool]]] = None) -> ExperimentSummary:
    """Aggregate trial outcomes; the tail is only computed when T and θ < 1 are known."""
    lengths = [o.round_count if parallel else o.steps for o in outcomes]
    tail = tail_profile(lengths, T, theta) if T is not None and theta is not None and theta < 1 else []
    flags = [flag for flag in (rainbow or []) if flag is not None]
    return ExperimentSummary(
        trials=len(outcomes), strategy=strategy, parallel=parallel,
        terminated=sum(o.terminated for o in outcomes),
        mean_steps=sum(o.steps for o in outcomes) / len(outcomes) if outcomes else 0.0,
        max_steps=max((o.steps for o in outcomes), default=0),
        T=T, theta=theta, tail=tail, tail_within_bound=all(p.within for p in tail),
        all_rainbow=all(flags) if rainbow is not None else None,
    )


def run_rainbow_experiment(graph: ColoredGraph, trials: int = ExperimentConfig.DEFAULT_TRIALS, seed: int = 0,
                           strategy: str = "pi_stable", parallel: bool = False,
                           max_steps: int = EngineConfig.MAX_STEPS, max_rounds: int = EngineConfig.MAX_ROUNDS,
                           jobs: int = 1, force: bool = False
                           ) -> Tuple[RainbowParams, List[TrialRecord], ExperimentSummary]:
    """Run ``trials`` seeded trials on the rainbow instance of ``graph``.

    Trial seeds are spawned from ``seed``; every terminating trial's final
    matching is checked for the rainbow property.

    Raises:
        NoCertificateError: If θ ≥ 1 and there are flaws, unless ``force``
    """
    inst = build_rainbow_instance(graph)
    params = compute_params(graph, inst.flaw_count)
    if not params.certificate and inst.flaw_count and not force:
        raise NoCertificateError(
            f"theta = {params.theta:.6g} >= 1 for n={graph.n}, q={graph.q}; use force to run anyway"
        )
    log = LoggerAdapter(logger, {"seed": seed, "strategy": strategy})
    seeds = spawn_seeds(seed, trials)
    outcomes = run_trials(inst, strategy, seeds, parallel=parallel, max_steps=max_steps,
                          max_rounds=max_rounds, jobs=jobs)

    records = []
    rainbow = []
    for index, outcome in enumerate(outcomes):
        flag = graph.is_rainbow(outcome.final_state) if outcome.terminated else None
        rainbow.append(flag)
        records.append(TrialRecord(trial=index, seed=outcome.seed, strategy=outcome.strategy,
                                   steps=outcome.steps, rounds=outcome.round_count,
                                   terminated=outcome.terminated, rainbow=flag))

    T = params.T_par if parallel else params.T_seq
    theta = params.theta if params.certificate else None
    summary = summarize(outcomes, strategy, parallel, T, theta, rainbow)
    log.info(f"Rainbow experiment n={graph.n} q={graph.q}: {summary.terminated}/{trials} terminated, "
             f"mean {summary.mean_steps:.3f} steps, tail within bound: {summary.tail_within_bound}")
    if summary.all_rainbow is False:
        log.error("A terminating trial ended on a matching that is not rainbow")
    return params, records, summary


def write_trials_csv(records: Sequence[TrialRecord], path: Union[str, Path]) -> None:
    """Write one CSV row per trial."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for record in records:
            writer.writerow(model_to_dict(record))
    logger.info(f"Wrote {len(records)} trial rows to {path}")
