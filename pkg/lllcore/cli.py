"""
lllcore.cli
-----------
Command-line interface for lllcore that provides functionality for:
- Verifying structural conditions of an instance (verify)
- Evaluating LLL certificates and runtime bounds (conditions)
- Running seeded Monte Carlo experiments (run)
- Stable-word counting and canonicalization audits (stable)
- Generating rainbow colorings (rainbow-gen)

Every command prints (or writes with --out) one JSON report wrapped with
its provenance. Exit codes: 0 pass, 1 checked and failed, 2 input error,
3 resource or capability limit.
"""

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from lllcore.config.constants import APIConfig
from lllcore.config.loader import ConfigLoader
from lllcore.conditions.lll import (
    MODE_CLUSTER, VARIANTS, LLLParams, bound_T, check_shearer, evaluate_cluster_theta,
    evaluate_symmetric_theta, theta_report, tightest_theta,
)
from lllcore.core.errors import InputError, LLLCoreError, NoCertificateError
from lllcore.core.graph import DependencyGraph, enumerate_independent_subsets
from lllcore.core.instance import ModelInstance
from lllcore.core.numeric import to_json_number
from lllcore.core.rng import rng_identity, spawn_seeds
from lllcore.engine.runner import run_trials
from lllcore.engine.strategies import make_strategy
from lllcore.logger import get_logger
from lllcore.models import Provenance, ReportEnvelope, RunConfig, Settings, TrialRecord, model_to_dict
from lllcore.oracles.factory import InstanceFactory
from lllcore.rainbow import (
    ColoredGraph, compute_params, generate_coloring, load_coloring, run_rainbow_experiment, summarize,
    write_trials_csv,
)
from lllcore.stable import (
    MODE_FULL, MODE_PARALLEL, backward_canonicalize_set, bad_mass, check_bad_chain_property,
    check_forward_bijection, enumerate_bad, verify_stab_counting,
)
from lllcore.verify.checks import (
    check_atomicity, check_causality_graph, check_psi_causality, check_regenerating,
    check_strong_commutativity, check_weak_commutativity, check_weak_commutativity_atomic,
    flaw_charges, infer_minimal_causality, minimal_lambda,
)

# Configure logger
logger = get_logger(__name__)

CHECKS: Dict[str, Callable[[ModelInstance, DependencyGraph], Any]] = {
    "atomic": lambda inst, dep: check_atomicity(inst),
    "causality": check_causality_graph,
    "weak": check_weak_commutativity,
    "strong": check_strong_commutativity,
    "weak_atomic": check_weak_commutativity_atomic,
    "regenerating": lambda inst, dep: check_regenerating(inst),
    "psi": check_psi_causality,
}
DEFAULT_CHECKS = "atomic,causality,weak,strong,regenerating"


class CommandResult:
    """Verdict, JSON payload and consumed seeds of one command."""

    def __init__(self, passed: bool, result: Dict[str, Any], seeds: Optional[List[int]] = None):
        self.passed = passed
        self.result = result
        self.seeds = seeds


def _int_list(raw: Optional[str]) -> Optional[List[int]]:
    if raw is None:
        return None
    try:
        return [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"Expected a comma-separated list of integers, got {raw!r}")


def _numbers(values: Sequence[Any]) -> List[Any]:
    return [to_json_number(v) for v in values]


def _load_instance(args: argparse.Namespace, loader: ConfigLoader, settings: Settings) -> ModelInstance:
    if not args.instance:
        raise InputError(f"{args.command} needs --instance")
    return InstanceFactory.create(loader.load_file(args.instance), settings.max_states)


def _dependency(inst: ModelInstance) -> DependencyGraph:
    if inst.dependency is None:
        logger.info(f"Instance '{inst.name}' has no causality graph; inferring the minimal one")
        inst.dependency = infer_minimal_causality(inst)
    return inst.dependency


def _rainbow_graph(args: argparse.Namespace) -> Optional[ColoredGraph]:
    if args.rainbow:
        return load_coloring(args.rainbow)
    if args.n is not None and args.q is not None:
        return generate_coloring(args.n, args.q, args.seed)
    return None


def _load_params(args: argparse.Namespace, loader: ConfigLoader) -> Dict[str, Any]:
    if not args.params:
        raise InputError(f"{args.command} needs --params")
    return loader.load_file(args.params)


def _params(data: Dict[str, Any], inst: Optional[ModelInstance]) -> LLLParams:
    lam = None
    if data.get("lambda", "minimal") == "minimal":
        if inst is None:
            raise InputError("lambda: minimal needs --instance")
        lam = minimal_lambda(inst)
    return LLLParams.from_dict(data, lam)


def cmd_verify(args: argparse.Namespace, loader: ConfigLoader, settings: Settings) -> CommandResult:
    """Run the requested structural checks on an enumerable instance."""
    inst = _load_instance(args, loader, settings)
    inst.validate()
    dep = _dependency(inst)
    reports = []
    for name in [c.strip() for c in (args.checks or DEFAULT_CHECKS).split(",") if c.strip()]:
        if name not in CHECKS:
            raise InputError(f"Unknown check {name!r}; available: {', '.join(sorted(CHECKS))}")
        reports.append(CHECKS[name](inst, dep))
    charges = {key: _numbers(values) for key, values in flaw_charges(inst).items()}
    return CommandResult(
        all(r.passed for r in reports),
        {"instance": inst.name, "dependency": dep.to_dict(), "charges": charges,
         "reports": [model_to_dict(r) for r in reports]},
    )


def cmd_conditions(args: argparse.Namespace, loader: ConfigLoader, settings: Settings) -> CommandResult:
    """θ vectors, the Shearer table verdict and runtime bounds."""
    graph = _rainbow_graph(args)
    if graph is not None:
        params = compute_params(graph)
        return CommandResult(params.certificate, {"rainbow": model_to_dict(params)})

    inst = _load_instance(args, loader, settings) if args.instance else None
    data = _load_params(args, loader)
    if inst is not None:
        dep = _dependency(inst)
    elif "dependency" in data:
        dep = DependencyGraph.from_dict(data["dependency"])
    else:
        raise InputError("conditions needs --instance or a 'dependency' entry in the parameter file")
    params = _params(data, inst)

    result: Dict[str, Any] = {"mode": params.mode, "lambda": _numbers(params.lambda_)}
    if params.mode == MODE_CLUSTER:
        cluster, _ = evaluate_cluster_theta(dep, params.lambda_, params.mu, settings.max_subsets)
        symmetric, _ = evaluate_symmetric_theta(dep, params.lambda_, params.mu)
        result["cluster"] = model_to_dict(theta_report("cluster", cluster))
        result["symmetric"] = model_to_dict(theta_report("symmetric", symmetric))
    theta = tightest_theta(dep, params)
    result["theta"] = to_json_number(theta)
    passed = theta < 1
    if params.mode != MODE_CLUSTER:
        shearer = check_shearer(dep, params.lambda_, params.p, theta, settings.shearer_max_flaws)
        result["shearer"] = model_to_dict(shearer)
        passed = passed and shearer.passed

    bounds = {}
    if inst is not None and passed:
        for variant in (args.variant.split(",") if args.variant else VARIANTS):
            try:
                bounds[variant] = model_to_dict(bound_T(inst, dep, params, variant.strip(), settings.max_subsets))
            except LLLCoreError as e:
                if isinstance(e, InputError):
                    raise
                bounds[variant] = {"error": str(e)}
    result["bounds"] = bounds
    result["certificate"] = passed
    if not passed:
        logger.warning(f"No certificate: theta = {float(theta):.6g}")
    return CommandResult(passed, result)


def cmd_run(args: argparse.Namespace, loader: ConfigLoader, settings: Settings) -> CommandResult:
    """Seeded trials; CSV rows with --format csv, otherwise rows inside the JSON report."""
    trials = args.trials if args.trials is not None else settings.trials
    jobs = args.jobs if args.jobs is not None else settings.jobs
    max_steps = args.max_steps or settings.max_steps
    max_rounds = args.max_rounds or settings.max_rounds
    strategy = args.strategy or "pi_stable"

    graph = _rainbow_graph(args)
    if graph is not None:
        params, records, summary = run_rainbow_experiment(
            graph, trials, args.seed, strategy, args.parallel, max_steps, max_rounds, jobs, args.force
        )
        result: Dict[str, Any] = {"rainbow": model_to_dict(params)}
        seeds = [r.seed for r in records]
    else:
        inst = _load_instance(args, loader, settings)
        T = theta = None
        result = {}
        if args.params:
            dep = _dependency(inst)
            bound_params = _params(_load_params(args, loader), inst)
            variant = args.variant or ("par" if args.parallel else "seq_c")
            try:
                report = bound_T(inst, dep, bound_params, variant, settings.max_subsets)
                T, theta = report.T, report.theta
                result["bound"] = model_to_dict(report)
            except NoCertificateError:
                if not args.force:
                    raise
                logger.warning("Running without a certificate (--force)")
        seeds = spawn_seeds(args.seed, trials)
        outcomes = run_trials(inst, strategy, seeds, args.parallel, max_steps, max_rounds, jobs)
        records = [TrialRecord(trial=i, seed=o.seed, strategy=o.strategy, steps=o.steps, rounds=o.round_count,
                               terminated=o.terminated) for i, o in enumerate(outcomes)]
        summary = summarize(outcomes, strategy, args.parallel, T, theta)

    result["summary"] = model_to_dict(summary)
    if args.format == "csv":
        if not args.csv:
            raise InputError("--format csv needs --csv PATH for the trial rows")
        write_trials_csv(records, args.csv)
        result["csv"] = args.csv
    else:
        result["trials"] = [model_to_dict(r) for r in records]
    passed = summary.tail_within_bound and summary.all_rainbow is not False
    return CommandResult(passed, result, seeds)


def cmd_stable(args: argparse.Namespace, loader: ConfigLoader, settings: Settings) -> CommandResult:
    """Stable counting (counting), forward bijection (bad-audit) or backward audit (backward-audit)."""
    order = _int_list(args.order)
    if args.task == "counting":
        inst = _load_instance(args, loader, settings) if args.instance else None
        data = _load_params(args, loader)
        if inst is not None:
            dep = _dependency(inst)
        elif "dependency" in data:
            dep = DependencyGraph.from_dict(data["dependency"])
        else:
            raise InputError("counting needs --instance or a 'dependency' entry in the parameter file")
        params = _params(data, inst)
        roots = [frozenset(_int_list(args.root))] if args.root is not None else \
            enumerate_independent_subsets(dep, range(dep.flaw_count), settings.max_subsets)
        max_len = args.max_len if args.max_len is not None else args.t
        reports = [verify_stab_counting(dep, params, root, args.t, max_len, inst, order, settings.max_words)
                   for root in roots]
        return CommandResult(all(r.passed for r in reports), {
            "reports": [dict(model_to_dict(r), passed=r.passed) for r in reports],
        })

    inst = _load_instance(args, loader, settings)
    dep = _dependency(inst)
    strategy = make_strategy(args.strategy or "first_present", seed=args.seed)
    mode = MODE_PARALLEL if args.parallel else MODE_FULL
    walks = enumerate_bad(inst, strategy, args.t, mode, settings.max_walks)
    result: Dict[str, Any] = {"mode": mode, "t": args.t, "walk_count": len(walks),
                              "mass": to_json_number(bad_mass(walks))}

    if args.task == "bad-audit":
        reports = [check_forward_bijection(inst, dep, order, walks)]
        if mode == MODE_PARALLEL:
            reports.append(check_bad_chain_property(dep, walks, args.t))
        result["reports"] = [model_to_dict(r) for r in reports]
        return CommandResult(all(r.passed for r in reports), result)

    if args.task == "backward-audit":
        target = args.target
        if target is not None:
            walks = [w for w in walks if target in w.word]
        outcome = backward_canonicalize_set(inst, dep, order, walks, target)
        result["audit"] = model_to_dict(outcome.audit)
        return CommandResult(outcome.audit.passed, result)

    raise InputError(f"Unknown stable task {args.task!r}")


def cmd_rainbow_gen(args: argparse.Namespace, loader: ConfigLoader, settings: Settings) -> CommandResult:
    """Generate a coloring with classes of size q and report its parameters."""
    if args.n is None or args.q is None:
        raise InputError("rainbow-gen needs --n and --q")
    graph = generate_coloring(args.n, args.q, args.seed)
    result: Dict[str, Any] = {"params": model_to_dict(compute_params(graph))}
    if args.coloring_out:
        if not loader.save_json(args.coloring_out, graph.to_dict()):
            raise InputError(f"Cannot write {args.coloring_out}")
        result["coloring"] = args.coloring_out
    else:
        result["coloring"] = graph.to_dict()
    return CommandResult(True, result, [args.seed])


COMMANDS = {
    "verify": cmd_verify,
    "conditions": cmd_conditions,
    "run": cmd_run,
    "stable": cmd_stable,
    "rainbow-gen": cmd_rainbow_gen,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lllcore", description=APIConfig.DESCRIPTION)
    parser.add_argument("command", choices=sorted(COMMANDS), help="Command to execute")
    parser.add_argument("--instance", help="Instance description (JSON/YAML)")
    parser.add_argument("--params", help="Parameter file with lambda, mu or p, theta, mode")
    parser.add_argument("--rainbow", help="Coloring file for the rainbow application")
    parser.add_argument("--config", help="Settings file (YAML/JSON)")
    parser.add_argument("--seed", type=int, default=0, help="Master seed")
    parser.add_argument("--trials", type=int, help="Number of trials")
    parser.add_argument("--strategy", help="Strategy spec, e.g. pi_stable:2,0,1 or uniform_random")
    parser.add_argument("--order", help="Flaw order π as a comma-separated permutation")
    parser.add_argument("--parallel", action="store_true", help="Use the round-based walk")
    parser.add_argument("--max-steps", type=int, help="Step cap per run")
    parser.add_argument("--max-rounds", type=int, help="Round cap per run")
    parser.add_argument("--jobs", type=int, help="Worker processes for trials")
    parser.add_argument("--out", help="Write the JSON report here instead of stdout")
    parser.add_argument("--format", choices=["json", "csv"], default="json", help="Trial row format for run")
    parser.add_argument("--csv", help="CSV destination for trial rows with --format csv")
    parser.add_argument("--checks", help=f"Comma-separated checks (default {DEFAULT_CHECKS})")
    parser.add_argument("--variant", help="Bound variants: seq_a, seq_b, seq_c, par")
    parser.add_argument("--force", action="store_true", help="Run even without a certificate")
    parser.add_argument("--task", choices=["counting", "bad-audit", "backward-audit"], default="counting",
                        help="Task for the stable command")
    parser.add_argument("--root", help="Root set R as comma-separated flaw ids (all independent sets if omitted)")
    parser.add_argument("--t", type=int, default=1, help="Word length t, walk length, or round index")
    parser.add_argument("--max-len", type=int, help="Longest word enumerated")
    parser.add_argument("--target", type=int, help="Flaw f̂ for backward-audit (∅ mode if omitted)")
    parser.add_argument("--n", type=int, help="Half the vertex count of K_2n")
    parser.add_argument("--q", type=int, help="Color class size")
    parser.add_argument("--coloring-out", help="Where rainbow-gen saves the coloring")
    return parser


def _run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    extra = {key: value for key, value in sorted(vars(args).items())
             if key not in ("command", "instance", "params", "seed", "trials", "strategy", "parallel",
                            "max_steps", "max_rounds", "variant", "out", "config")}
    return RunConfig(
        command=args.command, instance=args.instance, params=args.params, seed=args.seed,
        trials=args.trials if args.trials is not None else settings.trials,
        strategy=args.strategy or "", parallel=args.parallel,
        max_steps=args.max_steps or settings.max_steps, max_rounds=args.max_rounds or settings.max_rounds,
        variant=args.variant, extra=extra,
    )


def _emit(envelope: ReportEnvelope, out: Optional[str]) -> None:
    text = json.dumps(model_to_dict(envelope), indent=2, sort_keys=True, default=str)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info(f"Report written to {out}")
    else:
        print(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the CLI; returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        loader = ConfigLoader()
        settings = loader.load_settings(args.config)
        logger.info(f"lllcore {args.command}")
        if args.seed < 0 or (args.trials is not None and args.trials < 0):
            raise InputError("--seed and --trials must be non-negative")
        outcome = COMMANDS[args.command](args, loader, settings)
        config = _run_config(args, settings)
        envelope = ReportEnvelope(
            provenance=Provenance(tool=APIConfig.TITLE, version=APIConfig.VERSION,
                                  config_hash=config.config_hash(),
                                  seeds=outcome.seeds if outcome.seeds is not None else [args.seed],
                                  rng=rng_identity()),
            command=args.command,
            passed=outcome.passed,
            result=outcome.result,
        )
        _emit(envelope, args.out)
        return 0 if outcome.passed else 1
    except LLLCoreError as e:
        logger.error(f"Error executing {args.command}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"Error executing {args.command}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return InputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
