"""
Tests for the sequential and round-based walks and the selection strategies.
"""

from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest

from conftest import explicit
from lllcore.conditions.lll import LLLParams, bound_T, tightest_theta
from lllcore.config.constants import EngineConfig
from lllcore.core.errors import CausalityGraphError, InputError, StrategyContractError
from lllcore.core.graph import DependencyGraph
from lllcore.core.rng import keyed_rng, make_rng, spawn_seeds
from lllcore.core.walk import walk_probability
from lllcore.engine.runner import run_parallel, run_sequential, run_trials
from lllcore.engine.strategies import (
    FirstPresentStrategy, PiStableStrategy, ScriptedStrategy, StrategyFactory, UniformRandomStrategy,
)
from lllcore.oracles.variable import VariableFlaw, VariableModel
from lllcore.rainbow.experiment import tail_profile
from lllcore.stable.words import is_pi_stable
from lllcore.verify.checks import minimal_lambda


def two_bits(edges, start=3):
    """States 2·x0 + x1; flaw i is x_i = 1 and its action clears x_i."""
    return explicit({
        "name": "two-bits",
        "states": 4,
        "flaws": ["x0", "x1"],
        "present": [[], [1], [0], [0, 1]],
        "initial": {"point": start},
        "actions": [
            {"flaw": 0, "from": 2, "to": [[0, 1]]},
            {"flaw": 0, "from": 3, "to": [[1, 1]]},
            {"flaw": 1, "from": 1, "to": [[0, 1]]},
            {"flaw": 1, "from": 3, "to": [[2, 1]]},
        ],
        "dependency": {"edges": edges},
    })


@pytest.fixture
def stuck():
    """A single flaw covering the whole space."""
    return VariableModel([[0, 1]], [VariableFlaw((0,), frozenset({(0,), (1,)}), "always")])


class TestSequential:
    def test_flawless_start(self):
        inst = explicit({
            "states": 4, "flaws": ["a"], "present": [[0], [], [], []], "initial": {"point": 1},
            "actions": [{"flaw": 0, "from": 0, "to": [[1, 1]]}],
        })
        outcome = run_sequential(inst, FirstPresentStrategy(), seed=0)
        assert outcome.terminated
        assert outcome.steps == 0
        assert outcome.final_state == 1

    def test_seed_reproduces_walk(self, k4):
        first = run_sequential(k4, FirstPresentStrategy(), seed=7)
        second = run_sequential(k4, FirstPresentStrategy(), seed=7)
        assert first.walk == second.walk

    def test_single_edge_flaw_terminates(self, k4_single):
        for seed in range(10):
            outcome = run_sequential(k4_single, FirstPresentStrategy(), seed)
            assert outcome.terminated
            assert not outcome.final_state.contains((0, 1))
            assert outcome.walk.prob == walk_probability(k4_single, outcome.walk)

    def test_step_cap(self, stuck):
        outcome = run_sequential(stuck, FirstPresentStrategy(), seed=1, max_steps=5)
        assert not outcome.terminated
        assert outcome.steps == 5

    def test_strategy_contract(self):
        with pytest.raises(StrategyContractError):
            run_sequential(two_bits([], start=1), ScriptedStrategy([0]), seed=0)

    def test_uniform_random_solves_cnf(self, data_dir):
        from lllcore.oracles.factory import InstanceFactory
        from lllcore.config.loader import ConfigLoader
        inst = InstanceFactory.create(ConfigLoader(load_env_file=False).load_file(data_dir / "sat_demo.json"))
        for seed in range(5):
            outcome = run_sequential(inst, UniformRandomStrategy(seed), seed)
            assert outcome.terminated
            assert inst.flaws_present(outcome.final_state) == frozenset()


class TestParallel:
    def test_independent_flaws_share_a_round(self):
        outcome = run_parallel(two_bits([]), FirstPresentStrategy(), seed=0)
        assert outcome.terminated
        assert outcome.round_count == 1
        assert outcome.rounds[0].flaws == (0, 1)

    def test_dependent_flaws_take_two_rounds(self):
        outcome = run_parallel(two_bits([[0, 1]]), FirstPresentStrategy(), seed=0)
        assert outcome.round_count == 2
        assert [r.flaws for r in outcome.rounds] == [(0,), (1,)]

    def test_shrinking_violation(self):
        inst = explicit({
            "states": 3, "flaws": ["f", "g"], "present": [[], [0], [1]], "initial": {"point": 1},
            "actions": [{"flaw": 0, "from": 1, "to": [[2, 1]]}, {"flaw": 1, "from": 2, "to": [[0, 1]]}],
            "dependency": {},
        })
        with pytest.raises(CausalityGraphError):
            run_parallel(inst, FirstPresentStrategy(), seed=0)

    def test_round_cap(self, stuck):
        outcome = run_parallel(stuck, FirstPresentStrategy(), seed=0, max_rounds=3)
        assert not outcome.terminated
        assert outcome.round_count == 3

    def test_needs_causality_graph(self):
        inst = explicit({
            "states": 2, "flaws": ["f"], "present": [[0], []],
            "actions": [{"flaw": 0, "from": 0, "to": [[1, 1]]}],
        })
        with pytest.raises(InputError):
            run_parallel(inst, FirstPresentStrategy(), seed=0)

    def test_pi_stable_rounds_give_pi_stable_words(self, two_var):
        for seed in range(20):
            outcome = run_parallel(two_var, PiStableStrategy(), seed)
            assert outcome.terminated
            assert is_pi_stable(two_var.dependency, None, outcome.walk.word)


class TestStrategies:
    @pytest.fixture
    def namespace(self):
        dep = DependencyGraph(6, edges=[(2, 5)])
        return SimpleNamespace(require_dependency=lambda: dep, flaw_count=6)

    def test_pi_stable_picks_lowest_then_resets(self, namespace):
        strategy = PiStableStrategy()
        flaw, memory = strategy.select(strategy.start(), namespace, None, frozenset({2, 5}))
        assert flaw == 2
        flaw, memory = strategy.select(memory, namespace, None, frozenset({5}))
        assert flaw == 5
        assert memory == 1 << 5

    def test_pi_stable_skips_blocked_flaws(self, namespace):
        strategy = PiStableStrategy()
        _, memory = strategy.select(strategy.start(), namespace, None, frozenset({2}))
        flaw, _ = strategy.select(memory, namespace, None, frozenset({0, 5}))
        assert flaw == 0

    def test_pi_stable_order(self, namespace):
        strategy = PiStableStrategy([5, 4, 3, 2, 1, 0])
        flaw, _ = strategy.select(strategy.start(), namespace, None, frozenset({2, 5}))
        assert flaw == 5

    def test_uniform_random_is_keyed_by_history_length(self):
        strategy = UniformRandomStrategy(seed=3)
        history = SimpleNamespace(length=4)
        picks = {strategy.select(None, None, history, frozenset(range(10)))[0] for _ in range(5)}
        assert len(picks) == 1

    @pytest.mark.parametrize("seed", range(50))
    def test_strategy_stream_is_apart_from_state_stream(self, seed):
        state_draws = make_rng(seed).random(4)
        assert not np.array_equal(keyed_rng(seed, EngineConfig.STRATEGY_STREAM, 0).random(4), state_draws)
        assert not np.array_equal(keyed_rng(seed, 0).random(4), state_draws)

    def test_factory(self):
        assert StrategyFactory.create("pi_stable:2,0,1").order == [2, 0, 1]
        assert StrategyFactory.create("pi_stable").order is None
        assert StrategyFactory.create("uniform_random:9").seed == 9
        assert StrategyFactory.create("uniform_random", seed=4).seed == 4
        assert StrategyFactory.create("scripted:1,0").script == [1, 0]
        assert isinstance(StrategyFactory.create("first_present"), FirstPresentStrategy)
        assert StrategyFactory.create("pi_stable:2,0,1").describe() == "pi_stable:2,0,1"

    @pytest.mark.parametrize("spec", ["bogus", "scripted", "first_present:1", "pi_stable:a"])
    def test_factory_rejects(self, spec):
        with pytest.raises(InputError):
            StrategyFactory.create(spec)


class TestTrials:
    def test_outcomes_follow_seed_order(self, toy_loop):
        seeds = [11, 3, 7]
        outcomes = run_trials(toy_loop, "first_present", seeds)
        assert [o.seed for o in outcomes] == seeds
        assert all(o.terminated for o in outcomes)

    def test_worker_processes_match_serial(self, toy_loop):
        seeds = list(range(6))
        serial = run_trials(toy_loop, "pi_stable", seeds)
        pooled = run_trials(toy_loop, "pi_stable", seeds, jobs=2)
        assert [o.walk for o in serial] == [o.walk for o in pooled]

    def test_parallel_trials_report_rounds(self, toy_loop):
        outcomes = run_trials(toy_loop, "pi_stable", [0, 1, 2], parallel=True)
        assert all(o.round_count is not None for o in outcomes)
        assert all(o.round_count == o.steps for o in outcomes)


class TestTailBound:
    """Pr[steps ≥ T + r] stays under θ^r on certified instances."""

    TRIALS = 10_000

    @pytest.mark.slow
    @pytest.mark.parametrize("instance", ["toy_loop", "k6_pairs"])
    @pytest.mark.parametrize("strategy, variant", [
        ("pi_stable", "seq_a"),
        ("uniform_random", "seq_b"),
        ("first_present", "seq_c"),
    ])
    def test_sequential_tail(self, request, instance, strategy, variant):
        inst = request.getfixturevalue(instance)
        dep = inst.require_dependency()
        params = LLLParams(tuple(minimal_lambda(inst)), mu=(Fraction(1, 2),) * inst.flaw_count)
        theta = tightest_theta(dep, params)
        assert theta < 1

        bound = bound_T(inst, dep, params, variant)
        outcomes = run_trials(inst, strategy, spawn_seeds(2024, self.TRIALS))
        assert all(o.terminated for o in outcomes)

        tail = tail_profile([o.steps for o in outcomes], bound.T, float(theta))
        assert [p.r for p in tail] == list(range(11))
        assert all(p.within for p in tail), [p for p in tail if not p.within]
