"""
Tests for bad-walk enumeration and the checks built on it.
"""

from fractions import Fraction

import pytest

from conftest import explicit
from lllcore.core.errors import InputError, ResourceLimitError
from lllcore.core.walk import Step, Walk, walk_probability
from lllcore.engine.runner import run_sequential
from lllcore.engine.strategies import FirstPresentStrategy, PiStableStrategy
from lllcore.oracles.variable import VariableFlaw, VariableModel
from lllcore.stable.bad import (
    MODE_PARALLEL, bad_mass, check_bad_chain_property, check_valid_set, check_word_mass_bound, enumerate_bad,
    word_walk_mass,
)


@pytest.fixture
def one_bit():
    """A single fair bit started at 1; the flaw is x0 = 1."""
    return VariableModel([[0, 1]], [VariableFlaw((0,), frozenset({(1,)}), "x0=1")],
                         initial={(1,): Fraction(1)}, name="one-bit")


class TestSequential:
    @pytest.mark.parametrize("t", [0, 1, 2, 3])
    def test_toy_masses(self, toy_loop, t):
        walks = enumerate_bad(toy_loop, FirstPresentStrategy(), t)
        assert bad_mass(walks) == Fraction(1, 4) ** t
        assert all(w.length == t for w in walks)
        assert all(w.prob == walk_probability(toy_loop, w) for w in walks)

    def test_matches_simulation(self, toy_loop):
        trials = 2000
        long_runs = sum(run_sequential(toy_loop, FirstPresentStrategy(), seed).steps >= 2 for seed in range(trials))
        assert abs(long_runs / trials - 1 / 16) < 0.025

    def test_flawless_start(self):
        inst = explicit({
            "states": 2, "flaws": ["f"], "present": [[0], []], "initial": {"point": 1},
            "actions": [{"flaw": 0, "from": 0, "to": [[1, 1]]}],
        })
        assert enumerate_bad(inst, FirstPresentStrategy(), 1) == []
        assert len(enumerate_bad(inst, FirstPresentStrategy(), 0)) == 1

    @pytest.mark.parametrize("t", [1, 2, 4])
    def test_point_start(self, one_bit, t):
        assert bad_mass(enumerate_bad(one_bit, FirstPresentStrategy(), t)) == Fraction(1, 2) ** (t - 1)

    def test_k4_walks_cover_every_branch(self, k4):
        walks = enumerate_bad(k4, PiStableStrategy(), 2)
        assert len(walks) == 27
        assert bad_mass(walks) == 1
        check_valid_set(walks)

    def test_cap(self, k4):
        with pytest.raises(ResourceLimitError):
            enumerate_bad(k4, PiStableStrategy(), 3, cap=10)

    def test_invalid_arguments(self, toy_loop):
        with pytest.raises(InputError):
            enumerate_bad(toy_loop, FirstPresentStrategy(), 1, mode="other")
        with pytest.raises(InputError):
            enumerate_bad(toy_loop, FirstPresentStrategy(), -1)
        with pytest.raises(InputError):
            enumerate_bad(toy_loop, FirstPresentStrategy(), 0, mode=MODE_PARALLEL)


class TestParallel:
    def test_second_round_mass(self, two_var_point):
        walks = enumerate_bad(two_var_point, PiStableStrategy(), 2, mode=MODE_PARALLEL)
        assert bad_mass(walks) == Fraction(3, 4)
        assert all(w.word[:2] == (0, 1) for w in walks)
        assert all(w.length == 3 for w in walks)

    def test_chain_property(self, two_var_point):
        dep = two_var_point.require_dependency()
        for s in (1, 2, 3):
            walks = enumerate_bad(two_var_point, PiStableStrategy(), s, mode=MODE_PARALLEL)
            assert check_bad_chain_property(dep, walks, s).passed

    def test_chain_property_failure(self, two_var_point):
        dep = two_var_point.require_dependency()
        walks = enumerate_bad(two_var_point, PiStableStrategy(), 2, mode=MODE_PARALLEL)
        report = check_bad_chain_property(dep, walks, 3)
        assert not report.passed
        assert report.violation_count == len(walks)


class TestWordMass:
    def test_word_mass_by_final_state(self, toy_loop):
        masses = word_walk_mass(toy_loop, (0, 0))
        assert masses == {s: Fraction(1, 64) for s in range(4)}

    def test_bound_is_tight_for_minimal_charges(self, toy_loop):
        assert check_word_mass_bound(toy_loop, [Fraction(1, 4)], (0, 0)).passed

    def test_bound_fails_for_small_charges(self, toy_loop):
        report = check_word_mass_bound(toy_loop, [Fraction(1, 8)], (0, 0))
        assert not report.passed
        assert report.violation_count == 4

    def test_point_initial_pays_gamma(self, one_bit):
        # γ^init = 2 and λ = 1/2: one step reaches each state with mass 1/2
        assert check_word_mass_bound(one_bit, [Fraction(1, 2)], (0,)).passed


class TestValidSet:
    def test_branching_histories(self):
        with pytest.raises(InputError):
            check_valid_set([Walk(0, (Step(0, 1),)), Walk(0, (Step(1, 1),))])

    def test_prefix(self):
        with pytest.raises(InputError):
            check_valid_set([Walk(0, ()), Walk(0, (Step(0, 1),))])

    def test_duplicate(self):
        walk = Walk(0, (Step(0, 1),))
        with pytest.raises(InputError):
            check_valid_set([walk, walk])

    def test_distinct_starts_are_independent(self):
        check_valid_set([Walk(0, (Step(0, 1),)), Walk(1, (Step(1, 0),))])
