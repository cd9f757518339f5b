"""
Tests for backward canonicalization of walk sets.
"""

import pytest

from lllcore.core.errors import InputError
from lllcore.core.walk import Step, Walk, walk_probability
from lllcore.engine.strategies import FirstPresentStrategy, PiStableStrategy
from lllcore.stable.backward import backward_canonicalize_set
from lllcore.stable.bad import MODE_PARALLEL, enumerate_bad
from lllcore.stable.words import is_pi_stable


def test_single_step_walk_is_unchanged(toy_loop):
    walk = Walk(0, (Step(0, 2),))
    result = backward_canonicalize_set(toy_loop, toy_loop.require_dependency(), None, [walk])
    assert result.walks == (walk,)
    assert result.stabs == (((0, 1),),)
    assert result.audit.passed
    assert result.audit.swap_rounds == 0


@pytest.mark.parametrize("target", [None, 0])
def test_parallel_bad_walks(two_var_point, target):
    walks = enumerate_bad(two_var_point, PiStableStrategy(), 2, mode=MODE_PARALLEL)
    dep = two_var_point.require_dependency()
    result = backward_canonicalize_set(two_var_point, dep, None, walks, target=target)
    audit = result.audit
    assert audit.passed
    assert audit.injective and audit.prefix_property and audit.groups_prefix_free
    assert audit.walk_count == len(walks)
    for original, mapped, stab in zip(walks, result.walks, result.stabs):
        assert mapped.start == original.start and mapped.final == original.final
        assert sorted(mapped.word) == sorted(original.word)
        assert mapped.prob == walk_probability(two_var_point, mapped)
        assert is_pi_stable(dep, None, tuple(f for f, _ in reversed(stab)))


def test_k4_sequential_bad_walks(k4):
    walks = enumerate_bad(k4, PiStableStrategy(), 3)
    result = backward_canonicalize_set(k4, k4.require_dependency(), None, walks)
    assert result.audit.passed
    assert result.audit.walk_count == 81
    assert len({(w.start, w.steps) for w in result.walks}) == 81


def test_toy_walks_with_a_target(toy_loop):
    walks = enumerate_bad(toy_loop, FirstPresentStrategy(), 2)
    result = backward_canonicalize_set(toy_loop, toy_loop.require_dependency(), None, walks, target=0)
    assert result.audit.passed
    assert all(stab == ((0, 1), (0, 2)) for stab in result.stabs)


def test_rejects_invalid_sets(toy_loop):
    dep = toy_loop.require_dependency()
    with pytest.raises(InputError):
        backward_canonicalize_set(toy_loop, dep, None, [Walk(0, ()), Walk(0, (Step(0, 1),))])


def test_target_must_occur(two_var_point):
    walks = enumerate_bad(two_var_point, PiStableStrategy(), 1, mode=MODE_PARALLEL)
    with pytest.raises(InputError):
        backward_canonicalize_set(two_var_point, two_var_point.require_dependency(), None, walks, target=1)
