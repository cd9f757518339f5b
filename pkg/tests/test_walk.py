"""
Tests for walks, their probabilities and word helpers.
"""

from fractions import Fraction

import pytest

from conftest import matching
from lllcore.core.errors import ContractViolationError
from lllcore.core.numeric import close, leq, parse_positive, parse_probability, to_json_number
from lllcore.core.errors import InputError
from lllcore.core.walk import Step, Walk, WalkBuilder, lambda_of_word, named_word, walk_probability


@pytest.fixture
def sigma_a(k4_host):
    return matching(k4_host, [(0, 1), (2, 3)])


@pytest.fixture
def sigma_b(k4_host):
    return matching(k4_host, [(0, 2), (1, 3)])


def test_empty_walk_probability(k4, sigma_a):
    assert walk_probability(k4, Walk(sigma_a)) == Fraction(1, 3)


def test_one_step_probability(k4, sigma_a, sigma_b):
    walk = Walk(sigma_a, (Step(0, sigma_b),))
    assert walk_probability(k4, walk) == Fraction(1, 9)


def test_absent_flaw_is_rejected_with_step_index(k4, sigma_a, sigma_b):
    # flaw 1 is {0,2}, absent from σA
    walk = Walk(sigma_a, (Step(1, sigma_b),))
    with pytest.raises(ContractViolationError) as excinfo:
        walk_probability(k4, walk)
    assert excinfo.value.step_index == 1


def test_unreachable_target_is_rejected(toy_loop):
    walk = Walk(1, (Step(0, 2),))
    with pytest.raises(ContractViolationError) as excinfo:
        walk_probability(toy_loop, walk)
    assert excinfo.value.step_index == 1


def test_second_step_index(toy_loop):
    walk = Walk(0, (Step(0, 1), Step(0, 2)))
    with pytest.raises(ContractViolationError) as excinfo:
        walk_probability(toy_loop, walk)
    assert excinfo.value.step_index == 2


def test_walk_accessors(toy_loop):
    walk = Walk(0, ()).extend(0, 0, Fraction(1, 4)).extend(0, 3, Fraction(1, 4))
    assert walk.word == (0, 0)
    assert walk.states == (0, 0, 3)
    assert walk.final == 3
    assert walk.state_before(1) == 0
    assert walk.prob == Fraction(1, 16)
    assert walk.prefix(1).word == (0,)


def test_builder_freezes_to_walk():
    builder = WalkBuilder(0, Fraction(1, 4))
    builder.append(0, 2, Fraction(1, 4))
    assert builder.current == 2
    assert builder.to_walk() == Walk(0, (Step(0, 2),), Fraction(1, 16))


class TestWords:
    def test_lambda_of_word(self):
        lam = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]
        assert lambda_of_word(lam, ()) == 1
        assert lambda_of_word(lam, (0, 0, 0)) == Fraction(1, 8)
        assert lambda_of_word(lam, (0, 1, 2, 0)) == Fraction(1, 48)

    def test_named_word(self):
        assert named_word((0, 1, 0)) == ((0, 1), (1, 1), (0, 2))
        assert named_word(()) == ()


class TestNumeric:
    def test_parse_probability(self):
        assert parse_probability("1/3") == Fraction(1, 3)
        assert parse_probability(1) == Fraction(1)
        assert isinstance(parse_probability(0.25), float)
        for bad in ("2", -1, "x", True, None):
            with pytest.raises(InputError):
                parse_probability(bad)

    def test_parse_positive(self):
        assert parse_positive("3/2") == Fraction(3, 2)
        with pytest.raises(InputError):
            parse_positive(0)

    def test_comparisons(self):
        assert close(Fraction(1, 3), Fraction(1, 3))
        assert not close(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10 ** 20))
        assert close(0.1 + 0.2, 0.3)
        assert leq(Fraction(1, 3), Fraction(1, 2))
        assert leq(0.30000000000000004, 0.3)

    def test_json_numbers(self):
        assert to_json_number(Fraction(1, 3)) == "1/3"
        assert to_json_number(Fraction(2)) == 2
        assert to_json_number(0.5) == 0.5
