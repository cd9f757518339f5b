"""
Tests for causality graphs and independent-set utilities.
"""

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from lllcore.core.errors import InputError, ResourceLimitError
from lllcore.core.graph import (
    DependencyGraph, enumerate_independent_subsets, gamma, independence_sum, is_independent, restrict_order,
)


@pytest.fixture
def path3():
    """0 ∼ 1 ∼ 2, no loops."""
    return DependencyGraph(3, edges=[(0, 1), (1, 2)])


@st.composite
def graphs(draw, max_flaws=7):
    n = draw(st.integers(min_value=1, max_value=max_flaws))
    pairs = [(f, g) for f in range(n) for g in range(f, n)]
    chosen = [pair for pair in pairs if draw(st.booleans())]
    return DependencyGraph(n, edges=[p for p in chosen if p[0] != p[1]], loops=[p[0] for p in chosen if p[0] == p[1]])


def naive_gamma(dep, flaws, plus):
    found = set()
    for f in flaws:
        for g in range(dep.flaw_count):
            if dep.adjacent(f, g) or (plus and f == g):
                found.add(g)
    return frozenset(found)


def naive_independent(dep, flaws):
    return all(not dep.adjacent(f, g) for f, g in combinations(sorted(set(flaws)), 2))


def naive_subsets(dep, flaws):
    members = sorted(set(flaws))
    return [frozenset(c) for k in range(len(members) + 1) for c in combinations(members, k)
            if naive_independent(dep, c)]


class TestGamma:
    def test_path_neighbourhoods(self, path3):
        assert gamma(path3, [0]) == {1}
        assert gamma(path3, [0], plus=True) == {0, 1}
        assert gamma(path3, [1]) == {0, 2}
        assert gamma(path3, [0, 2]) == {1}

    def test_empty_set(self, path3):
        assert gamma(path3, []) == frozenset()
        assert gamma(path3, [], plus=True) == frozenset()

    def test_loop_is_in_gamma(self):
        dep = DependencyGraph(2, edges=[(0, 1)], loops=[0])
        assert gamma(dep, [0]) == {0, 1}
        assert gamma(dep, [1]) == {0}
        assert dep.has_loop(0) and not dep.has_loop(1)

    def test_out_of_range_flaw(self, path3):
        with pytest.raises(InputError):
            gamma(path3, [3])

    @settings(max_examples=60, deadline=None)
    @given(graphs(), st.data())
    def test_matches_definition(self, dep, data):
        flaws = data.draw(st.sets(st.integers(min_value=0, max_value=dep.flaw_count - 1)))
        assert gamma(dep, flaws) == naive_gamma(dep, flaws, plus=False)
        assert gamma(dep, flaws, plus=True) == naive_gamma(dep, flaws, plus=True)


class TestIndependence:
    def test_examples(self, path3):
        assert is_independent(path3, [0, 2])
        assert not is_independent(path3, [0, 1])
        assert is_independent(path3, [])
        assert is_independent(path3, [1])

    def test_loops_do_not_matter(self):
        dep = DependencyGraph(2, loops=[0, 1])
        assert is_independent(dep, [0, 1])
        assert is_independent(dep, [0])

    def test_subsets_ordered_by_size_then_lex(self, path3):
        assert enumerate_independent_subsets(path3, [0, 1, 2]) == [
            frozenset(), frozenset({0}), frozenset({1}), frozenset({2}), frozenset({0, 2}),
        ]

    def test_subsets_of_part(self, path3):
        assert enumerate_independent_subsets(path3, [0, 1]) == [frozenset(), frozenset({0}), frozenset({1})]

    def test_subset_cap(self):
        dep = DependencyGraph(10)
        with pytest.raises(ResourceLimitError):
            enumerate_independent_subsets(dep, range(10), cap=100)

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_flaws=8))
    def test_subsets_match_brute_force(self, dep):
        flaws = range(dep.flaw_count)
        found = enumerate_independent_subsets(dep, flaws)
        assert sorted(found, key=sorted) == sorted(naive_subsets(dep, flaws), key=sorted)
        assert all(is_independent(dep, s) == naive_independent(dep, s) for s in found)

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_flaws=8), st.data())
    def test_independence_sum_matches_enumeration(self, dep, data):
        weights = [Fraction(data.draw(st.integers(min_value=1, max_value=9)), 10) for _ in range(dep.flaw_count)]
        expected = Fraction(0)
        for subset in naive_subsets(dep, range(dep.flaw_count)):
            term = Fraction(1)
            for f in subset:
                term *= weights[f]
            expected += term
        assert independence_sum(dep, range(dep.flaw_count), weights) == expected


class TestGraphConstruction:
    def test_complete_graph(self):
        dep = DependencyGraph.complete(3)
        assert dep.edges() == [(0, 1), (0, 2), (1, 2)]
        assert dep.loops() == [0, 1, 2]
        assert DependencyGraph.complete(3, loops=False).loops() == []

    def test_from_relation(self):
        dep = DependencyGraph.from_relation(3, lambda f, g: abs(f - g) == 1)
        assert dep == DependencyGraph(3, edges=[(0, 1), (1, 2)])

    def test_dict_form(self):
        dep = DependencyGraph(3, edges=[(0, 2)], loops=[1])
        assert DependencyGraph.from_dict(dep.to_dict()) == dep

    def test_malformed_dict(self):
        with pytest.raises(InputError):
            DependencyGraph.from_dict({"edges": [[0, 1]]})

    def test_cong(self, path3):
        assert path3.cong(0, 0)
        assert path3.cong(0, 1)
        assert not path3.cong(0, 2)
        assert not path3.adjacent(0, 0)

    def test_restrict_order(self):
        assert restrict_order(None, 3) == [0, 1, 2]
        assert restrict_order([2, 0, 1], 3) == [1, 2, 0]
        with pytest.raises(InputError):
            restrict_order([0, 0, 1], 3)
