"""
Tests for the perfect-matching oracle: ψ̂, swaps, action supports and sampling.
"""

from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest
from scipy.stats import chisquare

from conftest import matching
from lllcore.core.errors import InputError
from lllcore.core.rng import make_rng
from lllcore.oracles.matchings import (
    HostGraph, MatchingFlaw, MatchingState, backward_step_psi, build_matching_instance, count_perfect_matchings,
    enumerate_perfect_matchings, flaws_related, hat_psi, neighbors_N, sample_action, sample_uniform_matching,
    support_of_action, swap_sigma,
)


@pytest.fixture
def sigma_a(k4_host):
    return matching(k4_host, [(0, 1), (2, 3)])


@pytest.fixture
def sigma_b(k4_host):
    return matching(k4_host, [(0, 2), (1, 3)])


@pytest.fixture
def sigma_c(k4_host):
    return matching(k4_host, [(0, 3), (1, 2)])


@pytest.fixture
def k33():
    return HostGraph.bipartite([([0, 1, 2], [3, 4, 5])])


def k6_flaws(host, size):
    """Every partial matching of K6 with ``size`` edges."""
    edges = list(combinations(range(6), 2))
    found = []
    for chosen in combinations(edges, size):
        vertices = [v for e in chosen for v in e]
        if len(set(vertices)) == len(vertices):
            found.append(MatchingFlaw.from_edges(host, chosen))
    return found


class TestHatPsi:
    def test_forces_a_missing_edge(self, k4_host, sigma_a, sigma_b):
        assert hat_psi(k4_host, [(0, 2)], sigma_a) == sigma_b

    def test_identity_when_edge_present(self, k4_host, sigma_a):
        assert hat_psi(k4_host, [(0, 1)], sigma_a) == sigma_a

    def test_two_edges_in_either_order(self, k4_host, sigma_a, sigma_b):
        assert hat_psi(k4_host, [(0, 1), (2, 3)], sigma_b) == sigma_a
        assert hat_psi(k4_host, [(2, 3), (0, 1)], sigma_b) == sigma_a

    def test_rejects_non_matching(self, k4_host, sigma_a):
        with pytest.raises(InputError):
            hat_psi(k4_host, [(0, 1), (1, 2)], sigma_a)

    def test_order_independent_on_k6(self, k6_host):
        states = list(enumerate_perfect_matchings(k6_host))
        for flaw in k6_flaws(k6_host, 2):
            e, g = flaw.edges
            for sigma in states:
                combined = hat_psi(k6_host, [e, g], sigma)
                assert combined == hat_psi(k6_host, [g, e], sigma)
                assert combined == hat_psi(k6_host, [g], hat_psi(k6_host, [e], sigma))
                assert flaw.edges[0] in combined.edges and flaw.edges[1] in combined.edges


class TestSwap:
    def test_swap_rewires_two_edges(self, k4_host, sigma_a, sigma_b):
        assert swap_sigma(k4_host, sigma_a, (0, 1), (2, 3)) == sigma_b

    def test_swap_with_reverse_is_identity(self, k4_host, sigma_a):
        assert swap_sigma(k4_host, sigma_a, (0, 1), (1, 0)) == sigma_a

    def test_swap_needs_edges_of_sigma(self, k4_host, sigma_a):
        with pytest.raises(InputError):
            swap_sigma(k4_host, sigma_a, (0, 2), (1, 3))

    def test_swap_must_stay_bipartite(self, k33):
        sigma = matching(k33, [(0, 3), (1, 4), (2, 5)])
        with pytest.raises(InputError):
            swap_sigma(k33, sigma, (0, 3), (1, 4))
        assert swap_sigma(k33, sigma, (0, 3), (4, 1)).edges == ((0, 4), (1, 3), (2, 5))

    def test_neighbors_complete(self, k4_host, sigma_a):
        assert neighbors_N(k4_host, sigma_a, (0, 1)) == [(1, 0), (2, 3), (3, 2)]

    def test_neighbors_bipartite(self, k33):
        sigma = matching(k33, [(0, 3), (1, 4), (2, 5)])
        assert neighbors_N(k33, sigma, (0, 3)) == [(3, 0), (4, 1), (5, 2)]


class TestActions:
    def test_pair_flaw_support_on_k4(self, k4_host, sigma_a, sigma_b, sigma_c):
        flaw = MatchingFlaw.from_edges(k4_host, [(0, 1), (2, 3)])
        support = dict(support_of_action(k4_host, flaw, sigma_a))
        assert support == {sigma_a: Fraction(1, 3), sigma_b: Fraction(1, 3), sigma_c: Fraction(1, 3)}

    def test_single_edge_support_on_k4(self, k4_host, sigma_a, sigma_b, sigma_c):
        flaw = MatchingFlaw.from_edges(k4_host, [(0, 1)])
        assert {s for s, _ in support_of_action(k4_host, flaw, sigma_a)} == {sigma_a, sigma_b, sigma_c}

    @pytest.mark.parametrize("size", [1, 2])
    def test_support_is_the_psi_preimage(self, k6_host, size):
        states = list(enumerate_perfect_matchings(k6_host))
        for flaw in k6_flaws(k6_host, size):
            for sigma in states:
                if not all(sigma.contains(e) for e in flaw.edges):
                    continue
                support = support_of_action(k6_host, flaw, sigma)
                expected = {s for s in states if hat_psi(k6_host, flaw.edges, s) == sigma}
                assert {s for s, _ in support} == expected
                # Π (2n − 2i + 1) over i = 1..|M| with n = 3
                assert len(support) == {1: 5, 2: 15}[size]
                assert all(p == Fraction(1, len(support)) for _, p in support)

    def test_support_ignores_orientation(self, k6_host, monkeypatch):
        states = list(enumerate_perfect_matchings(k6_host))
        flaws = k6_flaws(k6_host, 1)
        before = {(f, s): {t for t, _ in support_of_action(k6_host, f, s)}
                  for f in flaws for s in states if s.contains(f.edges[0])}
        monkeypatch.setattr(k6_host, "orient", lambda edge: (max(edge), min(edge)))
        for (f, s), targets in before.items():
            assert {t for t, _ in support_of_action(k6_host, f, s)} == targets

    def test_backward_step_inverts_action(self, k4_host, sigma_a, sigma_b):
        flaw = MatchingFlaw.from_edges(k4_host, [(0, 1)])
        assert backward_step_psi(k4_host, flaw, sigma_b) == sigma_a

    def test_sampled_outcome_probability(self, k6_host):
        flaw = MatchingFlaw.from_edges(k6_host, [(0, 1), (2, 3)])
        sigma = matching(k6_host, [(0, 1), (2, 3), (4, 5)])
        target, prob = sample_action(k6_host, flaw, sigma, make_rng(5))
        assert prob == Fraction(1, 15)
        assert hat_psi(k6_host, flaw.edges, target) == sigma

    def test_sampled_action_is_uniform(self, k6_host):
        flaw = MatchingFlaw.from_edges(k6_host, [(0, 1), (2, 3)])
        sigma = matching(k6_host, [(0, 1), (2, 3), (4, 5)])
        rng = make_rng(2024)
        draws = 100_000
        counts = Counter(sample_action(k6_host, flaw, sigma, rng)[0] for _ in range(draws))
        assert len(counts) == 15
        _, p_value = chisquare(list(counts.values()))
        assert p_value > 0.001


class TestEnumeration:
    def test_counts(self, k6_host, k33):
        assert count_perfect_matchings(k6_host) == 15
        assert count_perfect_matchings(HostGraph.complete(4)) == 105
        assert count_perfect_matchings(k33) == 6
        for host in (k6_host, k33):
            states = list(enumerate_perfect_matchings(host))
            assert len(states) == len(set(states)) == count_perfect_matchings(host)

    def test_uniform_sampler(self, k6_host):
        rng = make_rng(99)
        counts = Counter(sample_uniform_matching(k6_host, rng) for _ in range(30_000))
        assert len(counts) == 15
        _, p_value = chisquare(list(counts.values()))
        assert p_value > 0.001

    def test_bipartite_sampler_stays_in_blocks(self, k33):
        rng = make_rng(1)
        for _ in range(50):
            sigma = sample_uniform_matching(k33, rng)
            assert all(k33.has_edge(u, v) for u, v in sigma.edges)


class TestFlawsAndInstances:
    def test_invalid_states_and_flaws(self, k4_host, k33):
        with pytest.raises(InputError):
            MatchingState.from_edges(k4_host, [(0, 1)])
        with pytest.raises(InputError):
            MatchingState.from_edges(k4_host, [(0, 1), (1, 2)])
        with pytest.raises(InputError):
            MatchingFlaw.from_edges(k33, [(0, 1)])
        with pytest.raises(InputError):
            MatchingFlaw.from_edges(k4_host, [])
        with pytest.raises(InputError):
            build_matching_instance(k4_host, [[[0, 1]], [[1, 0]]])

    def test_invalid_hosts(self):
        with pytest.raises(InputError):
            HostGraph(3, "P1")
        with pytest.raises(InputError):
            HostGraph.bipartite([([0, 1], [2])])

    def test_relations(self, k6_host):
        a = MatchingFlaw.from_edges(k6_host, [(0, 1), (2, 3)])
        b = MatchingFlaw.from_edges(k6_host, [(0, 1), (4, 5)])
        c = MatchingFlaw.from_edges(k6_host, [(0, 2)])
        d = MatchingFlaw.from_edges(k6_host, [(4, 5)])
        assert flaws_related(a, a)
        assert not flaws_related(a, b)
        assert flaws_related(a, b, "wide")
        assert flaws_related(a, c)
        assert not flaws_related(a, d)

    def test_instance_dependency_has_loops(self, k4):
        dep = k4.require_dependency()
        assert dep.loops() == list(range(6))
        # {0,1} and {2,3} are disjoint; {0,1} and {0,2} share vertex 0
        assert not dep.adjacent(0, 5)
        assert dep.adjacent(0, 1)

    def test_action_stays_in_flaw_preimage(self, k6_pairs):
        for sigma in k6_pairs.states():
            for f in k6_pairs.flaws_present(sigma):
                for target, _ in k6_pairs.action_support(f, sigma):
                    assert k6_pairs.backward_step(f, target) == sigma
                    assert f in k6_pairs.flaws_present(k6_pairs.backward_step(f, target))

    def test_action_size(self, k6_pairs, perm3):
        sigma = next(s for s in k6_pairs.states() if 0 in k6_pairs.flaws_present(s))
        assert k6_pairs.action_size(0, sigma) == 15
        sigma = next(s for s in perm3.states() if 0 in perm3.flaws_present(s))
        assert perm3.action_size(0, sigma) == 3

    def test_flaw_measure(self, k6_pairs, perm3):
        assert k6_pairs.flaw_measure(0) == Fraction(1, 15)
        assert perm3.flaw_measure(0) == Fraction(1, 3)
