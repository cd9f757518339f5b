"""
lllcore.oracles.matchings
-------------------------
Uniform-measure flaws and actions over perfect matchings.

Two host families are supported:

* P1: the complete graph K_2n on vertices 0..2n-1.
* P2: a disjoint union of complete bipartite blocks K_{m_i,m_i}; every
  vertex 0..V-1 belongs to exactly one side of one block.

A flaw f_M is the set of perfect matchings containing a partial matching M.
The action for f_M is the swap chain that undoes M edge by edge (last edge
first), choosing each partner uniformly among the admissible directed
edges; the backward step ψ̂(M, ·) inverts it, which makes the oracle atomic.

States are ``MatchingState`` values storing the partner map.
"""

from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import CapabilityError, InputError
from lllcore.core.graph import DependencyGraph
from lllcore.core.instance import ModelInstance, Outcome
from lllcore.core.numeric import Prob
from lllcore.core.rng import choose_uniform

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Directed = Tuple[int, int]

CASE_COMPLETE = "P1"
CASE_BIPARTITE = "P2"


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class HostGraph:
    """Host graph of a matching instance (P1 or P2)."""

    def __init__(self, vertex_count: int, case: str, blocks: Optional[Sequence[Tuple[Sequence[int], Sequence[int]]]] = None):
        if vertex_count <= 0 or vertex_count % 2:
            raise InputError(f"Host graph needs a positive even number of vertices, got {vertex_count}")
        self.vertex_count = vertex_count
        self.case = case
        self._side: List[Tuple[int, int]] = []
        if case == CASE_COMPLETE:
            self.blocks: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = []
        elif case == CASE_BIPARTITE:
            if not blocks:
                raise InputError("P2 host graph needs at least one block")
            self.blocks = [(tuple(sorted(a)), tuple(sorted(b))) for a, b in blocks]
            side: Dict[int, Tuple[int, int]] = {}
            for i, (a, b) in enumerate(self.blocks):
                if len(a) != len(b) or not a:
                    raise InputError(f"Block {i} must have two non-empty sides of equal size")
                for s, part in enumerate((a, b)):
                    for v in part:
                        if v in side:
                            raise InputError(f"Vertex {v} appears in more than one block side")
                        side[v] = (i, s)
            if sorted(side) != list(range(vertex_count)):
                raise InputError(f"Blocks must partition the vertices 0..{vertex_count - 1}")
            self._side = [side[v] for v in range(vertex_count)]
        else:
            raise InputError(f"Unknown host case {case!r}; expected P1 or P2")

    @classmethod
    def complete(cls, n: int) -> "HostGraph":
        """K_2n on vertices 0..2n-1."""
        return cls(2 * n, CASE_COMPLETE)

    @classmethod
    def bipartite(cls, blocks: Sequence[Tuple[Sequence[int], Sequence[int]]]) -> "HostGraph":
        vertex_count = sum(len(a) + len(b) for a, b in blocks)
        return cls(vertex_count, CASE_BIPARTITE, blocks)

    @property
    def n(self) -> int:
        return self.vertex_count // 2

    def has_edge(self, u: int, v: int) -> bool:
        if u == v or not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
            return False
        if self.case == CASE_COMPLETE:
            return True
        (bu, su), (bv, sv) = self._side[u], self._side[v]
        return bu == bv and su != sv

    def orient(self, edge: Edge) -> Directed:
        """Canonical orientation: smaller endpoint first (P1), A-side first (P2)."""
        u, v = edge
        if self.case == CASE_BIPARTITE and self._side[u][1] == 1:
            return (v, u)
        return canonical_edge(u, v)

    def neighbours(self, v: int) -> List[int]:
        if self.case == CASE_COMPLETE:
            return [u for u in range(self.vertex_count) if u != v]
        block, side = self._side[v]
        return list(self.blocks[block][1 - side])

    def to_dict(self) -> Dict[str, Any]:
        if self.case == CASE_COMPLETE:
            return {"case": self.case, "n": self.n}
        return {"case": self.case, "blocks": [[list(a), list(b)] for a, b in self.blocks]}


@dataclass(frozen=True)
class MatchingState:
    """A perfect matching stored as its partner map: partner[v] is v's mate."""
    partner: Tuple[int, ...]

    @classmethod
    def from_edges(cls, host: HostGraph, edges: Sequence[Sequence[int]]) -> "MatchingState":
        """Build and validate a perfect matching of ``host``.

        Raises:
            InputError: When ``edges`` is not a perfect matching of the host
        """
        partner = [-1] * host.vertex_count
        for edge in edges:
            u, v = edge
            if not host.has_edge(u, v):
                raise InputError(f"{{{u},{v}}} is not an edge of the host graph")
            if partner[u] != -1 or partner[v] != -1:
                raise InputError(f"Edges {list(edges)} are not a matching")
            partner[u], partner[v] = v, u
        if -1 in partner:
            raise InputError(f"Edges {list(edges)} do not cover every vertex")
        return cls(tuple(partner))

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple((u, v) for u, v in enumerate(self.partner) if u < v)

    def directed(self) -> List[Directed]:
        return [(u, v) for u, v in enumerate(self.partner)]

    def contains(self, edge: Edge) -> bool:
        u, v = edge
        return self.partner[u] == v

    def __repr__(self) -> str:
        return f"MatchingState({list(self.edges)})"


@dataclass(frozen=True)
class MatchingFlaw:
    """Flaw f_M for a non-empty partial matching M, edges stored canonically and sorted."""
    edges: Tuple[Edge, ...]
    name: str = ""

    @classmethod
    def from_edges(cls, host: HostGraph, edges: Sequence[Sequence[int]], name: str = "") -> "MatchingFlaw":
        canonical = tuple(sorted(canonical_edge(int(u), int(v)) for u, v in edges))
        check_partial_matching(host, canonical)
        return cls(canonical, name or "M" + "".join(f"{{{u},{v}}}" for u, v in canonical))

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(x for e in self.edges for x in e)


def check_partial_matching(host: HostGraph, edges: Sequence[Edge]) -> None:
    """Raises InputError unless ``edges`` is a non-empty matching of host edges."""
    if not edges:
        raise InputError("A matching flaw needs at least one edge")
    seen: Set[int] = set()
    for u, v in edges:
        if not host.has_edge(u, v):
            raise InputError(f"{{{u},{v}}} is not an edge of the host graph")
        if u in seen or v in seen:
            raise InputError(f"Edges {list(edges)} do not form a matching")
        seen.update((u, v))


def hat_psi(host: HostGraph, edges: Sequence[Edge], sigma: MatchingState) -> MatchingState:
    """ψ̂(M, σ): force the edges of M into σ one at a time, left to right.

    For a single edge {u, v} with {u, u′}, {v, v′} ∈ σ the result replaces
    those two edges with {u, v} and {u′, v′}; it is the identity when
    {u, v} ∈ σ already.

    Raises:
        InputError: When M is not a matching of host edges
    """
    check_partial_matching(host, [canonical_edge(u, v) for u, v in edges])
    partner = list(sigma.partner)
    for u, v in edges:
        u2, v2 = partner[u], partner[v]
        if u2 == v:
            continue
        partner[u], partner[v] = v, u
        partner[u2], partner[v2] = v2, u2
    return MatchingState(tuple(partner))


def swap_sigma(host: HostGraph, sigma: MatchingState, first: Directed, second: Directed) -> MatchingState:
    """Swap_σ((u,v),(u′,v′)) = σ − {uv, u′v′} ∪ {uu′, vv′}.

    Raises:
        InputError: When either directed edge is not in σ or the result is
            not a perfect matching of the host
    """
    u, v = first
    u2, v2 = second
    if sigma.partner[u] != v or sigma.partner[u2] != v2:
        raise InputError(f"Swap arguments {first}, {second} are not edges of {sigma}")
    if (u2, v2) == (v, u):
        return sigma
    if (u2, v2) == (u, v) or not host.has_edge(u, u2) or not host.has_edge(v, v2):
        raise InputError(f"Swap of {first} with {second} leaves the state space")
    partner = list(sigma.partner)
    partner[u], partner[u2] = u2, u
    partner[v], partner[v2] = v2, v
    return MatchingState(tuple(partner))


def neighbors_N(host: HostGraph, sigma: MatchingState, edge: Directed) -> List[Directed]:
    """N_σ(u, v): directed σ-edges whose swap with (u, v) stays in Ω, sorted.

    P1 gives every directed σ-edge but (u, v); P2 gives (B_i × A_i) ∩ σ⃗ for the
    block holding u ∈ A_i, v ∈ B_i.
    """
    u, v = edge
    if sigma.partner[u] != v:
        raise InputError(f"{edge} is not an edge of {sigma}")
    result = []
    for u2, v2 in sigma.directed():
        if (u2, v2) == (u, v):
            continue
        if (u2, v2) == (v, u) or (host.has_edge(u, u2) and host.has_edge(v, v2)):
            result.append((u2, v2))
    return result


def _excluded(edges: Sequence[Edge]) -> Set[Directed]:
    return {d for u, v in edges for d in ((u, v), (v, u))}


def _candidates(host: HostGraph, sigma: MatchingState, edges: Sequence[Edge], i: int) -> Tuple[Directed, List[Directed]]:
    oriented = host.orient(edges[i])
    excluded = _excluded(edges[:i])
    return oriented, [d for d in neighbors_N(host, sigma, oriented) if d not in excluded]


def sample_action(host: HostGraph, flaw: MatchingFlaw, sigma: MatchingState,
                  rng: np.random.Generator) -> Tuple[MatchingState, Prob]:
    """Draw σ′ from the action of f_M at σ ∈ f_M; returns (σ′, its probability)."""
    current = sigma
    prob = Fraction(1)
    for i in reversed(range(len(flaw.edges))):
        oriented, candidates = _candidates(host, current, flaw.edges, i)
        pick = choose_uniform(rng, candidates)
        prob /= len(candidates)
        current = swap_sigma(host, current, oriented, pick)
    return current, prob


def support_of_action(host: HostGraph, flaw: MatchingFlaw, sigma: MatchingState) -> List[Outcome]:
    """A(f_M, σ) with probabilities, by expanding every branch of the swap chain."""
    outcomes: Dict[MatchingState, Prob] = {}

    def expand(current: MatchingState, i: int, prob: Fraction) -> None:
        if i < 0:
            outcomes[current] = outcomes.get(current, Fraction(0)) + prob
            return
        oriented, candidates = _candidates(host, current, flaw.edges, i)
        share = prob / len(candidates)
        for pick in candidates:
            expand(swap_sigma(host, current, oriented, pick), i - 1, share)

    expand(sigma, len(flaw.edges) - 1, Fraction(1))
    return sorted(outcomes.items(), key=lambda item: item[0].edges)


def backward_step_psi(host: HostGraph, flaw: MatchingFlaw, target: MatchingState) -> MatchingState:
    """ψ(f_M, σ′) = ψ̂(M, σ′)."""
    return hat_psi(host, flaw.edges, target)


def count_perfect_matchings(host: HostGraph) -> int:
    """(2n-1)!! for P1, Π m_i! for P2."""
    if host.case == CASE_COMPLETE:
        return math.prod(range(1, host.vertex_count, 2))
    return math.prod(math.factorial(len(a)) for a, _ in host.blocks)


def enumerate_perfect_matchings(host: HostGraph) -> Iterator[MatchingState]:
    """Every perfect matching, in lexicographic order of sorted edge lists."""
    partner = [-1] * host.vertex_count

    def extend() -> Iterator[MatchingState]:
        try:
            v = partner.index(-1)
        except ValueError:
            yield MatchingState(tuple(partner))
            return
        for u in sorted(host.neighbours(v)):
            if u > v and partner[u] == -1:
                partner[v], partner[u] = u, v
                yield from extend()
                partner[v], partner[u] = -1, -1

    yield from extend()


def sample_uniform_matching(host: HostGraph, rng: np.random.Generator) -> MatchingState:
    """Uniform perfect matching: random sequential pairing (P1), random bijection per block (P2)."""
    partner = [-1] * host.vertex_count
    if host.case == CASE_COMPLETE:
        unmatched = list(range(host.vertex_count))
        while unmatched:
            v = unmatched.pop(0)
            u = unmatched.pop(int(rng.integers(len(unmatched))))
            partner[v], partner[u] = u, v
    else:
        for a, b in host.blocks:
            for v, j in zip(a, rng.permutation(len(b))):
                u = b[int(j)]
                partner[v], partner[u] = u, v
    return MatchingState(tuple(partner))


def flaws_related(first: MatchingFlaw, second: MatchingFlaw, relation: str = "standard") -> bool:
    """f_M ∼ f_M′ iff M ∪ M′ is not a matching or M = M′.

    The ``wide`` relation also relates flaws sharing an edge.
    """
    if first.edges == second.edges:
        return True
    shared = set(first.edges) & set(second.edges)
    if relation == "wide" and shared:
        return True
    for e in first.edges:
        for g in second.edges:
            if e != g and set(e) & set(g):
                return True
    return False


class MatchingInstance(ModelInstance):
    """Perfect matchings of a host graph under the uniform measure."""

    exact = True
    atomic = True

    def __init__(self, host: HostGraph, flaws: Sequence[MatchingFlaw], relation: str = "standard",
                 name: str = "matching", max_states: int = EnumerationConfig.MAX_STATES):
        if relation not in ("standard", "wide"):
            raise InputError(f"Unknown causality relation {relation!r}")
        self.host = host
        self.flaws = list(flaws)
        self.relation = relation
        self._count = count_perfect_matchings(host)
        self._max_states = max_states
        self._omega = Fraction(1, self._count)
        self._by_edge: Dict[Edge, List[int]] = {}
        for i, flaw in enumerate(self.flaws):
            for e in flaw.edges:
                self._by_edge.setdefault(e, []).append(i)
        self._action_size: Dict[int, int] = {}
        self._states: Optional[List[MatchingState]] = None
        super().__init__(name, [f.name or f"f{i}" for i, f in enumerate(self.flaws)], self._build_dependency())
        logger.debug(f"Matching instance '{name}': {host.case}, {host.vertex_count} vertices, "
                     f"{len(self.flaws)} flaws, |Ω|={self._count}")

    def _build_dependency(self) -> DependencyGraph:
        by_vertex: Dict[int, List[int]] = {}
        for i, flaw in enumerate(self.flaws):
            for v in flaw.vertices:
                by_vertex.setdefault(v, []).append(i)
        graph = DependencyGraph(len(self.flaws))
        for i, flaw in enumerate(self.flaws):
            graph.add_edge(i, i)
            candidates = {j for v in flaw.vertices for j in by_vertex[v] if j > i}
            for j in sorted(candidates):
                if flaws_related(flaw, self.flaws[j], self.relation):
                    graph.add_edge(i, j)
        return graph

    @property
    def enumerable(self) -> bool:
        return self._count <= self._max_states

    def states(self) -> List[MatchingState]:
        if not self.enumerable:
            raise CapabilityError(f"{self._count} perfect matchings exceed cap {self._max_states}")
        if self._states is None:
            self._states = list(enumerate_perfect_matchings(self.host))
        return self._states

    def flaws_present(self, state: MatchingState) -> FrozenSet[int]:
        present = set()
        for e in state.edges:
            for i in self._by_edge.get(e, ()):
                if i not in present and all(state.contains(g) for g in self.flaws[i].edges):
                    present.add(i)
        return frozenset(present)

    def action_support(self, flaw: int, state: MatchingState) -> List[Outcome]:
        return support_of_action(self.host, self.flaws[flaw], state)

    def sample_action(self, flaw: int, state: MatchingState, rng: np.random.Generator) -> Outcome:
        return sample_action(self.host, self.flaws[flaw], state, rng)

    def action_size(self, flaw: int, state: MatchingState) -> int:
        """|A(f, σ)|, the same for every σ ∈ f."""
        if flaw not in self._action_size:
            edges = self.flaws[flaw].edges
            current = state
            size = 1
            for i in reversed(range(len(edges))):
                oriented, candidates = _candidates(self.host, current, edges, i)
                size *= len(candidates)
                current = swap_sigma(self.host, current, oriented, candidates[0])
            self._action_size[flaw] = size
        return self._action_size[flaw]

    def action_probability(self, flaw: int, state: MatchingState, target: MatchingState) -> Prob:
        if len(target.partner) != self.host.vertex_count or any(
            not self.host.has_edge(u, v) for u, v in target.edges
        ):
            return 0
        if hat_psi(self.host, self.flaws[flaw].edges, target) != state:
            return 0
        return Fraction(1, self.action_size(flaw, state))

    def backward_step(self, flaw: int, target: MatchingState) -> Optional[MatchingState]:
        return backward_step_psi(self.host, self.flaws[flaw], target)

    def measure(self, state: MatchingState) -> Prob:
        return self._omega

    def initial_measure(self, state: MatchingState) -> Prob:
        return self._omega

    def initial_support(self) -> List[MatchingState]:
        return self.states()

    def init_ratio_max(self) -> Prob:
        return Fraction(1)

    def sample_initial(self, rng: np.random.Generator) -> MatchingState:
        return sample_uniform_matching(self.host, rng)

    def flaw_measure(self, flaw: int) -> Prob:
        edges = self.flaws[flaw].edges
        if self.host.case == CASE_COMPLETE:
            rest = self.host.vertex_count - 2 * len(edges)
            return Fraction(math.prod(range(1, rest, 2)), self._count)
        return super().flaw_measure(flaw)

    def describe_state(self, state: MatchingState) -> Any:
        return [list(e) for e in state.edges]


def build_matching_instance(host: HostGraph, flaws: Sequence[Sequence[Sequence[int]]],
                            relation: str = "standard", names: Optional[Sequence[str]] = None,
                            name: str = "matching",
                            max_states: int = EnumerationConfig.MAX_STATES) -> MatchingInstance:
    """Build a matching instance from edge lists, one list per flaw.

    Raises:
        InputError: When a flaw is not a matching of host edges, or flaws repeat
    """
    built = []
    seen = set()
    for i, edges in enumerate(flaws):
        flaw = MatchingFlaw.from_edges(host, edges, names[i] if names else "")
        if flaw.edges in seen:
            raise InputError(f"Flaw {list(flaw.edges)} is listed twice")
        seen.add(flaw.edges)
        built.append(flaw)
    return MatchingInstance(host, built, relation, name, max_states)


def host_from_dict(data: Dict[str, Any]) -> HostGraph:
    """Parse the ``host`` part of a matching description."""
    case = data.get("case", CASE_COMPLETE)
    try:
        if case == CASE_COMPLETE:
            return HostGraph.complete(int(data["n"]))
        return HostGraph.bipartite([(list(a), list(b)) for a, b in data["blocks"]])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed host graph: {e}")
