"""Causality (dependency) graphs over flaw ids.

Flaw sets are handled internally as Python ``int`` bitmasks (bit f set when
flaw f is in the set), so every width is supported. Public functions accept
any iterable of flaw ids and return ``frozenset``.

A self-loop f ∼ f is a property of the graph: Γ(f) contains f only when the
loop is present, while Γ⁺(f) always contains f.
"""

import logging
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import InputError, ResourceLimitError

logger = logging.getLogger(__name__)

FlawSet = FrozenSet[int]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def from_mask(mask: int) -> FlawSet:
    return frozenset(iter_bits(mask))


class DependencyGraph:
    """Symmetric relation ∼ on flaws {0..n-1}, self-loops allowed."""

    def __init__(self, flaw_count: int, edges: Iterable[Tuple[int, int]] = (), loops: Iterable[int] = ()):
        if flaw_count < 0:
            raise InputError("flaw_count must be non-negative")
        self.flaw_count = flaw_count
        self._adj: List[int] = [0] * flaw_count
        self._loops = 0
        for f, g in edges:
            self.add_edge(f, g)
        for f in loops:
            self.add_edge(f, f)

    @classmethod
    def from_relation(cls, flaw_count: int, related: Callable[[int, int], bool]) -> "DependencyGraph":
        """Build from a symmetric predicate evaluated on every pair (f ≤ g)."""
        graph = cls(flaw_count)
        for f in range(flaw_count):
            for g in range(f, flaw_count):
                if related(f, g):
                    graph.add_edge(f, g)
        return graph

    @classmethod
    def complete(cls, flaw_count: int, loops: bool = True) -> "DependencyGraph":
        graph = cls(flaw_count)
        full = (1 << flaw_count) - 1
        for f in range(flaw_count):
            graph._adj[f] = full & ~(1 << f)
        if loops:
            graph._loops = full
        return graph

    @classmethod
    def from_dict(cls, data: Dict) -> "DependencyGraph":
        try:
            return cls(int(data["flaw_count"]),
                       edges=[tuple(e) for e in data.get("edges", [])],
                       loops=data.get("loops", []))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"Malformed dependency graph: {e}")

    def to_dict(self) -> Dict:
        return {"flaw_count": self.flaw_count, "edges": [list(e) for e in self.edges()], "loops": self.loops()}

    def check_flaw(self, f: int) -> None:
        if not isinstance(f, int) or not 0 <= f < self.flaw_count:
            raise InputError(f"Flaw id {f!r} out of range [0, {self.flaw_count})")

    def add_edge(self, f: int, g: int) -> None:
        self.check_flaw(f)
        self.check_flaw(g)
        if f == g:
            self._loops |= 1 << f
        else:
            self._adj[f] |= 1 << g
            self._adj[g] |= 1 << f

    def has_loop(self, f: int) -> bool:
        return bool(self._loops >> f & 1)

    def adjacent(self, f: int, g: int) -> bool:
        """f ∼ g."""
        if f == g:
            return self.has_loop(f)
        return bool(self._adj[f] >> g & 1)

    def cong(self, f: int, g: int) -> bool:
        """f ≅ g, i.e. f ∼ g or f = g."""
        return f == g or bool(self._adj[f] >> g & 1)

    def neighbour_mask_of(self, f: int) -> int:
        """Γ(f) − {f} as a mask."""
        return self._adj[f]

    def gamma_mask_of(self, f: int) -> int:
        """Γ(f) as a mask."""
        return self._adj[f] | (self._loops & (1 << f))

    def plus_mask_of(self, f: int) -> int:
        """Γ⁺(f) as a mask."""
        return self._adj[f] | (1 << f)

    def gamma_mask(self, mask: int, plus: bool = False) -> int:
        result = 0
        for f in iter_bits(mask):
            result |= self.plus_mask_of(f) if plus else self.gamma_mask_of(f)
        return result

    def to_mask(self, flaws: Iterable[int]) -> int:
        mask = 0
        for f in flaws:
            self.check_flaw(f)
            mask |= 1 << f
        return mask

    def is_independent_mask(self, mask: int) -> bool:
        for f in iter_bits(mask):
            if self._adj[f] & mask:
                return False
        return True

    def edges(self) -> List[Tuple[int, int]]:
        """Edges f < g, sorted."""
        return [(f, g) for f in range(self.flaw_count) for g in iter_bits(self._adj[f]) if f < g]

    def loops(self) -> List[int]:
        return list(iter_bits(self._loops))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DependencyGraph):
            return NotImplemented
        return (self.flaw_count == other.flaw_count and self._adj == other._adj
                and self._loops == other._loops)

    def __repr__(self) -> str:
        return f"DependencyGraph(flaws={self.flaw_count}, edges={len(self.edges())}, loops={len(self.loops())})"


def gamma(dep: DependencyGraph, flaws: Iterable[int], plus: bool = False) -> FlawSet:
    """Γ(S) (or Γ⁺(S) when ``plus``) as a frozenset.

    Raises:
        InputError: If a flaw id is out of range
    """
    return from_mask(dep.gamma_mask(dep.to_mask(flaws), plus))


def is_independent(dep: DependencyGraph, flaws: Iterable[int]) -> bool:
    """True iff no two distinct flaws of S are adjacent; loops do not matter."""
    return dep.is_independent_mask(dep.to_mask(flaws))


def enumerate_independent_subsets(dep: DependencyGraph, flaws: Iterable[int],
                                  cap: int = EnumerationConfig.MAX_SUBSETS) -> List[FlawSet]:
    """All independent subsets of S, ordered by size then lexicographically.

    Raises:
        ResourceLimitError: When more than ``cap`` subsets exist
    """
    members = sorted(set(flaws))
    dep.to_mask(members)
    found: List[Tuple[int, ...]] = []

    def extend(start: int, chosen: Tuple[int, ...], blocked: int) -> None:
        found.append(chosen)
        if len(found) > cap:
            raise ResourceLimitError(f"Independent subsets exceed cap {cap}")
        for i in range(start, len(members)):
            f = members[i]
            if blocked >> f & 1:
                continue
            extend(i + 1, chosen + (f,), blocked | dep.plus_mask_of(f))

    extend(0, (), 0)
    found.sort(key=lambda subset: (len(subset), subset))
    return [frozenset(subset) for subset in found]


def independence_sum(dep: DependencyGraph, flaws: Iterable[int], weights: Sequence,
                     cap: int = EnumerationConfig.MAX_SUBSETS):
    """Σ over independent T ⊆ S of Π_{f∈T} weights[f].

    Uses the deletion recursion Z(S) = Z(S - v) + w_v · Z(S - Γ⁺(v)) with
    memoization on masks; ``cap`` bounds the number of distinct sub-problems.

    Raises:
        ResourceLimitError: When more than ``cap`` sub-problems are needed
    """
    mask = dep.to_mask(flaws)
    memo: Dict[int, object] = {0: 1}

    def z(m: int):
        if m in memo:
            return memo[m]
        if len(memo) > cap:
            raise ResourceLimitError(f"Independence polynomial evaluation exceeds cap {cap}")
        # branch on the highest-degree vertex to keep the recursion shallow
        v = max(iter_bits(m), key=lambda f: bin(dep.plus_mask_of(f) & m).count("1"))
        value = z(m & ~(1 << v)) + weights[v] * z(m & ~dep.plus_mask_of(v))
        memo[m] = value
        return value

    return z(mask)


def restrict_order(order: Optional[Sequence[int]], flaw_count: int) -> List[int]:
    """Rank array for a total order π given as a permutation (identity when None).

    Raises:
        InputError: When ``order`` is not a permutation of the flaws
    """
    if order is None:
        return list(range(flaw_count))
    if sorted(order) != list(range(flaw_count)):
        raise InputError(f"Order must be a permutation of 0..{flaw_count - 1}")
    rank = [0] * flaw_count
    for position, f in enumerate(order):
        rank[f] = position
    return rank
