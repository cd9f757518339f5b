"""
lllcore.rainbow.coloring
------------------------
Edge-colored complete graphs K_2n and the rainbow matching instance.

A flaw f_M is a pair M of vertex-disjoint edges with the same color; a
perfect matching is rainbow exactly when no flaw is present.
"""

from dataclasses import dataclass
from itertools import combinations
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from lllcore.config.constants import EnumerationConfig
from lllcore.config.loader import ConfigLoader
from lllcore.core.errors import InputError
from lllcore.core.rng import make_rng
from lllcore.oracles.matchings import Edge, HostGraph, MatchingInstance, MatchingState, build_matching_instance, canonical_edge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColoredGraph:
    """Complete graph on 2n vertices with one color per edge."""
    n: int
    colors: Dict[Edge, int]
    seed: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"Rainbow instances need n >= 2, got {self.n}")
        expected = {canonical_edge(u, v) for u, v in combinations(range(2 * self.n), 2)}
        if set(self.colors) != expected:
            missing = len(expected - set(self.colors))
            raise InputError(f"Coloring must cover every edge of K_{2 * self.n} exactly once ({missing} missing)")

    @property
    def vertex_count(self) -> int:
        return 2 * self.n

    def classes(self) -> Dict[int, List[Edge]]:
        """Color classes, each sorted."""
        found: Dict[int, List[Edge]] = {}
        for edge in sorted(self.colors):
            found.setdefault(self.colors[edge], []).append(edge)
        return found

    @property
    def q(self) -> int:
        return max(len(edges) for edges in self.classes().values())

    def disjoint_pairs(self) -> List[Tuple[Edge, Edge]]:
        """Vertex-disjoint monochromatic edge pairs, by color then edges."""
        pairs = []
        for color in sorted(self.classes()):
            for e, g in combinations(self.classes()[color], 2):
                if not set(e) & set(g):
                    pairs.append((e, g))
        return pairs

    def is_rainbow(self, state: MatchingState) -> bool:
        seen = set()
        for edge in state.edges:
            color = self.colors[edge]
            if color in seen:
                return False
            seen.add(color)
        return True

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"n": self.n, "edges": [[u, v, c] for (u, v), c in sorted(self.colors.items())]}
        if self.seed is not None:
            data["seed"] = self.seed
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ColoredGraph":
        """Parse ``{n, edges: [[u, v, color], ...]}``.

        Raises:
            InputError: On malformed entries, repeated edges or a non-complete graph
        """
        try:
            n = int(data["n"])
            colors: Dict[Edge, int] = {}
            for u, v, c in data["edges"]:
                u, v = int(u), int(v)
                if u == v or not (0 <= u < 2 * n and 0 <= v < 2 * n):
                    raise InputError(f"Invalid edge ({u}, {v}) for n={n}")
                edge = canonical_edge(u, v)
                if edge in colors:
                    raise InputError(f"Edge {edge} is colored twice")
                colors[edge] = int(c)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"Malformed coloring: {e}")
        return cls(n, colors, data.get("seed"))


def generate_coloring(n: int, q: int, seed: int) -> ColoredGraph:
    """Random coloring of K_2n whose color classes have exactly q edges
    (the last class takes the remainder)."""
    if q < 1:
        raise InputError(f"q must be positive, got {q}")
    edges = [canonical_edge(u, v) for u, v in combinations(range(2 * n), 2)]
    order = make_rng(seed).permutation(len(edges))
    colors = {edges[int(i)]: position // q for position, i in enumerate(order)}
    graph = ColoredGraph(n, colors, seed)
    logger.info(f"Generated coloring of K_{2 * n} with q={q}, {len(graph.classes())} colors (seed {seed})")
    return graph


def load_coloring(path: Union[str, Path], loader: Optional[ConfigLoader] = None) -> ColoredGraph:
    return ColoredGraph.from_dict((loader or ConfigLoader(load_env_file=False)).load_file(path))


def save_coloring(graph: ColoredGraph, path: Union[str, Path], loader: Optional[ConfigLoader] = None) -> bool:
    return (loader or ConfigLoader(load_env_file=False)).save_json(path, graph.to_dict())


def build_rainbow_instance(graph: ColoredGraph, max_states: int = EnumerationConfig.MAX_STATES) -> MatchingInstance:
    """Matching instance on K_2n with one flaw per disjoint monochromatic pair.

    The causality graph is the standard matching relation; ``inst.flaws``
    is the flaw index.
    """
    pairs = graph.disjoint_pairs()
    names = [f"c{graph.colors[e]}:{e[0]}-{e[1]},{g[0]}-{g[1]}" for e, g in pairs]
    inst = build_matching_instance(
        HostGraph.complete(graph.n), [[list(e), list(g)] for e, g in pairs],
        names=names, name=f"rainbow-n{graph.n}-q{graph.q}", max_states=max_states,
    )
    logger.info(f"Rainbow instance: n={graph.n}, q={graph.q}, |F|={inst.flaw_count}")
    return inst


def rainbow_from_dict(description: Dict[str, Any], max_states: int) -> MatchingInstance:
    """Factory builder for ``{"type": "rainbow", "coloring": ...}`` or an inline coloring."""
    coloring = description.get("coloring", description)
    if isinstance(coloring, str):
        graph = load_coloring(coloring)
    elif "edges" in coloring:
        graph = ColoredGraph.from_dict(coloring)
    else:
        try:
            graph = generate_coloring(int(coloring["n"]), int(coloring["q"]), int(coloring.get("seed", 0)))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"Rainbow description needs a coloring or n, q: {e}")
    return build_rainbow_instance(graph, max_states)
