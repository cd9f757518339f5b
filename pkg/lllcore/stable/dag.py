"""Walk DAGs and the π-stable sequence read off a walk.

Nodes are the named flaws of a walk in order; there is an edge from an
earlier to a later node when their flaws are ≅. With a target flaw f̂ the
DAG is cut to the nodes that reach the last occurrence of f̂ (the root);
without one every node is kept. A node's depth is the number of nodes on
the longest path from it to the root (or to any sink).
"""

from dataclasses import dataclass
import logging
from typing import Dict, FrozenSet, Optional, Sequence, Tuple, Union

import networkx as nx

from lllcore.core.errors import InputError
from lllcore.core.graph import DependencyGraph, restrict_order
from lllcore.core.walk import NamedFlaw, Walk, named_word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkDag:
    """DAG of a walk. ``members`` and ``depth`` are keyed by named flaw."""
    named: Tuple[NamedFlaw, ...]
    graph: nx.DiGraph
    root: Optional[NamedFlaw]
    members: FrozenSet[NamedFlaw]
    depth: Dict[NamedFlaw, int]

    @property
    def height(self) -> int:
        return max(self.depth.values(), default=0)


def _word_of(item: Union[Walk, Sequence[int]]) -> Tuple[int, ...]:
    return item.word if isinstance(item, Walk) else tuple(item)


def build_walk_dag(dep: DependencyGraph, item: Union[Walk, Sequence[int]], target: Optional[int] = None) -> WalkDag:
    """Build the DAG of a walk or word.

    Args:
        dep: Causality graph
        item: Walk or word
        target: f̂, or None for the ∅ mode

    Raises:
        InputError: If ``target`` does not occur in the word
    """
    word = _word_of(item)
    for f in word:
        dep.check_flaw(f)
    named = named_word(word)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(word)))
    for i in range(len(word)):
        for k in range(i + 1, len(word)):
            if dep.cong(word[i], word[k]):
                graph.add_edge(i, k)

    if target is None:
        keep = set(range(len(word)))
        root_index = None
    else:
        occurrences = [i for i, f in enumerate(word) if f == target]
        if not occurrences:
            raise InputError(f"Target flaw {target} does not occur in the walk")
        root_index = occurrences[-1]
        keep = nx.ancestors(graph, root_index) | {root_index}

    depth: Dict[int, int] = {}
    # indices are a topological order, so walk them backwards
    for i in sorted(keep, reverse=True):
        below = [depth[k] for k in graph.successors(i) if k in keep]
        depth[i] = 1 + max(below, default=0)

    return WalkDag(
        named=named,
        graph=graph,
        root=named[root_index] if root_index is not None else None,
        members=frozenset(named[i] for i in keep),
        depth={named[i]: d for i, d in depth.items()},
    )


def stab_of_walk(dep: DependencyGraph, order: Optional[Sequence[int]], item: Union[Walk, Sequence[int]],
                 target: Optional[int] = None) -> Tuple[NamedFlaw, ...]:
    """Stab_π(τ) = W_s … W₁ where I_r holds the nodes of depth r, each listed in decreasing π-order."""
    dag = build_walk_dag(dep, item, target)
    rank = restrict_order(order, dep.flaw_count)
    result = []
    for level in range(dag.height, 0, -1):
        nodes = [n for n, d in dag.depth.items() if d == level]
        result.extend(sorted(nodes, key=lambda n: rank[n[0]], reverse=True))
    return tuple(result)


def longest_chain(dep: DependencyGraph, item: Union[Walk, Sequence[int]]) -> int:
    """Length (in letters) of the longest subsequence u₁…u_k with u_i ≅ u_{i+1}."""
    word = _word_of(item)
    if not word:
        return 0
    return nx.dag_longest_path_length(build_walk_dag(dep, word).graph) + 1
