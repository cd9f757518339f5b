"""
lllcore.stable.backward
-----------------------
Backward canonicalization of a set of walks.

Each walk τ gets its DAG, member set W_τ and word Stab_π(τ); all three are
unchanged by valid swaps. A pair (f, g) of adjacent named flaws with f ≇ g
is swappable when f ∉ W_τ and g ∈ W_τ, or both are in W_τ and g comes
before f in Stab_π(τ). k(τ) is the position of the rightmost swappable pair
(the index of g), or 0. Every round swaps the pair at k in exactly the walks
whose k(τ) equals the largest k over the set; the loop stops when that
maximum is 0. At the end Stab_π(τ) is a prefix of every walk.
"""

from dataclasses import dataclass
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from lllcore.core.errors import ResourceLimitError
from lllcore.core.graph import DependencyGraph
from lllcore.core.instance import ModelInstance
from lllcore.core.walk import NamedFlaw, Walk, named_word
from lllcore.models import CanonicalizationAudit
from lllcore.stable.bad import check_valid_set
from lllcore.stable.dag import build_walk_dag, stab_of_walk
from lllcore.stable.swapping import SwapRealizer
from lllcore.stable.words import is_pi_stable, root_of_word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BackwardResult:
    """Mapped walks in input order, their Stab_π words and the audit."""
    walks: Tuple[Walk, ...]
    stabs: Tuple[Tuple[NamedFlaw, ...], ...]
    audit: CanonicalizationAudit


class _Tracked:
    """A walk being rewritten, with the swap-invariant data computed once."""

    def __init__(self, dep: DependencyGraph, order: Optional[Sequence[int]], walk: Walk, target: Optional[int]):
        self.walk = walk
        self.named: List[NamedFlaw] = list(named_word(walk.word))
        self.members = build_walk_dag(dep, walk, target).members
        self.stab = stab_of_walk(dep, order, walk, target)
        self.stab_position: Dict[NamedFlaw, int] = {n: i for i, n in enumerate(self.stab)}

    def k(self, dep: DependencyGraph) -> int:
        for j in range(len(self.named) - 1, 0, -1):
            f, g = self.named[j - 1], self.named[j]
            if dep.cong(f[0], g[0]) or g not in self.members:
                continue
            if f not in self.members or self.stab_position[g] < self.stab_position[f]:
                return j
        return 0

    def swap(self, realizer: SwapRealizer, j: int) -> None:
        self.walk = realizer.swap(self.walk, j - 1)
        self.named[j - 1], self.named[j] = self.named[j], self.named[j - 1]


def _prefix_free(walks: Sequence[Walk]) -> bool:
    keys = {(w.start, w.steps) for w in walks}
    return not any((w.start, w.steps[:i]) in keys for w in walks for i in range(w.length))


def backward_canonicalize_set(inst: ModelInstance, dep: DependencyGraph, order: Optional[Sequence[int]],
                              walks: Sequence[Walk], target: Optional[int] = None,
                              max_rounds: Optional[int] = None) -> BackwardResult:
    """Map a valid set of walks so that each starts with its Stab_π word.

    Args:
        inst: Instance realizing SWAP (atomic, or enumerable and commutative)
        dep: Causality graph
        order: Flaw order π (identity when None)
        walks: A valid set: one deterministic strategy, prefix-free
        target: f̂, or None for the ∅ mode; in flaw mode every walk must contain it

    Raises:
        InputError: If the set is not valid or a walk lacks ``target``
        CapabilityError: If a required swap cannot be realized
    """
    check_valid_set(walks)
    tracked = [_Tracked(dep, order, w, target) for w in walks]
    realizer = SwapRealizer(inst, dep)
    # every swap fixes at least one inversion, so this bounds a correct run
    limit = max_rounds if max_rounds is not None else sum(w.length ** 2 for w in walks) + 1

    rounds = 0
    swaps = 0
    while True:
        ks = [item.k(dep) for item in tracked]
        k = max(ks, default=0)
        if k == 0:
            break
        rounds += 1
        if rounds > limit:
            raise ResourceLimitError(f"Backward canonicalization did not settle within {limit} rounds")
        for item, item_k in zip(tracked, ks):
            if item_k == k:
                item.swap(realizer, k)
                swaps += 1
        logger.debug(f"Backward round {rounds}: swapped at position {k}")

    audit = _audit(dep, order, tracked, target, rounds, swaps)
    logger.info(f"Backward canonicalization of {len(walks)} walks: {rounds} rounds, {swaps} swaps, "
                f"{'passed' if audit.passed else 'FAILED'}")
    return BackwardResult(tuple(t.walk for t in tracked), tuple(t.stab for t in tracked), audit)


def _audit(dep: DependencyGraph, order: Optional[Sequence[int]], tracked: Sequence[_Tracked],
           target: Optional[int], rounds: int, swaps: int) -> CanonicalizationAudit:
    failures = []
    images = [t.walk for t in tracked]
    injective = len({(w.start, w.steps) for w in images}) == len(images)
    if not injective:
        failures.append({"reason": "collision"})

    pi_stable = True
    prefix = True
    groups: Dict[Tuple[NamedFlaw, ...], List[Walk]] = {}
    for item in tracked:
        reverse = tuple(f for f, _ in reversed(item.stab))
        ok = is_pi_stable(dep, order, reverse)
        if ok and target is not None:
            ok = root_of_word(dep, reverse) == frozenset([target])
        if not ok:
            pi_stable = False
            failures.append({"reason": "REV[Stab] not pi-stable", "word": list(item.walk.word)})
        if tuple(item.named[:len(item.stab)]) != item.stab:
            prefix = False
            failures.append({"reason": "Stab not a prefix", "word": list(item.walk.word)})
        groups.setdefault(item.stab, []).append(item.walk)

    groups_free = all(_prefix_free(group) for group in groups.values())
    if not groups_free:
        failures.append({"reason": "group not prefix-free"})
    return CanonicalizationAudit(
        passed=injective and pi_stable and prefix and groups_free,
        walk_count=len(images), swap_rounds=rounds, swaps=swaps,
        injective=injective, pi_stable_prefixes=pi_stable, prefix_property=prefix,
        groups_prefix_free=groups_free, failures=failures[:25],
    )
