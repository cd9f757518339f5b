"""
lllcore.stable.swapping
-----------------------
Adjacent swaps of independent letters and forward canonicalization.

Two words are equivalent when one becomes the other by swapping adjacent
letters f, g with f ≇ g. Forward canonicalization moves each letter left
until it sits just after the last earlier segment holding a ≅ letter, then
sorts every segment by π; the result is the unique π-stable word of the
equivalence class. On walks every word swap is realized by SWAP, either
through the backward step of an atomic instance or through the SWAP map of
a commutativity check.
"""

from collections import deque
from dataclasses import dataclass
import logging
from typing import Dict, Hashable, List, Optional, Sequence, Set, Tuple, Union

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import CapabilityError, InputError, ResourceLimitError
from lllcore.core.graph import DependencyGraph, restrict_order
from lllcore.core.instance import ModelInstance
from lllcore.core.walk import Step, Walk, Word
from lllcore.verify.checks import build_swap_map

logger = logging.getLogger(__name__)


class SwapRealizer:
    """Realizes SWAP on walks of one instance."""

    def __init__(self, inst: ModelInstance, dep: DependencyGraph):
        self.inst = inst
        self.dep = dep
        self._swap_map: Optional[Dict] = None

    def _middle_atomic(self, sigma1: Hashable, f: int, g: int, sigma3: Hashable) -> Hashable:
        inst = self.inst
        middle = inst.backward_step(f, sigma3)
        if (middle is None or g not in inst.flaws_present(sigma1)
                or not inst.action_probability(g, sigma1, middle) > 0):
            raise CapabilityError(f"No SWAP for flaws {f}, {g} between {sigma1!r} and {sigma3!r}")
        return middle

    def _middle_mapped(self, key: Tuple) -> Hashable:
        if self._swap_map is None:
            try:
                self._swap_map = build_swap_map(self.inst, self.dep, strong=True)
            except CapabilityError:
                self._swap_map = build_swap_map(self.inst, self.dep, strong=False)
        try:
            return self._swap_map[key]
        except KeyError:
            raise CapabilityError(f"SWAP map has no entry for {key!r}")

    def swap(self, walk: Walk, index: int) -> Walk:
        """Swap steps ``index`` and ``index + 1`` (0-based).

        Raises:
            InputError: If the two flaws are ≅
            CapabilityError: If SWAP cannot be realized on this instance
        """
        if not 0 <= index < walk.length - 1:
            raise InputError(f"Cannot swap at position {index} of a walk with {walk.length} steps")
        first, second = walk.steps[index], walk.steps[index + 1]
        f, g = first.flaw, second.flaw
        if self.dep.cong(f, g):
            raise InputError(f"Flaws {f} and {g} are dependent and cannot be swapped")
        sigma1 = walk.state_before(index)
        if self.inst.atomic:
            middle = self._middle_atomic(sigma1, f, g, second.state)
        elif self.inst.enumerable:
            middle = self._middle_mapped((sigma1, f, first.state, g, second.state))
        else:
            raise CapabilityError(f"Instance '{self.inst.name}' is neither atomic nor enumerable; no SWAP")
        old = self.inst.action_probability(f, sigma1, first.state) * \
            self.inst.action_probability(g, first.state, second.state)
        new = self.inst.action_probability(g, sigma1, middle) * \
            self.inst.action_probability(f, middle, second.state)
        steps = walk.steps[:index] + (Step(g, middle), Step(f, second.state)) + walk.steps[index + 2:]
        return Walk(walk.start, steps, walk.prob / old * new)


@dataclass(frozen=True)
class CanonicalForm:
    """Result of forward canonicalization; ``swaps`` lists swap positions in order."""
    word: Word
    segments: Tuple[Tuple[int, ...], ...]
    swaps: Tuple[int, ...]
    walk: Optional[Walk] = None


def _canonical_word(dep: DependencyGraph, rank: Sequence[int], word: Sequence[int]) -> Tuple[List[int], List[int], List[int]]:
    current: List[int] = []
    lengths: List[int] = []
    swaps: List[int] = []
    for f in word:
        dep.check_flaw(f)
        position = len(current)
        current.append(f)
        # rightmost segment holding a letter ≅ f
        start = 0
        last_hit = -1
        for r, length in enumerate(lengths):
            if any(dep.cong(g, f) for g in current[start:start + length]):
                last_hit = r
            start += length
        if lengths and last_hit == len(lengths) - 1:
            lengths.append(1)
            continue
        if not lengths:
            lengths.append(1)
            continue
        # join the end of the segment after the last hit, passing only independent letters
        destination = sum(lengths[:last_hit + 2])
        for p in range(position - 1, destination - 1, -1):
            current[p], current[p + 1] = current[p + 1], current[p]
            swaps.append(p)
        lengths[last_hit + 1] += 1

    # sort each segment by π with adjacent swaps
    start = 0
    for length in lengths:
        for end in range(start + length - 1, start, -1):
            for p in range(start, end):
                if rank[current[p]] > rank[current[p + 1]]:
                    current[p], current[p + 1] = current[p + 1], current[p]
                    swaps.append(p)
        start += length
    return current, lengths, swaps


def forward_canonicalize(dep: DependencyGraph, order: Optional[Sequence[int]], item: Union[Walk, Sequence[int]],
                         inst: Optional[ModelInstance] = None) -> CanonicalForm:
    """Turn a word (or walk) into its equivalent π-stable form.

    Walks need ``inst`` to realize each swap; the returned walk has the
    canonical word, the same endpoints and a recomputed probability.

    Raises:
        CapabilityError: If a walk swap cannot be realized
    """
    rank = restrict_order(order, dep.flaw_count)
    is_walk = isinstance(item, Walk)
    word = item.word if is_walk else tuple(item)
    canonical, lengths, swaps = _canonical_word(dep, rank, word)

    segments = []
    start = 0
    for length in lengths:
        segments.append(tuple(canonical[start:start + length]))
        start += length

    walk = None
    if is_walk:
        if inst is None:
            raise InputError("Canonicalizing a walk needs its instance")
        realizer = SwapRealizer(inst, dep)
        walk = item
        for p in swaps:
            walk = realizer.swap(walk, p)
    logger.debug(f"Forward canonicalization of {list(word)}: {len(swaps)} swaps")
    return CanonicalForm(tuple(canonical), tuple(segments), tuple(swaps), walk)


def words_equivalent(dep: DependencyGraph, first: Sequence[int], second: Sequence[int]) -> bool:
    """W ≡ W′, decided by comparing canonical forms."""
    if sorted(first) != sorted(second):
        return False
    return forward_canonicalize(dep, None, first).word == forward_canonicalize(dep, None, second).word


def swap_closure(dep: DependencyGraph, word: Sequence[int], cap: int = EnumerationConfig.MAX_WORDS) -> Set[Word]:
    """Every word reachable by adjacent swaps of ≇ letters (breadth-first)."""
    start = tuple(word)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for p in range(len(current) - 1):
            a, b = current[p], current[p + 1]
            if dep.cong(a, b):
                continue
            swapped = current[:p] + (b, a) + current[p + 2:]
            if swapped not in seen:
                seen.add(swapped)
                if len(seen) > cap:
                    raise ResourceLimitError(f"Swap closure exceeds cap {cap}")
                queue.append(swapped)
    return seen
