"""
lllcore.stable.words
--------------------
Stable words, π-stable words and their enumeration.

A word is stable when its greedy partition W₁…W_s has independent,
non-empty segments with I_{r+1} ⊆ Γ⁺(I_r). The greedy rule starts a new
segment exactly when the next letter is ≅ some letter of the last segment.
A π-stable word additionally lists each segment in increasing π-order, so
π-stable words correspond one to one with stable set sequences.
"""

from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import InputError, ResourceLimitError
from lllcore.core.graph import DependencyGraph, enumerate_independent_subsets, from_mask, restrict_order
from lllcore.core.instance import ModelInstance
from lllcore.core.numeric import Prob, leq
from lllcore.core.walk import Word, lambda_of_word
from lllcore.conditions.lll import MODE_SHEARER, LLLParams, shearer_q, tightest_theta
from lllcore.models import StabCountingReport

logger = logging.getLogger(__name__)

SetSequence = Tuple[FrozenSet[int], ...]


@dataclass(frozen=True)
class StablePartition:
    """Greedy partition of a word. ``failed_at`` is the 1-based index of the first bad letter."""
    success: bool
    segments: Tuple[Tuple[int, ...], ...]
    failed_at: Optional[int] = None

    @property
    def sets(self) -> SetSequence:
        return tuple(frozenset(segment) for segment in self.segments)

    @property
    def root(self) -> FrozenSet[int]:
        return frozenset(self.segments[0]) if self.segments else frozenset()


def partition_stable(dep: DependencyGraph, word: Sequence[int]) -> StablePartition:
    """Greedy stable partition of ``word``.

    Raises:
        InputError: If a letter is not a flaw of ``dep``
    """
    segments: List[List[int]] = []
    for index, f in enumerate(word, start=1):
        dep.check_flaw(f)
        if not segments:
            segments.append([f])
            continue
        last = segments[-1]
        if any(dep.cong(g, f) for g in last):
            if not dep.gamma_mask(dep.to_mask(last), plus=True) >> f & 1:
                return StablePartition(False, tuple(map(tuple, segments)), index)
            segments.append([f])
        else:
            if len(segments) >= 2 and not dep.gamma_mask(dep.to_mask(segments[-2]), plus=True) >> f & 1:
                return StablePartition(False, tuple(map(tuple, segments)), index)
            last.append(f)
    return StablePartition(True, tuple(map(tuple, segments)))


def is_pi_stable(dep: DependencyGraph, order: Optional[Sequence[int]], word: Sequence[int]) -> bool:
    """Stable, with every segment strictly increasing under π."""
    partition = partition_stable(dep, word)
    if not partition.success:
        return False
    rank = restrict_order(order, dep.flaw_count)
    return all(rank[a] < rank[b] for segment in partition.segments for a, b in zip(segment, segment[1:]))


def root_of_word(dep: DependencyGraph, word: Sequence[int]) -> FrozenSet[int]:
    """R_W, the first segment of the stable partition (∅ for the empty word)."""
    return partition_stable(dep, word).root


def _set_sequences(dep: DependencyGraph, root: FrozenSet[int], max_len: int, strong: bool,
                   cap: int) -> Iterator[SetSequence]:
    """Sequences (I₁ = root, I₂, …) of non-empty independent sets with
    I_{r+1} ⊆ Γ⁺(I_r) (Γ(I_r) when ``strong``) and total size ≤ max_len."""
    visited = 0

    def extend(sequence: SetSequence, total: int) -> Iterator[SetSequence]:
        nonlocal visited
        visited += 1
        if visited > cap:
            raise ResourceLimitError(f"Stable sequence enumeration exceeds cap {cap}")
        yield sequence
        pool = from_mask(dep.gamma_mask(dep.to_mask(sequence[-1]), plus=not strong))
        for subset in enumerate_independent_subsets(dep, pool, cap):
            if subset and total + len(subset) <= max_len:
                yield from extend(sequence + (subset,), total + len(subset))

    if len(root) <= max_len:
        yield from extend((root,), len(root))


def sequence_to_word(sequence: SetSequence, rank: Sequence[int]) -> Word:
    return tuple(f for segment in sequence for f in sorted(segment, key=lambda g: rank[g]))


def word_has_walk(inst: ModelInstance, word: Sequence[int]) -> bool:
    """True iff some walk (from any state of Ω) follows ``word``."""
    current = set(inst.states())
    for f in word:
        current = {t for s in current if f in inst.flaws_present(s) for t, _ in inst.action_support(f, s)}
        if not current:
            return False
    return True


def enumerate_stab_pi(inst: Optional[ModelInstance], dep: DependencyGraph, order: Optional[Sequence[int]],
                      root: Sequence[int], t: int, max_len: int,
                      cap: int = EnumerationConfig.MAX_WORDS) -> List[Word]:
    """π-stable words with root ``root`` and t ≤ |W| ≤ max_len.

    With an instance, a word is kept only when some walk follows W or its
    reverse. Without one, the result is not the full set of π-stable words:
    only words whose segment sequence is strongly stable (I_{r+1} ⊆ Γ(I_r)
    rather than Γ⁺(I_r)) are returned. Every word some walk can follow is
    among them.

    Raises:
        ResourceLimitError: When more than ``cap`` candidates are generated
    """
    root_set = frozenset(root)
    dep.to_mask(root_set)
    rank = restrict_order(order, dep.flaw_count)
    if not dep.is_independent_mask(dep.to_mask(root_set)):
        return []
    if not root_set:
        return [()] if t <= 0 else []

    words = []
    for sequence in _set_sequences(dep, root_set, max_len, strong=inst is None, cap=cap):
        word = sequence_to_word(sequence, rank)
        if len(word) < t:
            continue
        if inst is not None and not (word_has_walk(inst, word) or word_has_walk(inst, word[::-1])):
            continue
        words.append(word)
    words.sort(key=lambda w: (len(w), w))
    logger.debug(f"Stab_pi(root={sorted(root_set)}, t={t}, max_len={max_len}): {len(words)} words")
    return words


def enumerate_strongly_stable(dep: DependencyGraph, root: Sequence[int], t: int, max_len: int,
                              cap: int = EnumerationConfig.MAX_WORDS) -> List[SetSequence]:
    """Strongly stable sequences with I₁ = root and t ≤ Σ|I_r| ≤ max_len.

    The empty root gives only the sequence (∅).
    """
    root_set = frozenset(root)
    if not dep.is_independent_mask(dep.to_mask(root_set)):
        return []
    if not root_set:
        return [(frozenset(),)] if t <= 0 else []
    found = [seq for seq in _set_sequences(dep, root_set, max_len, strong=True, cap=cap)
             if sum(len(s) for s in seq) >= t]
    return found


def root_weight(dep: DependencyGraph, params: LLLParams, root: FrozenSet[int]) -> Prob:
    """μ(R): Π μ_f in cluster mode, q_R/q_∅ in Shearer mode."""
    if params.mode == MODE_SHEARER:
        table = shearer_q(dep, params.p)
        return table[root] / table.q_empty
    return math.prod((params.mu[f] for f in root), start=Fraction(1))


def verify_stab_counting(dep: DependencyGraph, params: LLLParams, root: Sequence[int], t: int, max_len: int,
                         inst: Optional[ModelInstance] = None, order: Optional[Sequence[int]] = None,
                         cap: int = EnumerationConfig.MAX_WORDS) -> StabCountingReport:
    """Partial sums Σ λ_W over Stab_π(R, t) and Σ λ_φ over strongly stable
    sequences, both against μ(R)·θ^t.

    Words longer than ``max_len`` are not enumerated; their total is at most
    the reported ``tail_bound`` = μ(R)·θ^{max(t, max_len+1)}.
    """
    if t < 0 or max_len < t:
        raise InputError(f"Need 0 <= t <= max_len, got t={t}, max_len={max_len}")
    root_set = frozenset(root)
    theta = tightest_theta(dep, params)
    weight = root_weight(dep, params, root_set)
    bound = weight * theta ** t

    words = enumerate_stab_pi(inst, dep, order, root_set, t, max_len, cap)
    word_sum = sum((lambda_of_word(params.lambda_, w) for w in words), Fraction(0))

    sequences = enumerate_strongly_stable(dep, root_set, t, max_len, cap)
    sequence_sum = sum(
        (lambda_of_word(params.lambda_, [f for s in seq for f in s]) for seq in sequences), Fraction(0)
    )
    report = StabCountingReport(
        root=sorted(root_set), t=t, max_len=max_len, bound=float(bound),
        word_count=len(words), word_sum=float(word_sum), words_passed=leq(word_sum, bound),
        strongly_stable_count=len(sequences), strongly_stable_sum=float(sequence_sum),
        strongly_stable_passed=leq(sequence_sum, bound),
        tail_bound=float(weight * theta ** max(t, max_len + 1)),
        witnessed=inst is not None,
    )
    logger.info(f"Stable counting R={sorted(root_set)} t={t}: words {float(word_sum):.6g}, "
                f"sequences {float(sequence_sum):.6g}, bound {float(bound):.6g}")
    return report
