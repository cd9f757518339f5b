"""Stable words, swapping mappings, walk DAGs and bad-walk enumeration."""

from lllcore.stable.words import (
    StablePartition, partition_stable, is_pi_stable, root_of_word, sequence_to_word, word_has_walk,
    enumerate_stab_pi, enumerate_strongly_stable, root_weight, verify_stab_counting,
)
from lllcore.stable.dag import WalkDag, build_walk_dag, stab_of_walk, longest_chain
from lllcore.stable.swapping import (
    CanonicalForm, SwapRealizer, forward_canonicalize, words_equivalent, swap_closure,
)
from lllcore.stable.bad import (
    MODE_FULL, MODE_PARALLEL, enumerate_bad, bad_mass, check_bad_chain_property, check_forward_bijection,
    word_walk_mass, check_word_mass_bound, check_valid_set,
)
from lllcore.stable.backward import BackwardResult, backward_canonicalize_set

__all__ = [
    'StablePartition', 'partition_stable', 'is_pi_stable', 'root_of_word', 'sequence_to_word',
    'word_has_walk', 'enumerate_stab_pi', 'enumerate_strongly_stable', 'root_weight', 'verify_stab_counting',
    'WalkDag', 'build_walk_dag', 'stab_of_walk', 'longest_chain',
    'CanonicalForm', 'SwapRealizer', 'forward_canonicalize', 'words_equivalent', 'swap_closure',
    'MODE_FULL', 'MODE_PARALLEL', 'enumerate_bad', 'bad_mass', 'check_bad_chain_property',
    'check_forward_bijection', 'word_walk_mass', 'check_word_mass_bound', 'check_valid_set',
    'BackwardResult', 'backward_canonicalize_set',
]
