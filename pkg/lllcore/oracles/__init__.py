"""Built-in oracles: explicit tables, the variable model and perfect matchings."""

from lllcore.oracles.explicit import ExplicitInstance
from lllcore.oracles.variable import VariableFlaw, VariableModel, build_variable_model
from lllcore.oracles.matchings import (
    HostGraph, MatchingState, MatchingFlaw, MatchingInstance,
    hat_psi, swap_sigma, neighbors_N, sample_action, support_of_action, backward_step_psi,
    build_matching_instance, count_perfect_matchings, enumerate_perfect_matchings,
    sample_uniform_matching, flaws_related, host_from_dict,
)
from lllcore.oracles.factory import InstanceFactory

__all__ = [
    'ExplicitInstance',
    'VariableFlaw', 'VariableModel', 'build_variable_model',
    'HostGraph', 'MatchingState', 'MatchingFlaw', 'MatchingInstance',
    'hat_psi', 'swap_sigma', 'neighbors_N', 'sample_action', 'support_of_action', 'backward_step_psi',
    'build_matching_instance', 'count_perfect_matchings', 'enumerate_perfect_matchings',
    'sample_uniform_matching', 'flaws_related', 'host_from_dict',
    'InstanceFactory',
]
