"""Core data model: errors, numbers, randomness, causality graphs, instances and walks."""

from lllcore.core.errors import (
    LLLCoreError, InputError, ContractViolationError, StrategyContractError,
    CausalityGraphError, ResourceLimitError, CapabilityError, NoCertificateError,
)
from lllcore.core.graph import (
    DependencyGraph, gamma, is_independent, enumerate_independent_subsets,
    independence_sum, from_mask, iter_bits,
)
from lllcore.core.instance import ModelInstance
from lllcore.core.walk import (
    Step, Walk, WalkBuilder, walk_probability, validate_walk, lambda_of_word, named_word,
)

__all__ = [
    'LLLCoreError', 'InputError', 'ContractViolationError', 'StrategyContractError',
    'CausalityGraphError', 'ResourceLimitError', 'CapabilityError', 'NoCertificateError',
    'DependencyGraph', 'gamma', 'is_independent', 'enumerate_independent_subsets',
    'independence_sum', 'from_mask', 'iter_bits',
    'ModelInstance',
    'Step', 'Walk', 'WalkBuilder', 'walk_probability', 'validate_walk', 'lambda_of_word', 'named_word',
]
