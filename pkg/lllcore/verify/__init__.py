"""Structural checkers for enumerable instances and the charges λ they certify."""

from lllcore.verify.checks import (
    check_atomicity, check_causality_graph, infer_minimal_causality,
    check_weak_commutativity, check_strong_commutativity, check_weak_commutativity_atomic,
    check_regenerating, check_psi_causality, build_swap_map, minimal_lambda, flaw_charges,
)

__all__ = [
    'check_atomicity', 'check_causality_graph', 'infer_minimal_causality',
    'check_weak_commutativity', 'check_strong_commutativity', 'check_weak_commutativity_atomic',
    'check_regenerating', 'check_psi_causality', 'build_swap_map', 'minimal_lambda', 'flaw_charges',
]
