"""Cluster, symmetric and Shearer certificates and the runtime bounds T."""

from lllcore.conditions.lll import (
    LLLParams, MODE_CLUSTER, MODE_SHEARER, VARIANTS,
    evaluate_cluster_theta, evaluate_symmetric_theta, theta_report,
    ShearerTable, shearer_q, check_shearer, shearer_p_from_cluster, tightest_theta, bound_T,
)

__all__ = [
    'LLLParams', 'MODE_CLUSTER', 'MODE_SHEARER', 'VARIANTS',
    'evaluate_cluster_theta', 'evaluate_symmetric_theta', 'theta_report',
    'ShearerTable', 'shearer_q', 'check_shearer', 'shearer_p_from_cluster', 'tightest_theta', 'bound_T',
]
