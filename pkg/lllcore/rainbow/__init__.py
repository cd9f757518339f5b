"""Rainbow perfect matchings of edge-colored complete graphs."""

from lllcore.oracles.factory import InstanceFactory
from lllcore.rainbow.coloring import (
    ColoredGraph, generate_coloring, load_coloring, save_coloring, build_rainbow_instance, rainbow_from_dict,
)
from lllcore.rainbow.params import (
    rainbow_mu, rainbow_theta, neighbourhood_bound, compute_params, check_neighbourhood_counts,
)
from lllcore.rainbow.experiment import (
    CSV_COLUMNS, tail_profile, summarize, run_rainbow_experiment, write_trials_csv,
)

InstanceFactory.register_instance_type('rainbow', rainbow_from_dict)

__all__ = [
    'ColoredGraph', 'generate_coloring', 'load_coloring', 'save_coloring', 'build_rainbow_instance',
    'rainbow_from_dict',
    'rainbow_mu', 'rainbow_theta', 'neighbourhood_bound', 'compute_params', 'check_neighbourhood_counts',
    'CSV_COLUMNS', 'tail_profile', 'summarize', 'run_rainbow_experiment', 'write_trials_csv',
]
