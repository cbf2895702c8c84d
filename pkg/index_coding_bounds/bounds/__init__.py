"""Inner bounds (composite coding LPs) and outer bounds."""

from .decoding import (
    all_server_grouping,
    decoding_space,
    parse_delta_file,
    parse_groups_file,
    singleton_split_grouping,
)
from .growth import grow_delta
from .inner import (
    centralized_cc_enhanced,
    centralized_cc_original,
    distributed_cc_allserver,
    distributed_cc_fractional,
    distributed_cc_hull,
    inner_bound,
)
from .outer import best_outer, build_thm1_lp, thm1_polymatroid, thm2_non_minimal_scan, thm2_sum_bound

__all__ = [
    "all_server_grouping",
    "best_outer",
    "build_thm1_lp",
    "centralized_cc_enhanced",
    "centralized_cc_original",
    "decoding_space",
    "distributed_cc_allserver",
    "distributed_cc_fractional",
    "distributed_cc_hull",
    "grow_delta",
    "inner_bound",
    "parse_delta_file",
    "parse_groups_file",
    "singleton_split_grouping",
    "thm1_polymatroid",
    "thm2_non_minimal_scan",
    "thm2_sum_bound",
]
