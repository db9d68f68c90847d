"""Approximation algorithm for the traveling tournament problem with at most
two consecutive home or away games, for n = 4m + 2 teams."""
from .instance import Instance, InstanceStats, load_instance, make_instance, parse_instance, \
    render_instance, stats
from .metric_graph import christofides_cycle, min_perfect_matching, min_spanning_tree
from .numbering import Numbering, choose_numbering
from .oracle import brute_force_optimal
from .schedule import Game, Schedule, check_at_most, check_no_repeater, total_distance, \
    validate_drr
from .solver import BoundsReport, UnsupportedSize, solve

__all__ = [
    "BoundsReport", "Game", "Instance", "InstanceStats", "Numbering", "Schedule",
    "UnsupportedSize", "brute_force_optimal", "check_at_most", "check_no_repeater",
    "choose_numbering", "christofides_cycle", "load_instance", "make_instance",
    "min_perfect_matching", "min_spanning_tree", "parse_instance", "render_instance",
    "solve", "stats", "total_distance", "validate_drr",
]
