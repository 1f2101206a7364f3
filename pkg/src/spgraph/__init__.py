"""Single-peaked preferences on graphs."""

from .flow import flow_tree_recognize
from .lp import build_lp_degree, build_lp_sp, build_lp_sp2, lp_path_recognize, lp_tree_recognize, simplex_solve
from .mallows import MallowsAnalytics, MallowsModel, expected_necessary_edges, kendall_tau, prob_first_two, sample_profile
from .profile import Graph, Profile, Ranking, is_compatible, is_traversal, necessary_edges, parse_soc, serialize_soc
from .recognition import (
    ConsistencyError,
    RecognitionResult,
    Verdict,
    recognize_cycle,
    recognize_path,
    recognize_pseudotree,
    recognize_tree,
)
from .solver import Objective, branch_and_bound, brute_force, export_model, solve

__all__ = [
    "ConsistencyError",
    "Graph",
    "MallowsAnalytics",
    "MallowsModel",
    "Objective",
    "Profile",
    "Ranking",
    "RecognitionResult",
    "Verdict",
    "branch_and_bound",
    "brute_force",
    "build_lp_degree",
    "build_lp_sp",
    "build_lp_sp2",
    "expected_necessary_edges",
    "export_model",
    "flow_tree_recognize",
    "is_compatible",
    "is_traversal",
    "kendall_tau",
    "lp_path_recognize",
    "lp_tree_recognize",
    "necessary_edges",
    "parse_soc",
    "prob_first_two",
    "recognize_cycle",
    "recognize_path",
    "recognize_pseudotree",
    "recognize_tree",
    "sample_profile",
    "serialize_soc",
    "simplex_solve",
    "solve",
]
