"""Finite-class laboratory for multiclass universal learning rates."""

from .core import (
    STAR,
    ConceptClass,
    FiniteDistribution,
    LabeledSample,
    distribution_error,
    is_realizable,
    parse_dist,
    parse_mcc,
    project,
    read_dist,
    read_mcc,
)
from .dimensions import (
    dimension_report,
    graph_dim,
    growth_function,
    gl_tree_depth,
    littlestone_dim_k,
    natarajan_dim,
    nl_tree_depth,
    vc_dim,
)
from .errors import ConstructionError, InputError, LimitError, ProtocolError, UniratesError
from .games import exp_game_value, exp_learner_strategy, nl_game_value, nl_learner_strategy
from .universal import learn_exponential, learn_linear

__all__ = [
    "STAR",
    "ConceptClass",
    "FiniteDistribution",
    "LabeledSample",
    "distribution_error",
    "is_realizable",
    "parse_dist",
    "parse_mcc",
    "project",
    "read_dist",
    "read_mcc",
    "dimension_report",
    "graph_dim",
    "growth_function",
    "gl_tree_depth",
    "littlestone_dim_k",
    "natarajan_dim",
    "nl_tree_depth",
    "vc_dim",
    "ConstructionError",
    "InputError",
    "LimitError",
    "ProtocolError",
    "UniratesError",
    "exp_game_value",
    "exp_learner_strategy",
    "nl_game_value",
    "nl_learner_strategy",
    "learn_exponential",
    "learn_linear",
]
