"""Stochastic matching sparsifiers, EDCS and expected-matching estimators."""

from ._stochmatch import (
    BudgetError,
    InputError,
    ParseError,
    StochasticGraph,
    approximation_ratio,
    edcs,
    expected_matching,
    format_graph,
    matching_probabilities,
    max_weight_matching,
    parse_graph,
    read_graph,
    run_experiment,
    sparsify,
)

__all__ = [
    "BudgetError",
    "InputError",
    "ParseError",
    "StochasticGraph",
    "approximation_ratio",
    "edcs",
    "expected_matching",
    "format_graph",
    "matching_probabilities",
    "max_weight_matching",
    "parse_graph",
    "read_graph",
    "run_experiment",
    "sparsify",
]
