"""Workbench for involutive categories, Möbius graphs, and surface words."""

from ._klein import (
    bundled_example_names,
    check_category,
    closed_state_equals_normalized,
    differential_word,
    evaluate_word,
    graph_type,
    graphs_isomorphic,
    homology_table,
    moduli_nonempty,
    normalize_word,
    reduce_graph,
)

__all__ = [
    "bundled_example_names",
    "check_category",
    "closed_state_equals_normalized",
    "differential_word",
    "evaluate_word",
    "graph_type",
    "graphs_isomorphic",
    "homology_table",
    "moduli_nonempty",
    "normalize_word",
    "reduce_graph",
]
