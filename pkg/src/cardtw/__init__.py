"""Answer-set reasoning for weight and cardinality programs over tree decompositions."""

from .decomposition import (
    IncidenceGraph,
    NiceDecomposition,
    TreeDecomposition,
    build_incidence_graph,
    heuristic_decompose,
    normalize,
    read_td,
    validate_nice,
    validate_td,
    write_td,
)
from .dp import compute_tables, solve_consistency, solve_reasoning
from .pipeline import Report, SolveRequest, run
from .program import (
    Constraint,
    Literal,
    Program,
    Rule,
    enumerate_answer_sets,
    is_stable,
    is_stable_ordered,
)
from .syntax import parse_program, print_program
from .transforms import clamp_weights, mmo_to_pcc, partition_to_pwc, unary_pwc_to_pcc

__all__ = [
    "Constraint",
    "IncidenceGraph",
    "Literal",
    "NiceDecomposition",
    "Program",
    "Report",
    "Rule",
    "SolveRequest",
    "TreeDecomposition",
    "build_incidence_graph",
    "clamp_weights",
    "compute_tables",
    "enumerate_answer_sets",
    "heuristic_decompose",
    "is_stable",
    "is_stable_ordered",
    "mmo_to_pcc",
    "normalize",
    "parse_program",
    "partition_to_pwc",
    "print_program",
    "read_td",
    "run",
    "solve_consistency",
    "solve_reasoning",
    "unary_pwc_to_pcc",
    "validate_nice",
    "validate_td",
    "write_td",
]
