"""Finite discrete dynamical systems: semiring arithmetic and equation solvers."""
from .core import (
    DEFAULT_SIZE_CAP,
    CanonForm,
    Component,
    EmptySystemError,
    Fdds,
    SizeOverflow,
    cycle_lengths,
    format_fdds,
    is_isomorphic,
    parse_fdds,
    product,
    restrict_dividing,
    restrict_exact,
    sub_components,
)
from .cycles import (
    Reason,
    SolveOutcome,
    SolveStep,
    format_trace,
    rewrite_solution,
    solve_linear_compact,
    solve_linear_explicit,
    solve_linear_explicit_fast,
    solve_poly_compact,
    solve_poly_explicit,
)
from .cyclesum import (
    CycleSum,
    anti_lcm,
    cs_add,
    cs_is_subset,
    cs_product,
    cs_size,
    cs_sub,
    cs_to_fdds,
    fdds_to_cs,
    format_cyclesum,
    parse_cyclesum,
)
from .enumerate import (
    EnumerationBudgetExceeded,
    InvariantViolation,
    brute_force_solve,
    count_extreme_solutions,
)
from .general import GeneralOutcome, candidate_cycle_length, min_tree_divide, solve_poly_general
from .poly import Poly, poly_eval_capped
from .unroll import UnrollTree, deroll, tree_compare, tree_product, unroll, unroll_truncated

__all__ = [name for name in dir() if not name.startswith("_")]
