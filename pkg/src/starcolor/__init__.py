"""Exact star coloring: brute force, neighborhood diversity, twin cover and clique-width solvers."""

from .errors import (BudgetExceeded, ContractViolation, InternalConsistencyError, ParameterError, ParseError,
                     StarColorError)
from .graph import Coloring, Graph, StarVerdict, is_star_coloring, parse_dimacs, partial_star_check
from .nd import solve_nd
from .oracle import oracle_chromatic, oracle_feasible
from .twincover import solve_tc
from .cwdp import solve_cw
from .wexpr import parse_wexpr

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "Coloring", "ContractViolation", "Graph", "InternalConsistencyError", "ParameterError",
    "ParseError", "StarColorError", "StarVerdict", "is_star_coloring", "oracle_chromatic", "oracle_feasible",
    "parse_dimacs", "parse_wexpr", "partial_star_check", "solve_cw", "solve_nd", "solve_tc",
]
