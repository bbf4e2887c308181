"""LP/MILP engines, the post-hoc constraint checker and the exhaustive oracle."""

from __future__ import annotations

from ..errors import InvalidArgument
from .bnb import BnbNode, solve_milp
from .checker import violations
from .config import DEFAULT_TOLERANCES, Tolerances
from .highs import solve_milp_highs
from .oracle import MAX_ASSIGNMENTS, ObjectiveSpec, OracleResult, oracle_assign, search_space_size
from .result import LpSolution, format_solution
from .simplex import solve_lp, solve_lp_arrays

ENGINES = ("bnb", "highs")


def solve(prog, engine: str = "bnb", tol: Tolerances = DEFAULT_TOLERANCES) -> LpSolution:
    """Solve ``prog`` with its binaries integral using the named engine.

    ``bnb`` is the in-repo simplex with branch-and-bound; ``highs`` hands the
    same arrays to HiGHS.
    """
    if engine == "bnb":
        return solve_milp(prog, tol)
    if engine == "highs":
        return solve_milp_highs(prog, tol)
    raise InvalidArgument(f"unknown engine {engine!r}; expected one of {ENGINES}")


__all__ = [
    "BnbNode", "DEFAULT_TOLERANCES", "ENGINES", "LpSolution", "MAX_ASSIGNMENTS", "ObjectiveSpec",
    "OracleResult", "Tolerances", "format_solution", "oracle_assign", "search_space_size", "solve",
    "solve_lp", "solve_lp_arrays", "solve_milp", "solve_milp_highs", "violations",
]
