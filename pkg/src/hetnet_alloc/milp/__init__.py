"""MILP programs for the three allocation approaches and their SINR bookkeeping."""

from .builders import (
    BIG_M_MARGIN, AllocationVariables, FeasibilityWarning, add_core_constraints, add_log_terms,
    add_reliability, add_sinr_coupling, big_m_bound, build_pf, build_wsrmax, default_tangents,
    log_users, sinr_range,
)
from .patterns import APPROACHES, build_pattern_program, enumerate_patterns, pattern_sinr, undominated
from .program import Constraint, LpArrays, MilpProgram, Sense, Variable, VarKind, read_lp, write_lp
from .sinr import interference, sinr_direct, sinr_matrix, user_sinr
from .solution import (
    AssignmentSolution, audit_assignment, extract_solution, infeasible_solution, lift_assignment,
)
from .tangents import N_TANGENTS, TangentSet, geometric_tangents

__all__ = [
    "APPROACHES", "AllocationVariables", "AssignmentSolution", "BIG_M_MARGIN", "Constraint",
    "FeasibilityWarning", "LpArrays", "MilpProgram", "N_TANGENTS", "Sense", "TangentSet", "VarKind",
    "Variable", "add_core_constraints", "add_log_terms", "add_reliability", "add_sinr_coupling",
    "audit_assignment", "big_m_bound", "build_pattern_program", "build_pf", "build_wsrmax",
    "default_tangents", "enumerate_patterns", "extract_solution", "geometric_tangents",
    "infeasible_solution", "interference", "lift_assignment", "log_users", "pattern_sinr", "read_lp", "sinr_direct",
    "sinr_matrix", "sinr_range", "undominated", "user_sinr", "write_lp",
]
