"""HiGHS backend via :func:`scipy.optimize.milp`, for programs too large for the dense engine."""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from ..status import Status
from .config import DEFAULT_TOLERANCES, Tolerances
from .result import LpSolution

_STATUS = {0: Status.OPTIMAL, 1: Status.ITERATION_LIMIT, 2: Status.INFEASIBLE, 3: Status.UNBOUNDED}


def _scaled(arr):
    """Scale bounded continuous columns to [0, 1] and rows to unit max-norm."""
    col = np.ones(arr.c.size)
    finite = ~arr.binary & np.isfinite(arr.ub) & (arr.ub > 0) & (arr.lb == 0)
    col[finite] = arr.ub[finite]
    A = sparse.csr_matrix(arr.A @ sparse.diags(col))
    rmax = np.asarray(abs(A).max(axis=1).todense()).ravel()
    row = np.where(rmax > 0, 1.0 / np.where(rmax > 0, rmax, 1.0), 1.0)
    A = sparse.diags(row) @ A
    return A.tocsr(), row, col


def _run(arr, lb, ub, integrality, tol: Tolerances, time_limit):
    A, row, col = _scaled(arr)
    options = {"mip_rel_gap": tol.relative_gap, "presolve": True}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    res = milp(-arr.c * col,
               constraints=LinearConstraint(A, arr.row_lo * row, arr.row_hi * row),
               integrality=integrality, bounds=Bounds(lb / col, ub / col), options=options)
    x = None if res.x is None else res.x * col
    return res, x


def solve_milp_highs(prog, tol: Tolerances = DEFAULT_TOLERANCES, time_limit: float | None = None) -> LpSolution:
    """Solve with HiGHS, then polish continuous values with the binaries fixed."""
    arr = prog.arrays()
    n = arr.c.size
    res, x = _run(arr, arr.lb, arr.ub, arr.binary.astype(int), tol, time_limit)
    status = _STATUS.get(res.status, Status.ITERATION_LIMIT)
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    bound = getattr(res, "mip_dual_bound", None)
    best_bound = float(-bound) if bound is not None and np.isfinite(bound) else float("nan")
    if x is None:
        return LpSolution(np.full(n, np.nan), float("nan"), status, 0, nodes, float("nan"), best_bound, engine="highs")
    lb, ub = arr.lb.copy(), arr.ub.copy()
    fixed = np.round(x[arr.binary])
    lb[arr.binary] = ub[arr.binary] = fixed
    pres, px = _run(arr, lb, ub, np.zeros(n, dtype=int), tol, time_limit)
    if pres.status == 0:
        x = np.clip(px, lb, ub)
    return LpSolution(x, float(arr.c @ x), status, 0, nodes, float("nan"), best_bound, engine="highs")
