"""Best-first branch-and-bound over binary variables."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from ..status import Status
from .config import DEFAULT_TOLERANCES, Tolerances
from .result import LpSolution
from .simplex import solve_lp_arrays


@dataclass(order=True)
class BnbNode:
    """Open node: priority is the parent's LP bound (larger first), then creation order."""

    sort_key: tuple = field(init=False, repr=False)
    bound: float = field(compare=False)
    seq: int = field(compare=False)
    depth: int = field(compare=False)
    fixed: tuple = field(compare=False)   # ((var, 0 or 1), ...)

    def __post_init__(self):
        self.sort_key = (-self.bound, self.seq)


def _most_fractional(x, binaries, tol) -> int | None:
    frac = np.abs(x[binaries] - np.round(x[binaries]))
    if frac.size == 0 or frac.max() <= tol:
        return None
    # distance from 0.5; argmin returns the lowest index among ties
    score = np.abs(x[binaries] - np.floor(x[binaries]) - 0.5)
    return int(binaries[np.argmin(np.where(frac > tol, score, np.inf))])


def _gap_closed(bound: float, incumbent: float, tol: Tolerances) -> bool:
    return bound - incumbent <= tol.relative_gap * max(1.0, abs(incumbent))


def solve_milp(prog, tol: Tolerances = DEFAULT_TOLERANCES) -> LpSolution:
    """Maximize ``prog`` with its binaries integral.

    Integral node solutions are polished: binaries are fixed at their rounded
    values and the LP is re-solved, so the incumbent's continuous values are
    exact for that assignment rather than exploiting integrality slack.
    """
    arr = prog.arrays()
    binaries = np.nonzero(arr.binary)[0]
    lb0, ub0 = arr.lb.copy(), arr.ub.copy()

    def lp(fixed):
        lb, ub = lb0.copy(), ub0.copy()
        for j, v in fixed:
            lb[j] = ub[j] = v
        return solve_lp_arrays(arr.c, arr.A, arr.row_lo, arr.row_hi, lb, ub, tol)

    root = lp(())
    n = arr.c.size
    iterations = root.iterations
    if root.status is not Status.OPTIMAL:
        return LpSolution(np.full(n, np.nan), float("nan"), root.status, iterations, 1,
                          float("nan"), float("nan"), engine="bnb")
    root_bound = root.objective
    best_x, best_obj = None, -np.inf
    heap: list[BnbNode] = []
    seq = 0
    nodes = 1
    status = Status.OPTIMAL
    sol, fixed, depth = root, (), 0

    while True:
        if sol.status is Status.OPTIMAL and not (best_x is not None and _gap_closed(sol.objective, best_obj, tol)):
            j = _most_fractional(sol.values, binaries, tol.integrality)
            if j is None:
                polished = lp(tuple((int(b), float(np.round(sol.values[b]))) for b in binaries))
                iterations += polished.iterations
                if polished.status is Status.OPTIMAL and polished.objective > best_obj:
                    best_x, best_obj = polished.values, polished.objective
            else:
                for v in (1.0, 0.0):
                    heapq.heappush(heap, BnbNode(sol.objective, seq, depth + 1, fixed + ((j, v),)))
                    seq += 1
        # best-first: once the top bound cannot improve the incumbent, none can
        if best_x is not None and heap and _gap_closed(heap[0].bound, best_obj, tol):
            heap = []
        if not heap:
            break
        if nodes >= tol.node_limit:
            status = Status.ITERATION_LIMIT
            break
        node = heapq.heappop(heap)
        sol, fixed, depth = lp(node.fixed), node.fixed, node.depth
        iterations += sol.iterations
        nodes += 1

    open_bound = max((nd.bound for nd in heap), default=-np.inf)
    if best_x is None:
        st = Status.ITERATION_LIMIT if status is Status.ITERATION_LIMIT else Status.INFEASIBLE
        return LpSolution(np.full(n, np.nan), float("nan"), st, iterations, nodes, root_bound,
                          float(open_bound) if heap else float("nan"), engine="bnb")
    return LpSolution(best_x, float(best_obj), status, iterations, nodes, root_bound,
                      float(max(best_obj, open_bound)), engine="bnb")
