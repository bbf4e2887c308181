"""Bounded-variable primal revised simplex with a dense basis inverse.

The program ``max c @ x, row_lo <= A @ x <= row_hi, lb <= x <= ub`` is put in
equality form by one activity variable per row, ``A @ x - r = 0`` with
``row_lo <= r <= row_hi``. Rows violated by the starting point get an
artificial column; phase one drives those to zero, after which they are
fixed at zero for phase two.

Pricing is Dantzig's largest reduced cost until ``3 * (rows + cols)`` pivots
have been spent, then Bland's smallest-index rule, which cannot cycle.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..status import Status
from .config import DEFAULT_TOLERANCES, Tolerances
from .result import LpSolution


class _Tableau:
    def __init__(self, A, row_lo, row_hi, lb, ub, tol: Tolerances):
        A = sparse.csr_matrix(A, dtype=float)
        m, n = A.shape
        self.m, self.n, self.tol = m, n, tol
        x0 = np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0))
        act = A @ x0
        # rows whose activity starts outside [lo, hi] get an artificial
        low = act < row_lo - tol.feasibility
        high = act > row_hi + tol.feasibility
        art_rows = np.nonzero(low | high)[0]
        r0 = np.clip(act, row_lo, row_hi)
        sign = np.where(low[art_rows], 1.0, -1.0)   # artificial value = |r0 - act| >= 0
        n_art = len(art_rows)
        cols = [A, -sparse.identity(m, format="csr")]
        if n_art:
            cols.append(sparse.csr_matrix((sign, (art_rows, np.arange(n_art))), shape=(m, n_art)))
        self.A = sparse.hstack(cols, format="csc")
        self.At = self.A.T.tocsr()
        self.N = n + m + n_art
        self.L = np.concatenate([lb, row_lo, np.zeros(n_art)]).astype(float)
        self.U = np.concatenate([ub, row_hi, np.full(n_art, np.inf)]).astype(float)
        self.x = np.concatenate([x0, r0, np.abs(r0[art_rows] - act[art_rows])])
        basis = n + np.arange(m)
        basis[art_rows] = n + m + np.arange(n_art)
        self.basis = basis
        self.is_basic = np.zeros(self.N, dtype=bool)
        self.is_basic[basis] = True
        self.art = np.arange(n + m, self.N)
        self.iterations = 0
        self.bland = False
        self.bland_after = tol.bland_after_factor * (m + n)
        self.refactor()

    def column(self, j) -> np.ndarray:
        col = np.zeros(self.m)
        s, e = self.A.indptr[j], self.A.indptr[j + 1]
        col[self.A.indices[s:e]] = self.A.data[s:e]
        return col

    def refactor(self) -> None:
        if self.m == 0:
            self.binv = np.zeros((0, 0))
            return
        Bmat = self.A[:, self.basis].toarray()
        self.binv = np.linalg.inv(Bmat)
        # B x_B + N x_N = 0
        xn = np.where(self.is_basic, 0.0, self.x)
        self.x[self.basis] = -self.binv @ (self.A @ xn)
        self.since_refactor = 0

    def run(self, cost: np.ndarray, max_iter: int) -> Status:
        tol = self.tol
        scale = max(1.0, float(np.max(np.abs(cost))) if cost.size else 1.0)
        opt_tol = tol.optimality * scale
        movable = self.L < self.U
        while True:
            if self.iterations >= max_iter:
                return Status.ITERATION_LIMIT
            if not self.bland and self.iterations >= self.bland_after:
                self.bland = True
            y = cost[self.basis] @ self.binv if self.m else np.zeros(0)
            d = cost - self.At @ y if self.m else cost.copy()
            x, L, U = self.x, self.L, self.U
            up = (d > opt_tol) & (x < U - tol.feasibility)
            down = (d < -opt_tol) & (x > L + tol.feasibility)
            elig = (up | down) & ~self.is_basic & movable
            cand = np.nonzero(elig)[0]
            if cand.size == 0:
                return Status.OPTIMAL
            if self.bland:
                j = int(cand[0])
            else:
                j = int(cand[np.argmax(np.abs(d[cand]))])
            direction = 1.0 if up[j] else -1.0
            alpha = self.binv @ self.column(j) if self.m else np.zeros(0)
            delta = -direction * alpha           # change of x_B per unit step
            xb = x[self.basis]
            lb_b, ub_b = L[self.basis], U[self.basis]
            amax = float(np.abs(alpha).max()) if self.m else 0.0
            zero = tol.pivot * max(1.0, amax)
            dec = delta < -zero
            inc = delta > zero
            theta = np.full(self.m, np.inf)
            relaxed = np.full(self.m, np.inf)
            with np.errstate(divide="ignore", invalid="ignore"):
                theta[dec] = (xb[dec] - lb_b[dec]) / -delta[dec]
                theta[inc] = (ub_b[inc] - xb[inc]) / delta[inc]
                relaxed[dec] = (xb[dec] - lb_b[dec] + tol.feasibility) / -delta[dec]
                relaxed[inc] = (ub_b[inc] - xb[inc] + tol.feasibility) / delta[inc]
            theta = np.maximum(theta, 0.0)
            t_flip = U[j] - L[j]
            if self.m == 0 or not np.isfinite(relaxed.min()):
                if not np.isfinite(t_flip):
                    return Status.UNBOUNDED
                t_min = np.inf
            elif self.bland:
                t_min = float(theta.min())
            else:
                # Harris: among rows blocking within the relaxed step, take the largest pivot
                t_max = max(float(relaxed.min()), 0.0)
                cand_rows = np.nonzero(theta <= t_max)[0]
                r = int(cand_rows[np.argmax(np.abs(delta[cand_rows]))])
                t_min = float(theta[r])
            self.iterations += 1
            if t_flip <= t_min:
                x[j] += direction * t_flip
                x[self.basis] = xb + t_flip * delta
                continue
            if self.bland:
                ties = np.nonzero(theta <= t_min)[0]
                r = int(ties[np.argmin(self.basis[ties])])
            leaving = int(self.basis[r])
            x[j] += direction * t_min
            x[self.basis] = xb + t_min * delta
            x[leaving] = lb_b[r] if delta[r] < 0 else ub_b[r]
            # product-form update of the explicit inverse
            piv = alpha[r]
            row = self.binv[r] / piv
            self.binv -= np.outer(alpha, row)
            self.binv[r] = row
            self.basis[r] = j
            self.is_basic[j] = True
            self.is_basic[leaving] = False
            self.since_refactor += 1
            if self.since_refactor >= tol.refactor_every:
                self.refactor()


def equilibrate(A, lb, ub):
    """Column and row scale factors that bring the program near unit magnitude.

    Continuous columns bounded in ``[0, u]`` are rescaled to ``[0, 1]``; each
    row is then divided by its largest coefficient. ``x = col * x'``.
    """
    A = sparse.csr_matrix(A, dtype=float)
    col = np.ones(A.shape[1])
    box = (lb == 0) & np.isfinite(ub) & (ub > 0)
    col[box] = ub[box]
    As = sparse.csr_matrix(A @ sparse.diags(col))
    rmax = np.asarray(abs(As).max(axis=1).todense()).ravel() if A.shape[0] else np.zeros(0)
    row = np.where(rmax > 0, 1.0 / np.where(rmax > 0, rmax, 1.0), 1.0)
    return sparse.csr_matrix(sparse.diags(row) @ As), row, col


def solve_lp_arrays(c, A, row_lo, row_hi, lb, ub, tol: Tolerances = DEFAULT_TOLERANCES) -> LpSolution:
    """Maximize ``c @ x`` subject to row and variable bounds.

    The program is equilibrated first (see :func:`equilibrate`); tolerances
    apply to the scaled program and the result is mapped back.
    """
    c = np.asarray(c, dtype=float)
    lb = np.asarray(lb, dtype=float)
    ub = np.asarray(ub, dtype=float)
    n = c.size
    if np.any(lb > ub + tol.feasibility):
        return LpSolution(np.full(n, np.nan), float("nan"), Status.INFEASIBLE)
    As, row, col = equilibrate(A, lb, ub)
    sol = _solve_scaled(c * col, As, np.asarray(row_lo, float) * row, np.asarray(row_hi, float) * row,
                        lb / col, ub / col, tol)
    xs = sol.values * col
    if sol.status is Status.OPTIMAL:
        # snap values within tolerance of a bound onto it
        xs = np.clip(xs, lb, ub)
        return LpSolution(xs, float(c @ xs), sol.status, sol.iterations, best_bound=float(c @ xs))
    return LpSolution(xs, float(c @ xs) if np.all(np.isfinite(xs)) else float("nan"), sol.status, sol.iterations)


def _solve_scaled(c, A, row_lo, row_hi, lb, ub, tol: Tolerances) -> LpSolution:
    n = c.size
    tab = _Tableau(A, np.asarray(row_lo, float), np.asarray(row_hi, float), lb, ub, tol)
    if tab.art.size:
        c1 = np.zeros(tab.N)
        c1[tab.art] = -1.0
        status = tab.run(c1, tol.max_iterations)
        if status is Status.ITERATION_LIMIT:
            return LpSolution(np.full(n, np.nan), float("nan"), status, tab.iterations)
        tab.refactor()
        row_scale = np.maximum(1.0, abs(tab.A[:, :n]).max(axis=1).toarray().ravel()) if n else np.ones(tab.m)
        art_rows = np.array([tab.A.indices[tab.A.indptr[j]] for j in tab.art])
        if np.any(tab.x[tab.art] > tol.feasibility * row_scale[art_rows]):
            return LpSolution(np.full(n, np.nan), float("nan"), Status.INFEASIBLE, tab.iterations)
        tab.x[tab.art] = np.where(tab.is_basic[tab.art], tab.x[tab.art], 0.0)
        tab.U[tab.art] = 0.0
        tab.bland, tab.bland_after = False, tab.iterations + tol.bland_after_factor * (tab.m + n)
    cost = np.concatenate([c, np.zeros(tab.N - n)])
    status = tab.run(cost, tol.max_iterations)
    tab.refactor()
    return LpSolution(tab.x[:n].copy(), float("nan"), status, tab.iterations)


def solve_lp(prog, tol: Tolerances = DEFAULT_TOLERANCES, lb=None, ub=None) -> LpSolution:
    """Solve the continuous relaxation of ``prog`` (binaries relaxed to [0, 1]).

    ``lb``/``ub`` override the variable bounds (used by branch-and-bound).
    """
    arr = prog.arrays()
    return solve_lp_arrays(arr.c, arr.A, arr.row_lo, arr.row_hi,
                           arr.lb if lb is None else lb, arr.ub if ub is None else ub, tol)
