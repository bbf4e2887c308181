"""Turning solver output back into an assignment, with consistency checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import ChannelRealization, Scenario
from ..errors import ConsistencyError
from ..status import Status
from .program import MilpProgram
from .sinr import sinr_matrix

INTEGRALITY_TOL = 1e-6
SINR_RTOL = 1e-6
POWER_TOL = 1e-9


@dataclass(frozen=True)
class AssignmentSolution:
    """Assignment ``x`` (bool, (K, N, B)), per-user SINR and objective."""

    x: np.ndarray
    sinr: np.ndarray
    objective_value: float
    status: Status

    @property
    def assignment(self) -> frozenset:
        """Assigned links as zero-based ``(k, n, b)`` triples."""
        return frozenset(tuple(int(i) for i in idx) for idx in zip(*np.nonzero(self.x)))

    @property
    def prbs_held(self) -> np.ndarray:
        return self.x.sum(axis=(1, 2)).astype(int)


def infeasible_solution(shape, status: Status) -> AssignmentSolution:
    K = shape[0]
    return AssignmentSolution(np.zeros(shape, dtype=bool), np.full(K, np.nan), float("nan"), status)


def audit_assignment(x: np.ndarray, scenario: Scenario) -> None:
    """Raise :class:`ConsistencyError` unless ``x`` meets every assignment rule."""
    per_slot = x.sum(axis=0)
    if np.any(per_slot > 1):
        raise ConsistencyError("a PRB at some BS serves more than one user")
    held = x.sum(axis=(1, 2))
    if np.any(held < 1):
        raise ConsistencyError(f"users {np.nonzero(held < 1)[0] + 1} hold no PRB")
    power = held * scenario.tx_power_per_prb_mw
    if np.any(power > scenario.max_power_per_connection_mw + POWER_TOL):
        raise ConsistencyError("a user exceeds the per-connection power limit")


def _rounded(values, idx) -> np.ndarray:
    v = np.asarray(values, dtype=float)[idx]
    r = np.round(v)
    if np.any(np.abs(v - r) > INTEGRALITY_TOL):
        worst = float(np.max(np.abs(v - r)))
        raise ConsistencyError(f"binary variables are fractional (max distance {worst:.3g}) in a solved program")
    return r > 0.5


def assignment_from_values(prog: MilpProgram, values) -> np.ndarray:
    K, N, B = prog.meta["shape"]
    if prog.meta.get("formulation") == "pattern":
        x = np.zeros((K, N, B), dtype=bool)
        for n, (pats, yn) in enumerate(zip(prog.meta["patterns"], prog.meta["y"])):
            chosen = np.nonzero(_rounded(values, yn))[0]
            if len(chosen) != 1:
                raise ConsistencyError(f"PRB {n + 1} has {len(chosen)} patterns selected")
            for b, k in enumerate(pats[chosen[0]]):
                if k < K:
                    x[k, n, b] = True
        return x
    return _rounded(values, prog.meta["vars"].x)


def extract_solution(values, prog: MilpProgram, scenario: Scenario, ch: ChannelRealization,
                     objective: float | None = None, status: Status = Status.OPTIMAL) -> AssignmentSolution:
    """Round binaries, recompute SINRs directly and cross-check the solver's.

    Raises :class:`ConsistencyError` when binaries are not integral, an
    assignment rule is broken, or a solver SINR deviates from the direct
    computation by more than ``1e-6`` relative.
    """
    values = np.asarray(values, dtype=float)
    x = assignment_from_values(prog, values)
    audit_assignment(x, scenario)
    direct = sinr_matrix(x, ch)
    s_direct = direct.sum(axis=(1, 2))
    av = prog.meta["vars"]
    if prog.meta.get("formulation") != "pattern":
        t = values[av.t]
        _compare(np.where(x, t, 0.0), direct, "link")
        if np.any(np.abs(t[~x]) > SINR_RTOL):
            raise ConsistencyError("an unassigned link carries a nonzero solver SINR")
    if av.s is not None:
        _compare(values[av.s], s_direct, "user")
    else:
        _compare(values[av.t].sum(axis=(1, 2)), s_direct, "user")
    if objective is None:
        objective = prog.objective_value(values)
    return AssignmentSolution(x, s_direct, float(objective), status)


def _compare(solver_vals, direct_vals, what: str) -> None:
    scale = np.maximum(np.abs(direct_vals), 1e-12)
    rel = np.abs(solver_vals - direct_vals) / scale
    bad = rel > SINR_RTOL
    if np.any(bad):
        where = tuple(int(i) for i in np.argwhere(bad)[0])
        raise ConsistencyError(
            f"{what} SINR at {where} differs from the direct computation by {rel.max():.3g} relative")


def lift_assignment(prog: MilpProgram, x, ch: ChannelRealization) -> np.ndarray:
    """Program point encoding assignment ``x`` with exact SINRs.

    ``l[k]`` is set to the tangent envelope at ``s[k]``, its largest
    feasible value. For the pattern form the matching pattern must be
    present (build with ``prune=False`` to be sure); otherwise
    :class:`ConsistencyError` is raised.
    """
    x = np.asarray(x, dtype=bool)
    K, N, B = prog.meta["shape"]
    av = prog.meta["vars"]
    v = np.zeros(prog.n_vars)
    T = sinr_matrix(x, ch)
    S = T.sum(axis=(1, 2))
    if prog.meta.get("formulation") == "pattern":
        for n, (pats, yn) in enumerate(zip(prog.meta["patterns"], prog.meta["y"])):
            fill = np.full(B, K)
            for k, b in zip(*np.nonzero(x[:, n, :])):
                fill[b] = k
            hit = np.nonzero((pats == fill).all(axis=1))[0]
            if len(hit) != 1:
                raise ConsistencyError(f"no pattern for PRB {n + 1} matches the assignment")
            v[yn[hit[0]]] = 1.0
    else:
        v[av.x] = x
        v[av.t] = T
        for (m, n, k, w, b), j in av.phi.items():
            v[j] = T[k, n, b] * x[m, n, w]
    if av.s is not None:
        v[av.s] = S
        if av.l is not None:
            lines = prog.meta["tangents"]
            for k in range(K):
                if av.l[k] >= 0:
                    v[av.l[k]] = lines.envelope(S[k])
    return v
