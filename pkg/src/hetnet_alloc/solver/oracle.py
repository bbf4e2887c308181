"""Ground truth for toy instances by enumerating every assignment."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..channel import ChannelRealization, Scenario
from ..errors import InvalidArgument, SearchSpaceTooLarge
from ..milp.sinr import sinr_direct
from ..status import Status

MAX_ASSIGNMENTS = 10**7
_CHUNK = 200_000
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ObjectiveSpec:
    """What the oracle maximizes: ``wsrmax``, ``pf`` or ``pf-rel`` (PF with a minimum SINR)."""

    approach: str
    priorities: tuple
    prioritize: bool = False
    psi: float | None = None

    def __post_init__(self):
        if self.approach not in ("wsrmax", "pf", "pf-rel"):
            raise InvalidArgument(f"unknown approach {self.approach!r}")
        if self.approach == "pf-rel" and (self.psi is None or self.psi < 0):
            raise InvalidArgument("pf-rel needs a non-negative psi")
        object.__setattr__(self, "priorities", tuple(float(u) for u in self.priorities))

    def evaluate(self, S: np.ndarray, n_normal: int) -> np.ndarray:
        """Objective for per-user SINR rows ``S`` (shape (..., K)), exact ``ln``."""
        up = np.asarray(self.priorities)
        if self.approach == "wsrmax":
            return S @ up
        with np.errstate(divide="ignore"):
            logs = np.log(S)
        if not self.prioritize:
            return logs.sum(axis=-1)
        return logs[..., :n_normal].sum(axis=-1) + S[..., n_normal:] @ up[n_normal:]


@dataclass(frozen=True)
class OracleResult:
    x: np.ndarray | None
    sinr: np.ndarray | None
    objective: float
    status: Status
    n_feasible: int
    n_assignments: int


def search_space_size(scenario: Scenario) -> int:
    return (scenario.n_users + 1) ** (scenario.prbs_per_bs * scenario.n_bs)


def oracle_assign(scenario: Scenario, ch: ChannelRealization, spec: ObjectiveSpec) -> OracleResult:
    """Best assignment over all ``(K + 1) ** (N * B)`` slot fillings.

    Each PRB slot at each BS holds one user or stays idle; a filling is
    feasible when every user holds between one PRB and the power-cap
    number of PRBs (and, for ``pf-rel``, every normal user reaches ``psi``).
    Ties are broken towards the lexicographically smallest ``x`` flattened
    in ``(k, n, b)`` order.
    """
    K, N, B = ch.shape
    if (K, N, B) != (scenario.n_users, scenario.prbs_per_bs, scenario.n_bs):
        raise InvalidArgument("channel does not match the scenario")
    if len(spec.priorities) != K:
        raise InvalidArgument(f"expected {K} priorities, got {len(spec.priorities)}")
    size = search_space_size(scenario)
    if size > MAX_ASSIGNMENTS:
        raise SearchSpaceTooLarge(
            f"{size:.3g} assignments exceed the enumeration limit of {MAX_ASSIGNMENTS:.0e}", size)

    # per-PRB slot fillings; SINRs on different PRBs never interact, so the
    # gain of each filling is evaluated once, on an otherwise empty grid
    pats = np.array(list(itertools.product(range(K + 1), repeat=B)), dtype=int).reshape(-1, B)
    n_pat = len(pats)
    counts = np.stack([(pats == k).sum(axis=1) for k in range(K)], axis=1)      # (P, K)
    gain = np.zeros((N, n_pat, K))
    for n in range(N):
        for p, fill in enumerate(pats):
            x = np.zeros((K, N, B), dtype=bool)
            for b, k in enumerate(fill):
                if k < K:
                    x[k, n, b] = True
            for b, k in enumerate(fill):
                if k < K:
                    gain[n, p, k] += sinr_direct(x, ch, int(k), n, b)
    P_tx, PM = scenario.tx_power_per_prb_mw, scenario.max_power_per_connection_mw
    n_normal = scenario.n_normal_users

    best_val, best_rows = -np.inf, []
    n_feasible = 0
    total = n_pat ** N
    for start in range(0, total, _CHUNK):
        ids = np.arange(start, min(start + _CHUNK, total))
        choice = np.stack(np.unravel_index(ids, (n_pat,) * N), axis=1)        # (C, N)
        held = counts[choice].sum(axis=1)                                      # (C, K)
        S = gain[np.arange(N)[None, :], choice].sum(axis=1)                   # (C, K)
        ok = (held >= 1).all(axis=1) & (P_tx * held <= PM + 1e-9).all(axis=1)
        if spec.approach == "pf-rel":
            ok &= (S[:, :n_normal] >= spec.psi).all(axis=1)
        if not ok.any():
            continue
        n_feasible += int(ok.sum())
        val = spec.evaluate(S[ok], n_normal)
        top = float(val.max())
        if not best_rows or top > best_val + _TIE_RTOL * max(1.0, abs(best_val)):
            best_val = top
            best_rows = [choice[ok][val >= top - _TIE_RTOL * max(1.0, abs(top))]]
        elif top >= best_val - _TIE_RTOL * max(1.0, abs(best_val)):
            best_rows.append(choice[ok][val >= best_val - _TIE_RTOL * max(1.0, abs(best_val))])
    if not best_rows:
        return OracleResult(None, None, float("nan"), Status.INFEASIBLE, 0, total)

    cands = np.concatenate(best_rows)
    xs = np.zeros((len(cands), K, N, B), dtype=bool)
    for n in range(N):
        for b in range(B):
            u = pats[cands[:, n], b]
            act = u < K
            xs[np.nonzero(act)[0], u[act], n, b] = True
    flat = xs.reshape(len(cands), -1).astype(np.int8)
    pick = np.lexsort(flat.T[::-1])[0]
    x = xs[pick]
    S = gain[np.arange(N), cands[pick]].sum(axis=0)
    return OracleResult(x, S, float(spec.evaluate(S, n_normal)), Status.OPTIMAL, n_feasible, total)
