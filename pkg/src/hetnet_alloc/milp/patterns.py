"""Per-PRB pattern form of the assignment programs.

PRB ``n`` is reused at every BS, and SINRs on different PRBs never
interact. A *pattern* fixes, for one PRB index, which user (or nobody) holds
it at each BS; its link SINRs are then constants. Picking exactly one
pattern per PRB index with binaries ``y[n, p]`` gives a program whose
integer points are exactly the assignments of the link-indexed form, with
per-user SINR ``s[k] = sum_{n,p} sinr_k(n, p) * y[n, p]`` linear in ``y``.
It needs no big-M rows, which keeps its relaxation far tighter.
"""

from __future__ import annotations

import itertools
import warnings

import numpy as np

from ..channel import ChannelRealization, Scenario
from ..errors import InvalidArgument
from .builders import (AllocationVariables, FeasibilityWarning, _check_dims, _check_priorities,
                       add_log_terms, add_reliability, default_tangents, log_users, pf_objective)
from .program import MilpProgram, Sense, VarKind
from .tangents import TangentSet

APPROACHES = ("wsrmax", "pf", "pf-rel")


def enumerate_patterns(K: int, B: int) -> np.ndarray:
    """All ``(K + 1) ** B`` slot fillings, shape (P, B); value ``K`` marks an idle slot.

    A user may appear at several BSs of one pattern.
    """
    return np.array(list(itertools.product(range(K + 1), repeat=B)), dtype=int).reshape(-1, B)


def pattern_sinr(pats: np.ndarray, q_n: np.ndarray, sigma: float) -> np.ndarray:
    """Link SINR per (pattern, slot) for one PRB index; zero on idle slots.

    ``q_n`` has shape (K, B): received power of user k at BS b on this PRB.
    """
    K, B = q_n.shape
    P = pats.shape[0]
    active = pats < K
    users = np.where(active, pats, 0)
    # recv[p, w, b]: power from the occupant of slot w received at BS b
    recv = q_n[users]                                   # (P, B(w), B(b))
    recv = recv * active[:, :, None]
    same_user = users[:, :, None] == users[:, None, :]  # (P, w, b)
    off_diag = ~np.eye(B, dtype=bool)[None]
    intf = np.where(off_diag & ~same_user, recv, 0.0).sum(axis=1)   # (P, B)
    own = q_n[users, np.arange(B)[None, :]]
    out = own / (sigma + intf)
    return np.where(active, out, 0.0)


def user_gains(pats: np.ndarray, link: np.ndarray, K: int) -> np.ndarray:
    """Per-user SINR collected from each pattern, shape (P, K)."""
    gains = np.zeros((pats.shape[0], K))
    for b in range(pats.shape[1]):
        act = pats[:, b] < K
        np.add.at(gains, (np.nonzero(act)[0], pats[act, b]), link[act, b])
    return gains


def slot_counts(pats: np.ndarray, K: int) -> np.ndarray:
    """Slots each user occupies in each pattern, shape (P, K)."""
    return np.stack([(pats == k).sum(axis=1) for k in range(K)], axis=1)


def undominated(gains: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Mask of patterns not dominated by another on the same PRB.

    ``j`` dominates ``i`` when both serve the same users, ``j`` occupies no
    more slots for any user and gives every user at least the same SINR.
    Swapping ``i`` for ``j`` keeps every assignment rule satisfied and
    cannot lower any user's SINR, so all three objectives (each
    nondecreasing in every user's SINR) keep their optimum. Among exact
    duplicates the lowest index survives.
    """
    keep = np.ones(len(gains), dtype=bool)
    groups: dict[bytes, list[int]] = {}
    for i, row in enumerate(counts > 0):
        groups.setdefault(row.tobytes(), []).append(i)
    for idx in groups.values():
        if len(idx) < 2:
            continue
        idx = np.asarray(idx)
        G, C = gains[idx], counts[idx]
        ge = (G[:, None, :] >= G[None, :, :]).all(axis=2)       # [j, i]
        le = (C[:, None, :] <= C[None, :, :]).all(axis=2)
        strict = (G[:, None, :] > G[None, :, :]).any(axis=2) | (C[:, None, :] < C[None, :, :]).any(axis=2)
        order = np.arange(len(idx))
        dom = ge & le & (strict | (order[:, None] < order[None, :]))
        np.fill_diagonal(dom, False)
        keep[idx[dom.any(axis=0)]] = False
    return keep


def build_pattern_program(scenario: Scenario, ch: ChannelRealization, approach: str, priorities,
                          prioritize: bool = False, psi: float | None = None,
                          lines: TangentSet | None = None, prune: bool = True) -> MilpProgram:
    """Pattern-form program for ``wsrmax``, ``pf`` or ``pf-rel``.

    Rows: one pattern per PRB index; per-user power cap and service; the
    SINR definitions of ``s[k]``; tangent lines and the minimum-SINR rows as
    in the link-indexed builders. ``prune`` drops dominated patterns.
    """
    if approach not in APPROACHES:
        raise InvalidArgument(f"unknown approach {approach!r}; expected one of {APPROACHES}")
    _check_dims(scenario, ch)
    up = _check_priorities(priorities, scenario.n_users)
    K, N, B = ch.shape
    if K > N * B:
        warnings.warn(f"{K} users but only {N * B} PRBs: not every user can be served",
                      FeasibilityWarning, stacklevel=2)
    all_pats = enumerate_patterns(K, B)
    all_counts = slot_counts(all_pats, K)
    sigma = ch.noise_mw_per_prb

    prog = MilpProgram(name=f"{approach}-patterns")
    pats, gains, counts, y = [], [], [], []
    for n in range(N):
        g = user_gains(all_pats, pattern_sinr(all_pats, ch.q_mw[:, n, :], sigma), K)
        keep = undominated(g, all_counts) if prune else np.ones(len(all_pats), dtype=bool)
        pats.append(all_pats[keep])
        gains.append(g[keep])
        counts.append(all_counts[keep])
        y.append(np.array([prog.add_var(f"y_{n+1}_{p+1}", VarKind.BINARY)
                           for p in np.nonzero(keep)[0]], dtype=int))

    for n in range(N):
        prog.add_constraint(f"choose_{n+1}", {int(j): 1.0 for j in y[n]}, Sense.EQ, 1.0)
    P_tx = scenario.tx_power_per_prb_mw
    for k in range(K):
        prog.add_constraint(f"power_{k+1}", {int(y[n][p]): P_tx * counts[n][p, k]
                                              for n in range(N) for p in np.nonzero(counts[n][:, k])[0]},
                            Sense.LE, scenario.max_power_per_connection_mw)
    for k in range(K):
        prog.add_constraint(f"serve_{k+1}", {int(y[n][p]): float(counts[n][p, k])
                                              for n in range(N) for p in np.nonzero(counts[n][:, k])[0]},
                            Sense.GE, 1.0)
    s_terms = [{int(y[n][p]): float(gains[n][p, k]) for n in range(N) for p in np.nonzero(gains[n][:, k])[0]}
               for k in range(K)]

    if approach == "wsrmax":
        av = AllocationVariables(x=np.empty(0, int), t=np.empty(0, int), n_normal=scenario.n_normal_users)
        prog.meta["vars"] = av
        s = np.array([prog.add_var(f"s_{k+1}", VarKind.CONTINUOUS, 0.0, np.inf) for k in range(K)], dtype=int)
        for k in range(K):
            terms = {int(s[k]): 1.0}
            terms.update({j: -c for j, c in s_terms[k].items()})
            prog.add_constraint(f"sdef_{k+1}", terms, Sense.EQ, 0.0)
        av.s = s
        prog.set_objective({int(s[k]): float(up[k]) for k in range(K)})
        prog.meta.update(envelope_gap=0.0)
    else:
        lines = lines or default_tangents(scenario, ch)
        av = add_log_terms(prog, scenario, ch, log_users(scenario, prioritize), lines, s_terms)
        pf_objective(prog, av, up, prioritize)
        if approach == "pf-rel":
            add_reliability(prog, 127.0 if psi is None else psi)
    prog.meta.update(formulation="pattern", approach=approach, priorities=up, prioritize=bool(prioritize),
                     shape=(K, N, B), patterns=pats, y=y)
    return prog
