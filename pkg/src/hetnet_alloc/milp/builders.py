"""Assignment programs with explicit SINR variables and big-M product rows.

Variables follow the link-indexed form: binaries ``x[k, n, b]`` (user k holds
PRB n at BS b), SINRs ``t[k, n, b]``, products ``phi[m, n, k, w, b] = t[k, n, b]
* x[m, n, w]`` for interferers, plus per-user ``s[k]`` and ``l[k]`` for the
proportional-fair objectives. Names are one-based; index arrays are
zero-based.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..channel import ChannelRealization, Scenario
from ..errors import BuildError, InvalidArgument
from .program import MilpProgram, Sense, VarKind
from .tangents import TangentSet, geometric_tangents

BIG_M_MARGIN = 1.05


class FeasibilityWarning(UserWarning):
    """The program may be infeasible for structural reasons."""


@dataclass
class AllocationVariables:
    x: np.ndarray                       # (K, N, B) variable indices
    t: np.ndarray                       # (K, N, B)
    phi: dict = field(default_factory=dict)   # (m, n, k, w, b) -> index
    s: np.ndarray | None = None         # (K,)
    l: np.ndarray | None = None         # (K,), -1 where the user has no log term
    n_normal: int = 0


def big_m_bound(ch: ChannelRealization) -> float:
    """Upper bound on any link SINR: interference can only lower ``q / sigma``."""
    return float(BIG_M_MARGIN * np.max(ch.q_mw) / ch.noise_mw_per_prb)


def _check_dims(scenario: Scenario, ch: ChannelRealization) -> None:
    want = (scenario.n_users, scenario.prbs_per_bs, scenario.n_bs)
    if ch.shape != want:
        raise InvalidArgument(f"channel shape {ch.shape} does not match scenario {want}")


def _vars(prog: MilpProgram) -> AllocationVariables:
    try:
        return prog.meta["vars"]
    except KeyError:
        raise BuildError("core variables have not been declared; call add_core_constraints first") from None


def add_core_constraints(prog: MilpProgram, scenario: Scenario, ch: ChannelRealization) -> AllocationVariables:
    """Declare ``x``/``t`` and add the power, exclusivity and service rows."""
    _check_dims(scenario, ch)
    if "vars" in prog.meta:
        raise BuildError("core constraints already present")
    K, N, B = ch.shape
    if K > N * B:
        warnings.warn(f"{K} users but only {N * B} PRBs: not every user can be served",
                      FeasibilityWarning, stacklevel=2)
    # t[k,n,b] <= q[k,n,b] / sigma: interference only lowers a link's SINR
    t_ub = np.minimum(ch.q_mw / ch.noise_mw_per_prb, big_m_bound(ch))
    x = np.empty((K, N, B), dtype=int)
    t = np.empty((K, N, B), dtype=int)
    for k in range(K):
        for n in range(N):
            for b in range(B):
                x[k, n, b] = prog.add_var(f"x_{k+1}_{n+1}_{b+1}", VarKind.BINARY)
    for k in range(K):
        for n in range(N):
            for b in range(B):
                t[k, n, b] = prog.add_var(f"t_{k+1}_{n+1}_{b+1}", VarKind.CONTINUOUS, 0.0, t_ub[k, n, b])
    P = scenario.tx_power_per_prb_mw
    for k in range(K):
        prog.add_constraint(f"power_{k+1}", {int(j): P for j in x[k].ravel()}, Sense.LE,
                            scenario.max_power_per_connection_mw)
    for n in range(N):
        for b in range(B):
            prog.add_constraint(f"excl_{n+1}_{b+1}", {int(j): 1.0 for j in x[:, n, b]}, Sense.LE, 1.0)
    for k in range(K):
        prog.add_constraint(f"serve_{k+1}", {int(j): 1.0 for j in x[k].ravel()}, Sense.GE, 1.0)
    av = AllocationVariables(x=x, t=t, n_normal=scenario.n_normal_users)
    prog.meta["vars"] = av
    prog.meta["shape"] = (K, N, B)
    return av


def add_sinr_coupling(prog: MilpProgram, scenario: Scenario, ch: ChannelRealization, big_m: float) -> None:
    """Tie each ``t`` to its assignment and interferers through ``phi``.

    The defining equality is divided through by the noise power so that
    coefficients are SINR-scaled (``q / sigma``) instead of milliwatt-scaled:

        t[k,n,b] + sum_{w!=b, m!=k} (q[m,n,b]/sigma) phi[m,n,k,w,b] = (q[k,n,b]/sigma) x[k,n,b]

    and each ``phi`` is pinched to ``t[k,n,b] * x[m,n,w]`` by big-M rows.
    The constant in those rows is ``min(big_m, q[k,n,b] / sigma)``, the
    tightest value that is still valid for that link (``phi <= t <=
    q[k,n,b] / sigma``); ``big_m`` caps it.
    """
    if not big_m > 0:
        raise InvalidArgument(f"big-M must be positive, got {big_m!r}")
    _check_dims(scenario, ch)
    av = _vars(prog)
    if av.phi:
        raise BuildError("SINR coupling already present")
    K, N, B = ch.shape
    snr = ch.q_mw / ch.noise_mw_per_prb
    cell_m = np.minimum(snr, big_m)
    for k in range(K):
        for n in range(N):
            for b in range(B):
                for m in range(K):
                    if m == k:
                        continue
                    for w in range(B):
                        if w == b:
                            continue
                        name = f"phi_{m+1}_{n+1}_{k+1}_{w+1}_{b+1}"
                        av.phi[(m, n, k, w, b)] = prog.add_var(name, VarKind.CONTINUOUS, 0.0, cell_m[k, n, b])
    for k in range(K):
        for n in range(N):
            for b in range(B):
                tk = int(av.t[k, n, b])
                terms = {tk: 1.0, int(av.x[k, n, b]): -snr[k, n, b]}
                for m in range(K):
                    for w in range(B):
                        if m != k and w != b:
                            terms[av.phi[(m, n, k, w, b)]] = snr[m, n, b]
                prog.add_constraint(f"sinr_{k+1}_{n+1}_{b+1}", terms, Sense.EQ, 0.0)
    for (m, n, k, w, b), j in av.phi.items():
        tag = f"{m+1}_{n+1}_{k+1}_{w+1}_{b+1}"
        xj, tj = int(av.x[m, n, w]), int(av.t[k, n, b])
        mc = float(cell_m[k, n, b])
        prog.add_constraint(f"phx_{tag}", {j: 1.0, xj: -mc}, Sense.LE, 0.0)
        prog.add_constraint(f"pht_{tag}", {j: 1.0, tj: -1.0}, Sense.LE, 0.0)
        prog.add_constraint(f"phl_{tag}", {j: 1.0, tj: -1.0, xj: -mc}, Sense.GE, -mc)
    prog.meta["big_m"] = float(big_m)


def _check_priorities(priorities, K: int) -> np.ndarray:
    up = np.asarray(priorities, dtype=float)
    if up.shape != (K,):
        raise InvalidArgument(f"expected {K} priorities, got shape {up.shape}")
    if np.any(up < 1.0):
        raise InvalidArgument("priorities must all be >= 1")
    return up


def _base(scenario, ch, name, big_m) -> tuple[MilpProgram, AllocationVariables]:
    prog = MilpProgram(name=name)
    av = add_core_constraints(prog, scenario, ch)
    add_sinr_coupling(prog, scenario, ch, big_m_bound(ch) if big_m is None else big_m)
    prog.meta["formulation"] = "phi"
    return prog, av


def build_wsrmax(scenario: Scenario, ch: ChannelRealization, priorities, big_m: float | None = None) -> MilpProgram:
    """Maximize the priority-weighted sum of link SINRs.

    All-ones priorities give the unprioritized program.
    """
    up = _check_priorities(priorities, scenario.n_users)
    prog, av = _base(scenario, ch, "wsrmax", big_m)
    obj = {}
    for k in range(scenario.n_users):
        for j in av.t[k].ravel():
            obj[int(j)] = up[k]
    prog.set_objective(obj)
    prog.meta.update(approach="wsrmax", priorities=up, envelope_gap=0.0)
    return prog


def sinr_range(scenario: Scenario, ch: ChannelRealization) -> tuple[float, float]:
    """Bounds on any user's SINR in a feasible assignment.

    Lower: the weakest single link under the worst co-channel interferer at
    every other BS. Upper: the user's ``cap`` strongest interference-free
    links.
    """
    _check_dims(scenario, ch)
    q, sigma = ch.q_mw, ch.noise_mw_per_prb
    K, N, B = q.shape
    worst = np.empty_like(q)
    for k in range(K):
        others = np.delete(q, k, axis=0)
        if others.size == 0:
            worst[k] = 0.0
            continue
        # each of the other B - 1 BSs hosts at most one interferer on PRB n
        worst[k] = (B - 1) * others.max(axis=0)
    floor = q / (sigma + worst)
    lo = float(floor.reshape(K, -1).min())
    cap = max(1, min(scenario.prb_cap, N * B))
    top = np.sort((q / sigma).reshape(K, -1), axis=1)[:, -cap:].sum(axis=1)
    return lo, float(top.max())


def default_tangents(scenario: Scenario, ch: ChannelRealization, n: int = 12) -> TangentSet:
    """Geometric tangents from the SINR floor to ``cap`` times the big-M bound."""
    lo, _ = sinr_range(scenario, ch)
    hi = max(1, scenario.prb_cap) * big_m_bound(ch)
    return geometric_tangents(lo, hi, n)


def add_log_terms(prog: MilpProgram, scenario: Scenario, ch: ChannelRealization,
                  log_users, lines: TangentSet, s_terms) -> AllocationVariables:
    """Declare ``s[k]`` (linked by ``s_terms``) and ``l[k]`` bounded by the tangent lines.

    ``s_terms[k]`` maps variable indices to coefficients so that
    ``s[k] = sum(coef * var)``.
    """
    av = prog.meta.get("vars")
    K = scenario.n_users
    lo_att, hi_att = sinr_range(scenario, ch)
    a_lo, a_hi = lines.interval
    if a_lo > lo_att * (1 + 1e-12) or a_hi < hi_att * (1 - 1e-12):
        raise BuildError(
            f"tangent interval [{a_lo:.6g}, {a_hi:.6g}] does not cover attainable SINRs "
            f"[{lo_att:.6g}, {hi_att:.6g}]")
    s_ub = scenario.max_power_per_connection_mw / scenario.tx_power_per_prb_mw * big_m_bound(ch)
    s = np.empty(K, dtype=int)
    for k in range(K):
        s[k] = prog.add_var(f"s_{k+1}", VarKind.CONTINUOUS, 0.0, s_ub)
    for k in range(K):
        terms = {int(s[k]): 1.0}
        for j, c in s_terms[k].items():
            terms[int(j)] = terms.get(int(j), 0.0) - c
        prog.add_constraint(f"sdef_{k+1}", terms, Sense.EQ, 0.0)
    l = np.full(K, -1, dtype=int)
    l_lb = float(lines.intercepts.min())
    l_ub = float(lines.envelope(s_ub))
    for k in log_users:
        l[k] = prog.add_var(f"l_{k+1}", VarKind.CONTINUOUS, l_lb, l_ub)
    for k in log_users:
        for j, (m_j, h_j) in enumerate(zip(lines.slopes, lines.intercepts)):
            prog.add_constraint(f"tan_{k+1}_{j+1}", {int(l[k]): 1.0, int(s[k]): -float(m_j)}, Sense.LE, float(h_j))
    if av is None:
        av = AllocationVariables(x=np.empty(0, int), t=np.empty(0, int), n_normal=scenario.n_normal_users)
        prog.meta["vars"] = av
    av.s, av.l = s, l
    per_user = lines.gap_bound()
    prog.meta.update(tangents=lines, envelope_gap_per_user=per_user,
                     envelope_gap=per_user * len(log_users))
    return av


def pf_objective(prog: MilpProgram, av: AllocationVariables, up: np.ndarray, prioritize: bool) -> None:
    obj = {}
    for k in range(len(up)):
        if av.l[k] >= 0:
            obj[int(av.l[k])] = 1.0
        elif prioritize:
            obj[int(av.s[k])] = float(up[k])
    prog.set_objective(obj)


def log_users(scenario: Scenario, prioritize: bool) -> list[int]:
    """Users whose SINR enters through ``ln``: everyone, or only normal users once prioritized."""
    K = scenario.n_users
    return list(range(scenario.n_normal_users)) if prioritize else list(range(K))


def build_pf(scenario: Scenario, ch: ChannelRealization, priorities, prioritize: bool = False,
             lines: TangentSet | None = None, big_m: float | None = None) -> MilpProgram:
    """Proportional-fair program with a tangent-line model of ``ln``.

    Unprioritized: maximize ``sum_k l[k]`` over all users. Prioritized: the
    log applies to normal users only and outpatients enter linearly as
    ``UP_k * s[k]``.
    """
    up = _check_priorities(priorities, scenario.n_users)
    lines = lines or default_tangents(scenario, ch)
    prog, av = _base(scenario, ch, "pf", big_m)
    s_terms = [{int(j): 1.0 for j in av.t[k].ravel()} for k in range(scenario.n_users)]
    add_log_terms(prog, scenario, ch, log_users(scenario, prioritize), lines, s_terms)
    pf_objective(prog, av, up, prioritize)
    prog.meta.update(approach="pf", priorities=up, prioritize=bool(prioritize))
    return prog


def add_reliability(prog: MilpProgram, psi: float) -> None:
    """Require ``s[k] >= psi`` for every normal user."""
    if psi < 0 or not np.isfinite(psi):
        raise InvalidArgument(f"minimum SINR must be finite and non-negative, got {psi!r}")
    av = _vars(prog)
    if av.s is None:
        raise BuildError("reliability rows need per-user SINR variables (a PF program)")
    for k in range(av.n_normal):
        prog.add_constraint(f"rel_{k+1}", {int(av.s[k]): 1.0}, Sense.GE, float(psi))
    prog.meta["psi"] = float(psi)
    prog.meta["approach"] = "pf-rel"
