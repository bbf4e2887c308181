"""Solver against exhaustive enumeration on toy instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import ChannelRealization, Scenario, ScenarioConfig, generate_scenario, realize_channel
from ..milp.builders import add_reliability, build_pf, build_wsrmax
from ..milp.solution import extract_solution
from ..risk.ensemble import priorities
from ..solver import ObjectiveSpec, oracle_assign, solve

# 2 BSs x 2 PRBs, 2 normal users and 1 outpatient
TOY_CONFIG = ScenarioConfig(n_pbs=1, n_prbs_per_bs=2, n_users=3, n_normal_users=2)
TOY_P_VOTING = (0.84,)
TOY_ALPHA = 10.0
WSR_RTOL = 1e-4
# (label, approach, prioritize, psi)
MODES = (
    ("wsrmax", "wsrmax", True, None),
    ("pf", "pf", False, None),
    ("pf-prioritized", "pf", True, None),
    ("pf-rel", "pf-rel", False, 127.0),
    # toys rarely reach 127; a lower floor splits them between feasible and not
    ("pf-rel-psi10", "pf-rel", False, 10.0),
)


@dataclass(frozen=True)
class OracleCheck:
    instance: int
    mode: str
    solver_status: str
    oracle_status: str
    solver_objective: float
    oracle_objective: float
    allowance: float    # envelope gap for PF modes, relative tolerance for WSRMax
    ok: bool

    def line(self) -> str:
        verdict = "ok" if self.ok else "MISMATCH"
        return (f"{self.instance:3d} {self.mode:15s} solver={self.solver_objective:.10g} ({self.solver_status}) "
                f"oracle={self.oracle_objective:.10g} ({self.oracle_status}) {verdict}")


def toy_instance(seed: int, index: int) -> tuple[Scenario, ChannelRealization]:
    rng = np.random.default_rng([seed, index])
    sc = generate_scenario(TOY_CONFIG, rng)
    return sc, realize_channel(sc, rng)


def check_instance(sc: Scenario, ch: ChannelRealization, mode: str, engine: str = "bnb",
                   index: int = 0) -> OracleCheck:
    """Compare one solve with the oracle.

    WSRMax must match within ``1e-4`` relative. PF modes must reach the
    oracle's exact-``ln`` objective minus the builder's envelope gap, both
    with the solver's own objective and with the exact objective of the
    solver's assignment. Feasibility decisions must agree.
    """
    label, approach, prio, psi = next(m for m in MODES if m[0] == mode)
    up = priorities(sc.n_normal_users, TOY_P_VOTING, TOY_ALPHA) if prio else np.ones(sc.n_users)
    if approach == "wsrmax":
        prog = build_wsrmax(sc, ch, up)
    else:
        prog = build_pf(sc, ch, up, prioritize=prio)
        if psi is not None:
            add_reliability(prog, psi)
    sol = solve(prog, engine)
    spec = ObjectiveSpec(approach, tuple(up), prio, psi)
    orc = oracle_assign(sc, ch, spec)
    gap = float(prog.meta["envelope_gap"])
    if sol.status is not orc.status:
        ok = False
    elif not sol.optimal:
        ok = True
    elif approach == "wsrmax":
        ok = abs(sol.objective - orc.objective) <= WSR_RTOL * abs(orc.objective)
    else:
        a = extract_solution(sol.values, prog, sc, ch, sol.objective)
        exact = float(spec.evaluate(a.sinr, sc.n_normal_users))
        ok = sol.objective >= orc.objective - gap - 1e-9 and exact >= orc.objective - gap - 1e-9
    allowance = WSR_RTOL if approach == "wsrmax" else gap
    return OracleCheck(index, label, str(sol.status), str(orc.status), float(sol.objective),
                       float(orc.objective), allowance, bool(ok))


def oracle_agreement(n_instances: int, seed: int, modes=None, engine: str = "bnb") -> list[OracleCheck]:
    modes = [m[0] for m in MODES] if modes is None else list(modes)
    out = []
    for i in range(n_instances):
        sc, ch = toy_instance(seed, i)
        out.extend(check_instance(sc, ch, m, engine, i) for m in modes)
    return out
