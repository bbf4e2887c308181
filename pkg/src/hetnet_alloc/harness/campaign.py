"""Monte-Carlo campaigns: one channel draw, program and solve per realization."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ..channel import ChannelRealization, Scenario, realize_channel
from ..milp.builders import add_reliability, build_pf, build_wsrmax
from ..milp.patterns import build_pattern_program
from ..milp.program import MilpProgram
from ..milp.solution import extract_solution
from ..risk.ensemble import priorities
from ..solver import solve
from ..status import Status
from .config import ALPHA_SWEEP, ExperimentConfig
from .stats import confidence_interval, fairness_sd

DEGRADED_FRACTION = 0.10


@dataclass(frozen=True)
class RealizationResult:
    """Outcome of one realization; ``sinr`` and ``prbs_held`` are ``None`` unless Optimal."""

    index: int
    status: Status
    sinr: np.ndarray | None
    prbs_held: np.ndarray | None
    objective: float
    nodes: int
    seconds: float
    channel_digest: str
    sinr_deviation: float = float("nan")   # max relative gap, solver vs direct SINR

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass(frozen=True)
class UserSummary:
    user: int          # one-based
    mean_sinr: float
    ci95: float
    is_op: bool
    n_samples: int


@dataclass(frozen=True)
class ExperimentReport:
    """Per-user means over the Optimal realizations plus aggregate fairness.

    ``ci95`` is NaN when fewer than two realizations solved; all statistics
    are NaN when none did.
    """

    config: ExperimentConfig
    users: tuple[UserSummary, ...]
    avg_sinr: float
    sd_normal: float
    sd_all: float
    n_optimal: int
    n_non_optimal: int
    degraded: bool
    realizations: tuple[RealizationResult, ...]
    total_nodes: int
    total_seconds: float

    @property
    def is_op(self) -> np.ndarray:
        return np.array([u.is_op for u in self.users])

    @property
    def mean_sinr(self) -> np.ndarray:
        return np.array([u.mean_sinr for u in self.users])

    def sinr_table(self) -> np.ndarray:
        """Per-user SINR of every Optimal realization, shape (n_optimal, K)."""
        rows = [r.sinr for r in self.realizations if r.optimal]
        return np.array(rows).reshape(len(rows), len(self.users))


def user_priorities(cfg: ExperimentConfig, scenario: Scenario) -> np.ndarray:
    """All ones before prioritization; ``1 + alpha * p_voting`` for outpatients after."""
    if not cfg.prioritize:
        return np.ones(scenario.n_users)
    return priorities(scenario.n_normal_users, cfg.p_voting, cfg.alpha)


def build_program(cfg: ExperimentConfig, scenario: Scenario, ch: ChannelRealization) -> MilpProgram:
    up = user_priorities(cfg, scenario)
    if cfg.formulation == "pattern":
        return build_pattern_program(scenario, ch, cfg.approach, up, prioritize=cfg.prioritize, psi=cfg.psi)
    if cfg.approach == "wsrmax":
        return build_wsrmax(scenario, ch, up)
    prog = build_pf(scenario, ch, up, prioritize=cfg.prioritize)
    if cfg.approach == "pf-rel":
        add_reliability(prog, cfg.psi)
    return prog


def realization_channel(cfg: ExperimentConfig, scenario: Scenario, index: int) -> ChannelRealization:
    """Channel of realization ``index`` (one-based), from a child stream of ``(seed, index)``."""
    return realize_channel(scenario, np.random.default_rng([cfg.seed, index]))


def sinr_deviation(prog: MilpProgram, values, direct) -> float:
    """Largest relative gap between the program's per-user SINR and ``direct``."""
    av = prog.meta["vars"]
    values = np.asarray(values, dtype=float)
    solver = values[av.s] if av.s is not None else values[av.t].sum(axis=(1, 2))
    return float(np.max(np.abs(solver - direct) / np.maximum(np.abs(direct), 1e-12)))


def run_realization(cfg: ExperimentConfig, scenario: Scenario, index: int) -> RealizationResult:
    ch = realization_channel(cfg, scenario, index)
    t0 = time.perf_counter()
    prog = build_program(cfg, scenario, ch)
    sol = solve(prog, cfg.engine)
    sinr = held = None
    dev = float("nan")
    if sol.optimal:
        a = extract_solution(sol.values, prog, scenario, ch, sol.objective, sol.status)
        sinr, held = a.sinr, a.prbs_held
        dev = sinr_deviation(prog, sol.values, sinr)
    return RealizationResult(index, sol.status, sinr, held, float(sol.objective), int(sol.nodes),
                             time.perf_counter() - t0, ch.digest(), dev)


def _worker(args):
    cfg, scenario, index = args
    return run_realization(cfg, scenario, index)


def summarize(cfg: ExperimentConfig, scenario: Scenario, results) -> ExperimentReport:
    """Aggregate realization results; the order of ``results`` does not matter."""
    results = tuple(sorted(results, key=lambda r: r.index))
    K = scenario.n_users
    is_op = scenario.outpatient_mask
    ok = [r for r in results if r.optimal]
    table = np.array([r.sinr for r in ok]).reshape(len(ok), K)
    users = []
    for k in range(K):
        col = table[:, k]
        if len(col) >= 2:
            mean, half = confidence_interval(col)
        else:
            mean, half = (float(col[0]) if len(col) else float("nan")), float("nan")
        users.append(UserSummary(k + 1, mean, half, bool(is_op[k]), len(col)))
    means = np.array([u.mean_sinr for u in users])
    if ok:
        avg, sd_n, sd_a = float(means.mean()), fairness_sd(means, ~is_op), fairness_sd(means)
    else:
        avg = sd_n = sd_a = float("nan")
    n_bad = len(results) - len(ok)
    return ExperimentReport(cfg, tuple(users), avg, sd_n, sd_a, len(ok), n_bad,
                            n_bad > DEGRADED_FRACTION * len(results), results,
                            sum(r.nodes for r in results), sum(r.seconds for r in results))


def run_campaign(cfg: ExperimentConfig, scenario: Scenario | None = None) -> ExperimentReport:
    """Solve ``cfg.realizations`` channel draws and aggregate them.

    Realization ``r`` depends only on ``(cfg.seed, r)``, so campaigns with
    the same seed and different approaches see identical channels, and
    results do not depend on ``cfg.workers``.
    """
    scenario = scenario or cfg.load_scenario()
    jobs = [(cfg, scenario, r) for r in range(1, cfg.realizations + 1)]
    if cfg.workers == 1:
        results = [_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_worker, jobs))
    return summarize(cfg, scenario, results)


def run_alpha_sweep(cfg: ExperimentConfig, alphas=ALPHA_SWEEP,
                    scenario: Scenario | None = None) -> dict[float, ExperimentReport]:
    """One prioritized campaign per ``alpha`` on the same channel draws."""
    scenario = scenario or cfg.load_scenario()
    return {float(a): run_campaign(replace(cfg, alpha=float(a), prioritize=True), scenario) for a in alphas}
