"""Campaign configuration."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..channel import Scenario, ScenarioConfig, generate_scenario
from ..errors import ConfigError
from ..milp.patterns import APPROACHES
from ..solver import ENGINES

ALPHA_SWEEP = (1.0, 2.0, 5.0, 10.0)
# soft-voted stroke likelihoods of the three outpatients
DEFAULT_P_VOTING = (0.42, 0.84, 0.65)
FORMULATIONS = ("pattern", "phi")


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte-Carlo campaign.

    ``scenario`` is a JSON scenario file; ``None`` means the default
    three-cell layout. ``psi`` only matters for ``pf-rel``. ``engine`` and
    ``formulation`` pick the solver back end and the program shape; both
    reach the same optimum.
    """

    approach: str = "wsrmax"
    prioritize: bool = False
    alpha: float = 10.0
    realizations: int = 300
    seed: int = 0
    scenario: str | Path | None = None
    psi: float = 127.0
    p_voting: tuple[float, ...] = DEFAULT_P_VOTING
    engine: str = "highs"
    formulation: str = "pattern"
    workers: int = 1

    def __post_init__(self):
        if self.approach not in APPROACHES:
            raise ConfigError(f"unknown approach {self.approach!r}; expected one of {APPROACHES}")
        if self.realizations < 1:
            raise ConfigError(f"realizations must be >= 1, got {self.realizations}")
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise ConfigError(f"alpha must be a non-negative number, got {self.alpha!r}")
        if self.psi < 0:
            raise ConfigError(f"psi must be non-negative, got {self.psi!r}")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; expected one of {ENGINES}")
        if self.formulation not in FORMULATIONS:
            raise ConfigError(f"unknown formulation {self.formulation!r}; expected one of {FORMULATIONS}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "p_voting", tuple(float(p) for p in self.p_voting))
        if any(not 0.0 <= p <= 1.0 for p in self.p_voting):
            raise ConfigError(f"p_voting values must lie in [0, 1], got {self.p_voting}")

    def scenario_config(self) -> ScenarioConfig:
        return ScenarioConfig() if self.scenario is None else ScenarioConfig.load(self.scenario)

    def load_scenario(self) -> Scenario:
        sc = generate_scenario(self.scenario_config())
        n_op = sc.n_users - sc.n_normal_users
        if n_op != len(self.p_voting):
            raise ConfigError(f"scenario has {n_op} outpatients but {len(self.p_voting)} p_voting values")
        return sc
