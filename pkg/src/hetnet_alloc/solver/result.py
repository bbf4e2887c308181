from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..status import Status


@dataclass
class LpSolution:
    """Outcome of an LP or MILP solve.

    ``values`` holds one entry per program variable (NaN when no point is
    available). ``root_bound``/``best_bound`` and ``nodes`` are filled by
    branch-and-bound; a plain LP reports its own objective as the bound.
    """

    values: np.ndarray
    objective: float
    status: Status
    iterations: int = 0
    nodes: int = 0
    root_bound: float = float("nan")
    best_bound: float = float("nan")
    engine: str = "simplex"

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @property
    def gap(self) -> float:
        if not np.isfinite(self.objective) or not np.isfinite(self.best_bound):
            return float("nan")
        return (self.best_bound - self.objective) / max(1.0, abs(self.objective))


def format_solution(prog, sol: LpSolution) -> str:
    """Debug dump: status line, objective, then ``name=value`` per variable."""
    lines = [f"status={sol.status}", f"objective={sol.objective!r}"]
    for v, val in zip(prog.variables, sol.values):
        lines.append(f"{v.name}={float(val)!r}")
    return "\n".join(lines) + "\n"
