from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Every numerical threshold used by the LP and branch-and-bound engines."""

    feasibility: float = 1e-7
    optimality: float = 1e-9     # reduced-cost threshold, scaled by the cost norm
    pivot: float = 1e-11     # ratio-test zero, relative to the largest pivot-column entry
    integrality: float = 1e-6
    relative_gap: float = 1e-6
    refactor_every: int = 50
    bland_after_factor: int = 3  # switch to Bland's rule after this many (rows + cols) pivots
    max_iterations: int = 200_000
    node_limit: int = 200_000


DEFAULT_TOLERANCES = Tolerances()
