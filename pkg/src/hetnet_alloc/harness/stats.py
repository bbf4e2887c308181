"""Confidence intervals and SD fairness."""

from __future__ import annotations

from statistics import NormalDist

import numpy as np

from ..errors import InvalidArgument

Z_95 = 1.96


def _z(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise InvalidArgument(f"confidence level must lie in (0, 1), got {level!r}")
    if level == 0.95:
        return Z_95
    return NormalDist().inv_cdf(0.5 + level / 2.0)


def confidence_interval(samples, level: float = 0.95) -> tuple[float, float]:
    """Mean and normal-approximation half-width ``z * s / sqrt(n)``.

    ``s`` is the sample (n - 1) standard deviation; ``z`` is 1.96 at 95%.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise InvalidArgument(f"a confidence interval needs >= 2 samples, got {x.size}")
    sd = float(np.std(x, ddof=1))
    return float(np.mean(x)), _z(level) * sd / np.sqrt(x.size)


def fairness_sd(sinr, select=None) -> float:
    """Population standard deviation of the selected users' SINRs.

    ``select`` is a boolean mask or an index array; ``None`` takes everyone.
    """
    s = np.asarray(sinr, dtype=float).ravel()
    chosen = s if select is None else s[np.asarray(select)]
    if chosen.size < 2:
        raise InvalidArgument(f"SD fairness needs >= 2 users, got {chosen.size}")
    return float(np.std(chosen, ddof=0))
