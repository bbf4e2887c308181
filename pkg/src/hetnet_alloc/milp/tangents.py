"""Tangent-line envelopes of ``ln`` used to linearize log-SINR terms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BuildError, InvalidArgument

N_TANGENTS = 12


@dataclass(frozen=True)
class TangentSet:
    """Tangents to ``ln`` at the given abscissae, sorted ascending.

    Line ``j`` reads ``l <= s / a_j + ln(a_j) - 1``. The pointwise minimum of
    the lines lies above ``ln`` and touches it at every ``a_j``.
    """

    abscissae: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(v) for v in self.abscissae)
        if not a:
            raise BuildError("tangent set is empty")
        if any(not (v > 0 and math.isfinite(v)) for v in a):
            raise BuildError("tangent abscissae must be finite and positive")
        if any(b <= c for c, b in zip(a, a[1:])):
            raise BuildError("tangent abscissae must be strictly increasing")
        object.__setattr__(self, "abscissae", a)

    @property
    def slopes(self) -> np.ndarray:
        return 1.0 / np.asarray(self.abscissae)

    @property
    def intercepts(self) -> np.ndarray:
        return np.log(self.abscissae) - 1.0

    @property
    def interval(self) -> tuple[float, float]:
        return self.abscissae[0], self.abscissae[-1]

    def envelope(self, s):
        s = np.asarray(s, dtype=float)
        vals = np.multiply.outer(s, self.slopes) + self.intercepts
        return vals.min(axis=-1)

    def gap_bound(self) -> float:
        """Largest ``envelope(s) - ln(s)`` over the covered interval.

        The difference is convex between neighbouring tangency points, so
        its maximum sits where two neighbouring lines cross.
        """
        a = np.asarray(self.abscissae)
        if a.size == 1:
            return 0.0
        lo, hi = a[:-1], a[1:]
        cross = lo * hi * np.log(hi / lo) / (hi - lo)
        gaps = cross / lo + np.log(lo) - 1.0 - np.log(cross)
        return float(max(gaps.max(), 0.0))


def geometric_tangents(lo: float, hi: float, n: int = N_TANGENTS) -> TangentSet:
    if not 0 < lo < hi:
        raise InvalidArgument(f"tangent interval must satisfy 0 < lo < hi, got ({lo}, {hi})")
    if n < 2:
        raise InvalidArgument("need at least two tangent lines to span an interval")
    return TangentSet(tuple(np.geomspace(lo, hi, n)))
