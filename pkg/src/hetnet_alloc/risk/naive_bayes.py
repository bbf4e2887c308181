"""Categorical naive Bayes with add-one smoothed likelihoods."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TrainError
from .levels import N_FEATURES, N_LEVELS, CurrentState, as_arrays


@dataclass(frozen=True)
class NbModel:
    prior: np.ndarray  # (2,)
    cond_counts: np.ndarray  # (feature, level, class)
    class_counts: np.ndarray  # (2,)
    alpha: float = 1.0

    def likelihood(self, feature: int, level: int, cls: int) -> float:
        num = self.cond_counts[feature, level, cls] + self.alpha
        return num / (self.class_counts[cls] + self.alpha * N_LEVELS)


def train_nb(records, alpha: float = 1.0) -> NbModel:
    X, y = as_arrays(records)
    if len(y) == 0:
        raise TrainError("cannot train naive Bayes on an empty dataset")
    counts = np.zeros((N_FEATURES, N_LEVELS, 2))
    for f in range(N_FEATURES):
        np.add.at(counts[f], (X[:, f], y), 1.0)
    class_counts = np.bincount(y, minlength=2).astype(float)
    return NbModel(class_counts / class_counts.sum(), counts, class_counts, alpha)


def posterior(m: NbModel, cs: CurrentState) -> np.ndarray:
    """Normalized class posteriors ``[P(C=0|cs), P(C=1|cs)]``."""
    joint = np.array([
        m.prior[c] * np.prod([m.likelihood(f, lvl, c) for f, lvl in enumerate(cs.levels)])
        for c in (0, 1)
    ])
    return joint / joint.sum()


def predict_nb(m: NbModel, cs: CurrentState) -> float:
    return float(posterior(m, cs)[1])
