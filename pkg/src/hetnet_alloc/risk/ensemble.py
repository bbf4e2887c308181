"""Soft-voting ensemble and its conversion into allocation priorities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument
from .levels import CurrentState
from .logistic import LrModel, predict_lr, train_lr
from .naive_bayes import NbModel, predict_nb, train_nb
from .tree import DtModel, predict_dt, train_dt


def soft_vote(*probs: float) -> float:
    """Unweighted mean of the base classifiers' stroke probabilities."""
    if not probs:
        raise InvalidArgument("soft vote needs at least one probability")
    for p in probs:
        if not 0.0 <= p <= 1.0:
            raise InvalidArgument(f"probability {p!r} outside [0, 1]")
    return float(sum(probs) / len(probs))


def priority(p_voting: float, alpha: float, is_outpatient: bool) -> float:
    """User weight: 1 for normal users, ``1 + alpha * p_voting`` for outpatients."""
    if alpha < 0:
        raise InvalidArgument(f"alpha must be non-negative, got {alpha!r}")
    if not 0.0 <= p_voting <= 1.0:
        raise InvalidArgument(f"p_voting {p_voting!r} outside [0, 1]")
    if not is_outpatient:
        return 1.0
    return 1.0 + alpha * p_voting


def priorities(n_normal: int, p_votings, alpha: float) -> np.ndarray:
    """Priority vector for users ordered normal-first, outpatients last."""
    ups = [priority(0.0, alpha, False)] * n_normal
    ups += [priority(p, alpha, True) for p in p_votings]
    return np.array(ups)


@dataclass(frozen=True)
class EnsembleModel:
    nb: NbModel
    lr: LrModel
    dt: DtModel

    def base_probabilities(self, cs: CurrentState) -> tuple[float, float, float]:
        return predict_nb(self.nb, cs), predict_lr(self.lr, cs), predict_dt(self.dt, cs)

    def predict(self, cs: CurrentState) -> float:
        return soft_vote(*self.base_probabilities(cs))


def train_ensemble(records, **dt_params) -> EnsembleModel:
    records = list(records)
    return EnsembleModel(train_nb(records), train_lr(records), train_dt(records, **dt_params))
