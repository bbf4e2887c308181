"""Synthetic outpatient histories with planted class-conditional structure.

Records are drawn with features conditionally independent given the stroke
class, so the Bayes-optimal accuracy of a profile can be computed exactly by
enumerating the 81 level vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .levels import N_FEATURES, N_LEVELS, PatientDataset, Record

_MILD = (0.55, 0.30, 0.15)
_STRONG = (0.60, 0.30, 0.10)


@dataclass(frozen=True)
class Profile:
    """Stroke prior and per-class level distributions, shape (2, 4, 3)."""

    stroke_prior: float
    level_probs: tuple

    def validate(self) -> np.ndarray:
        probs = np.asarray(self.level_probs, dtype=float)
        if probs.shape != (2, N_FEATURES, N_LEVELS):
            raise ConfigError(f"level_probs must have shape (2, 4, 3), got {probs.shape}")
        if np.any(probs < 0) or not np.allclose(probs.sum(axis=2), 1.0, atol=1e-9):
            raise ConfigError("each class/feature level distribution must be a probability vector")
        if not 0.0 < self.stroke_prior < 1.0:
            raise ConfigError(f"stroke prior {self.stroke_prior!r} makes one class impossible")
        return probs

    def bayes_accuracy(self) -> float:
        probs = self.validate()
        prior = (1.0 - self.stroke_prior, self.stroke_prior)
        acc = 0.0
        for levels in itertools.product(range(N_LEVELS), repeat=N_FEATURES):
            joint = [prior[c] * np.prod(probs[c, np.arange(N_FEATURES), levels]) for c in (0, 1)]
            acc += max(joint)
        return float(acc)


def planted_profile(stroke_prior: float = 0.42) -> Profile:
    """Strong-separation profile (Bayes accuracy about 89%).

    Non-stroke days favour the lowest level of every feature, stroke days
    the highest.
    """
    healthy = (_MILD, _STRONG, _MILD, _STRONG)
    at_risk = tuple(tuple(reversed(p)) for p in healthy)
    return Profile(stroke_prior, (healthy, at_risk))


def generate_records(profile: Profile, n: int, rng: np.random.Generator) -> list[Record]:
    probs = profile.validate()
    cls = (rng.random(n) < profile.stroke_prior).astype(int)
    out = []
    for c in cls:
        levels = tuple(int(rng.choice(N_LEVELS, p=probs[c, f])) for f in range(N_FEATURES))
        out.append(Record(levels, int(c)))
    return out


def generate_synthetic_dataset(profile: Profile | None = None, rng: np.random.Generator | None = None,
                               n_train: int = 140, n_test: int = 60, op_id: int = 1) -> PatientDataset:
    """One outpatient's history: ``n_train + n_test`` days, split chronologically."""
    profile = profile or planted_profile()
    if rng is None:
        rng = np.random.default_rng(op_id)
    if n_train < 1 or n_test < 0:
        raise ConfigError("need at least one training record")
    records = generate_records(profile, n_train + n_test, rng)
    train = records[:n_train]
    if len({r.stroke for r in train}) < 2:
        raise ConfigError("generated training set holds a single class; enlarge it or change the prior")
    return PatientDataset(op_id, tuple(train), tuple(records[n_train:]))
