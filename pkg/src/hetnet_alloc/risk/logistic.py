"""Logistic regression on ordinally encoded levels, fitted by gradient ascent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConvergenceError, TrainError
from .levels import CurrentState, as_arrays

LEARNING_RATE = 0.1
MAX_ITER = 20000
TOL = 1e-8


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x, dtype=float)))


@dataclass(frozen=True)
class LrModel:
    beta0: float
    betas: tuple[float, float, float, float]
    iterations: int = 0
    trace: tuple[float, ...] = field(default=(), repr=False)

    @property
    def coef(self) -> np.ndarray:
        return np.array((self.beta0, *self.betas))


# Ascent runs on levels shifted to {-1, 0, 1}: same model, far better
# conditioned than raw 0/1/2 codes next to the intercept column.
_SHIFT = 1.0


def design(X, shift: float = 0.0) -> np.ndarray:
    X = np.asarray(X, dtype=float) - shift
    return np.hstack([np.ones((X.shape[0], 1)), X])


def _unshift(coef) -> np.ndarray:
    """Map coefficients of the shifted design back to the 0/1/2 encoding."""
    out = np.array(coef, dtype=float)
    out[0] -= _SHIFT * out[1:].sum()
    return out


def log_likelihood(coef, Z, y) -> float:
    """Mean binomial log-likelihood of classes ``y`` under logits ``Z @ coef``."""
    x = Z @ coef
    # log sigma(x) = -log(1+e^-x), log(1-sigma(x)) = -log(1+e^x)
    ll = -(y * np.logaddexp(0.0, -x) + (1 - y) * np.logaddexp(0.0, x))
    return float(ll.mean())


def gradient(coef, Z, y) -> np.ndarray:
    return Z.T @ (y - sigmoid(Z @ coef)) / len(y)


def train_lr(records, learning_rate=LEARNING_RATE, max_iter=MAX_ITER, tol=TOL) -> LrModel:
    X, y = as_arrays(records)
    if len(y) == 0 or y.min() == y.max():
        raise TrainError("logistic regression needs both classes in the training set")
    Z = design(X, _SHIFT)
    coef = np.zeros(Z.shape[1])
    ll = log_likelihood(coef, Z, y)
    trace = [ll]
    for it in range(1, max_iter + 1):
        coef = coef + learning_rate * gradient(coef, Z, y)
        new_ll = log_likelihood(coef, Z, y)
        trace.append(new_ll)
        if new_ll - ll < tol:
            out = _unshift(coef)
            return LrModel(float(out[0]), tuple(map(float, out[1:])), it, tuple(trace))
        ll = new_ll
    out = _unshift(coef)
    model = LrModel(float(out[0]), tuple(map(float, out[1:])), max_iter, tuple(trace))
    raise ConvergenceError(
        f"logistic regression did not converge in {max_iter} iterations", model=model, trace=trace)


def predict_lr(m: LrModel, cs: CurrentState) -> float:
    x = m.beta0 + float(np.dot(m.betas, cs.levels))
    return float(sigmoid(x))
