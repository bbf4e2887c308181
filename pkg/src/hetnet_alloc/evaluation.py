"""Confusion counts, percentage metrics and k-fold cross-validation."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import InvalidArgument
from .risk.ensemble import train_ensemble
from .risk.levels import CurrentState
from .risk.logistic import predict_lr, train_lr
from .risk.naive_bayes import predict_nb, train_nb
from .risk.tree import predict_dt, train_dt

THRESHOLD = 0.5
CLASSIFIERS = ("NB", "LR", "DT", "SV")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricReport:
    """Percentages; ``None`` marks a metric whose denominator is zero."""

    accuracy: float | None
    recall: float | None
    specificity: float | None
    precision: float | None
    npv: float | None
    fpr: float | None
    fnr: float | None
    f1: float | None  # in [0, 1]

    def as_row(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                out.append("undefined")
            elif f.name == "f1":
                out.append(f"{100.0 * v:.4f}")
            else:
                out.append(f"{v:.4f}")
        return out


def _ratio(num, den):
    return None if den == 0 else 100.0 * num / den


def confusion(predict: Callable[[CurrentState], float], test, threshold: float = THRESHOLD) -> ConfusionCounts:
    """Tally outcomes; a probability at or above ``threshold`` is a positive call."""
    test = list(test)
    if not test:
        raise InvalidArgument("confusion counts need a non-empty test set")
    if not 0.0 < threshold < 1.0:
        raise InvalidArgument(f"threshold {threshold!r} outside (0, 1)")
    tp = tn = fp = fn = 0
    for rec in test:
        positive = predict(CurrentState(rec.levels)) >= threshold
        if positive and rec.stroke:
            tp += 1
        elif positive:
            fp += 1
        elif rec.stroke:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp, tn, fp, fn)


def metrics(c: ConfusionCounts) -> MetricReport:
    precision = _ratio(c.tp, c.tp + c.fp)
    recall = _ratio(c.tp, c.tp + c.fn)
    if precision is None or recall is None:
        f1 = None
    elif precision + recall == 0:
        f1 = None
    else:
        # harmonic mean of the two ratios, kept on the [0, 1] scale
        p, r = precision / 100.0, recall / 100.0
        f1 = 2.0 * p * r / (p + r)
    return MetricReport(
        accuracy=_ratio(c.tp + c.tn, c.total),
        recall=recall,
        specificity=_ratio(c.tn, c.tn + c.fp),
        precision=precision,
        npv=_ratio(c.tn, c.tn + c.fn),
        fpr=_ratio(c.fp, c.fp + c.tn),
        fnr=_ratio(c.fn, c.fn + c.tp),
        f1=f1,
    )


def fit_classifier(name: str, records) -> Callable[[CurrentState], float]:
    """Train one of NB/LR/DT/SV and return its probability function."""
    name = name.upper()
    if name == "NB":
        m = train_nb(records)
        return lambda cs: predict_nb(m, cs)
    if name == "LR":
        m = train_lr(records)
        return lambda cs: predict_lr(m, cs)
    if name == "DT":
        m = train_dt(records)
        return lambda cs: predict_dt(m, cs)
    if name == "SV":
        return train_ensemble(records).predict
    raise InvalidArgument(f"unknown classifier {name!r}; expected one of {CLASSIFIERS}")


def k_fold_cv(records, k: int, classifier: str | Callable, rng: np.random.Generator) -> float:
    """Mean held-out accuracy (%) over ``k`` contiguous folds of one shuffle.

    ``classifier`` is a name accepted by :func:`fit_classifier` or a callable
    mapping a training list to a probability function.
    """
    records = list(records)
    if k < 2:
        raise InvalidArgument("k-fold cross-validation needs k >= 2")
    if len(records) < k:
        raise InvalidArgument(f"{len(records)} records cannot fill {k} folds")
    fit = classifier if callable(classifier) else (lambda recs: fit_classifier(classifier, recs))
    order = rng.permutation(len(records))
    accs = []
    for fold in np.array_split(order, k):
        held = set(fold.tolist())
        train = [records[i] for i in order if i not in held]
        test = [records[i] for i in fold]
        c = confusion(fit(train), test)
        accs.append(100.0 * (c.tp + c.tn) / c.total)
    return float(np.mean(accs))


METRIC_HEADER = ("dataset", "classifier", "accuracy", "recall", "specificity", "precision",
                 "npv", "fpr", "fnr", "f1", "tp", "tn", "fp", "fn", "cv_accuracy")


def write_metric_rows(rows, path) -> None:
    """``rows``: iterable of (dataset, classifier, ConfusionCounts, MetricReport, cv or None)."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(METRIC_HEADER)
            for dataset, clf, counts, report, cv in rows:
                cv_cell = "" if cv is None else f"{cv:.4f}"
                w.writerow([dataset, clf, *report.as_row(), *astuple(counts), cv_cell])
    except OSError as exc:
        raise OSError(f"cannot write metric report to {path}: {exc}") from exc
