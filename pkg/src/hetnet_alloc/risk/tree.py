"""Gini decision tree over categorical levels with binary subset splits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument, TrainError
from .levels import N_FEATURES, N_LEVELS, CurrentState, as_arrays

GAIN_EPS = 1e-12


def gini(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise InvalidArgument("gini of an empty subset is undefined")
    p = counts / total
    return float(1.0 - np.sum(p * p))


def candidate_subsets(n_levels: int = N_LEVELS) -> list[tuple[int, ...]]:
    """Nonempty proper level subsets, one per {S, complement} pair.

    The kept representative is the smaller side, or the side holding level 0
    when both halves have equal size. Returned in lexicographic order.
    """
    out = []
    for r in range(1, n_levels):
        for s in itertools.combinations(range(n_levels), r):
            if len(s) < n_levels - len(s) or (2 * len(s) == n_levels and 0 in s):
                out.append(s)
    return sorted(out)


def _class_counts(y) -> np.ndarray:
    return np.bincount(y, minlength=2).astype(float)


def weighted_gini(y_left, y_right) -> float:
    n = len(y_left) + len(y_right)
    return (len(y_left) / n) * gini(_class_counts(y_left)) + (len(y_right) / n) * gini(_class_counts(y_right))


def best_split(X, y, feature: int, min_leaf: int = 1):
    """Best binary split of one feature.

    Returns ``(subset, weighted_gini)`` or ``None`` when the node is pure or
    no subset yields two children of at least ``min_leaf`` records.
    """
    X = np.asarray(X)
    y = np.asarray(y)
    if len(y) == 0 or y.min() == y.max():
        return None
    best = None
    col = X[:, feature]
    for subset in candidate_subsets():
        mask = np.isin(col, subset)
        n_left = int(mask.sum())
        if n_left < min_leaf or len(y) - n_left < min_leaf:
            continue
        g = weighted_gini(y[mask], y[~mask])
        if best is None or g < best[1] - GAIN_EPS:
            best = (subset, g)
    return best


def gini_gain(y, weighted: float) -> float:
    return gini(_class_counts(np.asarray(y))) - weighted


@dataclass(frozen=True)
class Leaf:
    counts: tuple[int, int]  # (no stroke, stroke)

    def probability(self, smoothing: float = 1.0) -> float:
        n0, n1 = self.counts
        return (n1 + smoothing) / (n0 + n1 + 2.0 * smoothing)


@dataclass(frozen=True)
class Split:
    feature: int
    subset: tuple[int, ...]  # levels routed left
    gain: float
    left: "Leaf | Split"
    right: "Leaf | Split"


@dataclass(frozen=True)
class DtModel:
    root: Leaf | Split
    smoothing: float = 1.0

    def leaf_for(self, levels) -> Leaf:
        node = self.root
        while isinstance(node, Split):
            node = node.left if levels[node.feature] in node.subset else node.right
        return node

    def leaves(self) -> list[Leaf]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                out.append(node)
            else:
                stack.extend((node.right, node.left))
        return out

    def splits(self) -> list[Split]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Split):
                out.append(node)
                stack.extend((node.right, node.left))
        return out

    def depth(self) -> int:
        def _d(node):
            return 0 if isinstance(node, Leaf) else 1 + max(_d(node.left), _d(node.right))
        return _d(self.root)


def choose_split(X, y, min_leaf: int = 1):
    """Best (feature, subset, gain) over all features, or None.

    Ties go to the lowest feature index, then the smallest subset.
    """
    best = None
    for f in range(N_FEATURES):
        cand = best_split(X, y, f, min_leaf)
        if cand is None:
            continue
        gain = gini_gain(y, cand[1])
        if best is None or gain > best[2] + GAIN_EPS:
            best = (f, cand[0], gain)
    return best


def _grow(X, y, depth, max_depth, min_leaf):
    counts = tuple(int(c) for c in np.bincount(y, minlength=2))
    if depth >= max_depth or y.min() == y.max() or len(y) < 2 * min_leaf:
        return Leaf(counts)
    choice = choose_split(X, y, min_leaf)
    if choice is None or choice[2] <= GAIN_EPS:
        return Leaf(counts)
    f, subset, gain = choice
    mask = np.isin(X[:, f], subset)
    return Split(
        f, subset, gain,
        _grow(X[mask], y[mask], depth + 1, max_depth, min_leaf),
        _grow(X[~mask], y[~mask], depth + 1, max_depth, min_leaf),
    )


def train_dt(records, max_depth: int = 6, min_leaf: int = 5, smoothing: float = 1.0) -> DtModel:
    X, y = as_arrays(records)
    if len(y) == 0:
        raise TrainError("cannot grow a decision tree on an empty dataset")
    return DtModel(_grow(X, y, 0, max_depth, min_leaf), smoothing)


def predict_dt(m: DtModel, cs: CurrentState) -> float:
    return m.leaf_for(cs.levels).probability(m.smoothing)
