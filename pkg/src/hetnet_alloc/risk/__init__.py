"""Stroke-risk ensemble: naive Bayes, logistic regression, Gini tree, soft vote."""

from .ensemble import EnsembleModel, priorities, priority, soft_vote, train_ensemble
from .levels import (
    CurrentState, Feature, LEVELS, PatientDataset, Record, discretize, read_csv, split_dataset, write_csv,
)
from .logistic import LrModel, predict_lr, train_lr
from .naive_bayes import NbModel, predict_nb, train_nb
from .synthetic import Profile, generate_synthetic_dataset, planted_profile
from .tree import DtModel, best_split, gini, predict_dt, train_dt

__all__ = [
    "CurrentState", "DtModel", "EnsembleModel", "Feature", "LEVELS", "LrModel", "NbModel",
    "PatientDataset", "Profile", "Record", "best_split", "discretize", "generate_synthetic_dataset",
    "gini", "planted_profile", "predict_dt", "predict_lr", "predict_nb", "priorities", "priority",
    "read_csv", "soft_vote", "split_dataset", "train_dt", "train_ensemble", "train_lr", "train_nb",
    "write_csv",
]
