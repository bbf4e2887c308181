"""Discretized medical features and the per-outpatient record schema."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError, InvalidArgument


class Feature(enum.IntEnum):
    TOTAL_CHOLESTEROL = 0
    SYSTOLIC_BP = 1
    DIASTOLIC_BP = 2
    SMOKING_RATE = 3


# Level names in ordinal order; the position is the encoded value 0/1/2.
LEVELS: dict[Feature, tuple[str, str, str]] = {
    Feature.TOTAL_CHOLESTEROL: ("Optimal", "Normal", "High"),
    Feature.SYSTOLIC_BP: ("Normal", "Pre-hypertension", "High Hypertension"),
    Feature.DIASTOLIC_BP: ("Normal", "Pre-hypertension", "High Hypertension"),
    Feature.SMOKING_RATE: ("Light", "Moderate", "Heavy"),
}

# Upper-exclusive cut points between consecutive levels.
_CUTS: dict[Feature, tuple[float, float]] = {
    Feature.TOTAL_CHOLESTEROL: (200.0, 240.0),  # mg/dl
    Feature.SYSTOLIC_BP: (120.0, 140.0),  # mmHg
    Feature.DIASTOLIC_BP: (80.0, 90.0),  # mmHg
    Feature.SMOKING_RATE: (11.0, 20.0),  # cigarettes/day
}

CSV_COLUMNS = ("day", "total_cholesterol", "systolic_bp", "diastolic_bp", "smoking_rate", "stroke")
N_FEATURES = len(Feature)
N_LEVELS = 3


def discretize(raw: float, feature: Feature) -> int:
    """Map a raw reading to its level index (0, 1 or 2).

    Non-smokers (0 cigarettes/day) fall in the lowest smoking level.
    """
    if raw < 0:
        raise InvalidArgument(f"negative reading {raw!r} for {Feature(feature).name}")
    lo, hi = _CUTS[Feature(feature)]
    if raw < lo:
        return 0
    if raw < hi:
        return 1
    return 2


def level_name(feature: Feature, level: int) -> str:
    return LEVELS[Feature(feature)][level]


def level_index(feature: Feature, name: str) -> int:
    try:
        return LEVELS[Feature(feature)].index(name)
    except ValueError:
        raise InvalidArgument(
            f"{name!r} is not a level of {Feature(feature).name}; "
            f"expected one of {LEVELS[Feature(feature)]}") from None


@dataclass(frozen=True)
class Record:
    levels: tuple[int, int, int, int]
    stroke: int

    def __post_init__(self):
        if len(self.levels) != N_FEATURES or any(not 0 <= v < N_LEVELS for v in self.levels):
            raise InvalidArgument(f"bad feature levels {self.levels}")
        if self.stroke not in (0, 1):
            raise InvalidArgument(f"stroke class must be 0 or 1, got {self.stroke!r}")


@dataclass(frozen=True)
class CurrentState:
    levels: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.levels) != N_FEATURES or any(not 0 <= v < N_LEVELS for v in self.levels):
            raise InvalidArgument(f"bad feature levels {self.levels}")

    @classmethod
    def from_names(cls, *names: str) -> "CurrentState":
        return cls(tuple(level_index(f, n) for f, n in zip(Feature, names)))

    @classmethod
    def from_readings(cls, cholesterol, systolic, diastolic, smoking) -> "CurrentState":
        raw = (cholesterol, systolic, diastolic, smoking)
        return cls(tuple(discretize(v, f) for f, v in zip(Feature, raw)))


def as_arrays(records) -> tuple[np.ndarray, np.ndarray]:
    """Level matrix (n, 4) and class vector (n,) for a record list."""
    X = np.array([r.levels for r in records], dtype=int).reshape(-1, N_FEATURES)
    y = np.array([r.stroke for r in records], dtype=int)
    return X, y


@dataclass(frozen=True)
class PatientDataset:
    op_id: int
    records: tuple[Record, ...]
    test_records: tuple[Record, ...] = ()

    @property
    def all_records(self) -> tuple[Record, ...]:
        return self.records + self.test_records


def write_csv(records, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for day, rec in enumerate(records, start=1):
            w.writerow([day, *(level_name(f, v) for f, v in zip(Feature, rec.levels)), rec.stroke])


def read_csv(path) -> list[Record]:
    """Load records, validating every level cell against the level table."""
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_COLUMNS:
            raise ConfigError(f"{path}: header must be {','.join(CSV_COLUMNS)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_COLUMNS):
                raise ConfigError(f"{path}:{lineno}: expected {len(CSV_COLUMNS)} cells")
            try:
                levels = tuple(level_index(f, cell.strip()) for f, cell in zip(Feature, row[1:5]))
                stroke = int(row[5])
                out.append(Record(levels, stroke))
            except (InvalidArgument, ValueError) as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return out


def split_dataset(op_id: int, records, n_train: int = 140) -> PatientDataset:
    """Chronological split: first ``n_train`` days train, the rest test."""
    records = tuple(records)
    return PatientDataset(op_id, records[:n_train], records[n_train:])
