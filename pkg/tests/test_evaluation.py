import csv

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hetnet_alloc.errors import InvalidArgument
from hetnet_alloc.evaluation import (
    METRIC_HEADER, ConfusionCounts, confusion, k_fold_cv, metrics, write_metric_rows,
)
from hetnet_alloc.risk import Record, generate_synthetic_dataset

counts = st.builds(ConfusionCounts, *[st.integers(0, 200)] * 4).filter(lambda c: c.total > 0)


@given(counts)
def test_metric_identities(c):
    m = metrics(c)
    if m.fpr is not None:
        assert m.fpr + m.specificity == pytest.approx(100.0, abs=1e-9)
    if m.fnr is not None:
        assert m.fnr + m.recall == pytest.approx(100.0, abs=1e-9)
    if m.f1 is not None:
        p, r = m.precision / 100, m.recall / 100
        assert m.f1 == pytest.approx(2 * p * r / (p + r))
        assert min(p, r) - 1e-12 <= m.f1 <= max(p, r) + 1e-12
    assert 0.0 <= m.accuracy <= 100.0


def test_undefined_metrics_are_none():
    m = metrics(ConfusionCounts(0, 5, 0, 0))
    assert m.recall is None and m.precision is None and m.f1 is None and m.fnr is None
    assert m.as_row()[1] == "undefined"


def test_reconstructed_sv_row():
    # tp, tn, fp, fn for the soft vote of outpatient 3: "SV 93 88 97.1"
    m = metrics(ConfusionCounts(22, 34, 1, 3))
    assert round(m.accuracy) == 93
    assert round(m.recall) == 88
    assert round(m.specificity, 1) == 97.1


def test_confusion_tallies_and_threshold():
    test = [Record((0, 0, 0, 0), 1), Record((0, 0, 0, 0), 0), Record((2, 2, 2, 2), 1), Record((2, 2, 2, 2), 0)]
    c = confusion(lambda cs: 0.9 if cs.levels[0] == 2 else 0.1, test)
    assert c == ConfusionCounts(tp=1, tn=1, fp=1, fn=1)
    # a probability exactly at the threshold counts as positive
    assert confusion(lambda cs: 0.5, test) == ConfusionCounts(2, 0, 2, 0)
    with pytest.raises(InvalidArgument):
        confusion(lambda cs: 0.5, [])


def test_k_fold_is_seeded_and_bounded():
    recs = generate_synthetic_dataset(op_id=1).all_records
    a = k_fold_cv(recs, 10, "NB", np.random.default_rng(0))
    b = k_fold_cv(recs, 10, "NB", np.random.default_rng(0))
    assert a == b and 0 <= a <= 100
    with pytest.raises(InvalidArgument):
        k_fold_cv(recs, 1, "NB", np.random.default_rng(0))
    with pytest.raises(InvalidArgument):
        k_fold_cv(recs[:3], 10, "NB", np.random.default_rng(0))


def test_k_fold_accepts_callable():
    recs = generate_synthetic_dataset(op_id=1).all_records
    acc = k_fold_cv(recs, 5, lambda train: (lambda cs: 1.0), np.random.default_rng(0))
    assert acc == pytest.approx(100.0 * sum(r.stroke for r in recs) / len(recs))


def test_write_metric_rows(tmp_path):
    c = ConfusionCounts(22, 34, 1, 3)
    p = tmp_path / "m.csv"
    write_metric_rows([("op3", "SV", c, metrics(c), None)], p)
    rows = list(csv.reader(p.open()))
    assert tuple(rows[0]) == METRIC_HEADER
    assert rows[1][:3] == ["op3", "SV", "93.3333"] and rows[1][-5:] == ["22", "34", "1", "3", ""]
