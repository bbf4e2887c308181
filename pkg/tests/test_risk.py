import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hetnet_alloc.errors import ConfigError, ConvergenceError, InvalidArgument, TrainError
from hetnet_alloc.risk import (
    CurrentState, Feature, Record, discretize, generate_synthetic_dataset, gini, planted_profile, predict_dt,
    predict_lr, predict_nb, priorities, priority, read_csv, soft_vote, train_dt, train_ensemble, train_lr,
    train_nb, write_csv,
)
from hetnet_alloc.risk.levels import as_arrays
from hetnet_alloc.risk.logistic import _SHIFT, design, gradient, log_likelihood
from hetnet_alloc.risk.tree import Leaf, best_split, choose_split, weighted_gini

levels = st.tuples(*[st.integers(0, 2)] * 4)
records = st.lists(st.builds(Record, levels, st.integers(0, 1)), min_size=1, max_size=20)


# -- levels -------------------------------------------------------------------

@pytest.mark.parametrize("raw,feature,level", [
    (199.9, Feature.TOTAL_CHOLESTEROL, 0), (200.0, Feature.TOTAL_CHOLESTEROL, 1),
    (240.0, Feature.TOTAL_CHOLESTEROL, 2), (119.0, Feature.SYSTOLIC_BP, 0), (139.9, Feature.SYSTOLIC_BP, 1),
    (90.0, Feature.DIASTOLIC_BP, 2), (0.0, Feature.SMOKING_RATE, 0), (11.0, Feature.SMOKING_RATE, 1),
    (25.0, Feature.SMOKING_RATE, 2),
])
def test_discretize_cut_points(raw, feature, level):
    assert discretize(raw, feature) == level


def test_discretize_rejects_negative():
    with pytest.raises(InvalidArgument):
        discretize(-1.0, Feature.SMOKING_RATE)


def test_current_state_constructors():
    a = CurrentState.from_names("High", "Normal", "Pre-hypertension", "Heavy")
    b = CurrentState.from_readings(250.0, 110.0, 85.0, 30.0)
    assert a.levels == b.levels == (2, 0, 1, 2)
    with pytest.raises(InvalidArgument):
        CurrentState((0, 0, 3, 0))


def test_csv_round_trip(tmp_path):
    recs = generate_synthetic_dataset(op_id=2).all_records
    p = tmp_path / "op.csv"
    write_csv(recs, p)
    assert tuple(read_csv(p)) == recs


def test_csv_rejects_bad_level(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("day,total_cholesterol,systolic_bp,diastolic_bp,smoking_rate,stroke\n1,Huge,Normal,Normal,Light,0\n")
    with pytest.raises(ConfigError, match=":2"):
        read_csv(p)


# -- naive Bayes against a count-and-multiply oracle ---------------------------

def nb_oracle(recs, state, alpha=1):
    n = [sum(r.stroke == c for r in recs) for c in (0, 1)]
    joint = []
    for c in (0, 1):
        p = Fraction(n[c], len(recs))
        for f, lvl in enumerate(state):
            cnt = sum(1 for r in recs if r.stroke == c and r.levels[f] == lvl)
            p *= Fraction(cnt + alpha, n[c] + 3 * alpha)
        joint.append(p)
    return joint[1] / (joint[0] + joint[1])


@settings(max_examples=60)
@given(records, levels)
def test_nb_matches_count_oracle(recs, state):
    m = train_nb(recs)
    assert predict_nb(m, CurrentState(state)) == pytest.approx(float(nb_oracle(recs, state)), rel=1e-12, abs=1e-15)


def test_nb_empty_raises():
    with pytest.raises(TrainError):
        train_nb([])


# -- logistic regression ------------------------------------------------------

@settings(max_examples=40)
@given(records, st.lists(st.floats(-2, 2), min_size=5, max_size=5))
def test_lr_gradient_matches_finite_differences(recs, coef):
    X, y = as_arrays(recs)
    Z = design(X, _SHIFT)
    coef = np.array(coef)
    g = gradient(coef, Z, y)
    h = 1e-6
    fd = np.array([(log_likelihood(coef + h * e, Z, y) - log_likelihood(coef - h * e, Z, y)) / (2 * h)
                   for e in np.eye(5)])
    assert np.allclose(g, fd, rtol=1e-4, atol=1e-7)


def test_lr_converges_to_stationary_point():
    recs = generate_synthetic_dataset(op_id=1).records
    m = train_lr(recs)
    X, y = as_arrays(recs)
    assert np.abs(gradient(m.coef, design(X), y)).max() < 1e-3
    # log-likelihood trace is nondecreasing
    assert np.all(np.diff(m.trace) >= -1e-12)


def test_lr_shift_leaves_predictions_unchanged():
    recs = generate_synthetic_dataset(op_id=3).records
    m = train_lr(recs)
    X, _ = as_arrays(recs)
    direct = 1 / (1 + np.exp(-(design(X) @ m.coef)))
    via = [predict_lr(m, CurrentState(r.levels)) for r in recs]
    assert np.allclose(direct, via)


def test_lr_separable_data_reports_nonconvergence():
    recs = [Record((0, 0, 0, 0), 0)] * 5 + [Record((2, 2, 2, 2), 1)] * 5
    with pytest.raises(ConvergenceError) as exc:
        train_lr(recs, max_iter=300)
    assert exc.value.model is not None


def test_lr_single_class_raises():
    with pytest.raises(TrainError):
        train_lr([Record((0, 0, 0, 0), 1)] * 3)


# -- decision tree against exhaustive partitions -------------------------------

def all_partitions():
    # every nonempty proper subset, complements included
    return [s for r in (1, 2) for s in itertools.combinations(range(3), r)]


@settings(max_examples=60)
@given(records)
def test_best_split_matches_exhaustive_partitions(recs):
    X, y = as_arrays(recs)
    for f in range(4):
        got = best_split(X, y, f)
        scores = [weighted_gini(y[np.isin(X[:, f], s)], y[~np.isin(X[:, f], s)])
                  for s in all_partitions() if 0 < np.isin(X[:, f], s).sum() < len(y)]
        if y.min() == y.max() or not scores:
            assert got is None
        else:
            assert got[1] == pytest.approx(min(scores), abs=1e-12)


@settings(max_examples=60)
@given(records)
def test_choose_split_is_global_optimum(recs):
    X, y = as_arrays(recs)
    choice = choose_split(X, y)
    if choice is None:
        return
    parent = gini(np.bincount(y, minlength=2))
    best_gain = max(parent - weighted_gini(y[np.isin(X[:, f], s)], y[~np.isin(X[:, f], s)])
                    for f in range(4) for s in all_partitions() if 0 < np.isin(X[:, f], s).sum() < len(y))
    assert choice[2] == pytest.approx(best_gain, abs=1e-12)


def test_gini_values():
    assert gini([5, 5]) == 0.5
    assert gini([3, 0]) == 0.0
    with pytest.raises(InvalidArgument):
        gini([0, 0])


def test_tree_respects_depth_and_leaf_size():
    recs = generate_synthetic_dataset(op_id=4).records
    m = train_dt(recs, max_depth=3, min_leaf=5)
    assert m.depth() <= 3
    assert all(sum(leaf.counts) >= 5 for leaf in m.leaves())
    assert sum(sum(leaf.counts) for leaf in m.leaves()) == len(recs)


def test_leaf_probability_is_laplace_smoothed():
    assert Leaf((3, 1)).probability() == pytest.approx(2 / 6)
    m = train_dt([Record((0, 0, 0, 0), 1)] * 4)
    assert predict_dt(m, CurrentState((2, 2, 2, 2))) == pytest.approx(5 / 6)


# -- ensemble and priorities --------------------------------------------------

@given(st.lists(st.floats(0, 1), min_size=1, max_size=5))
def test_soft_vote_lies_between_min_and_max(ps):
    v = soft_vote(*ps)
    assert min(ps) - 1e-12 <= v <= max(ps) + 1e-12


def test_soft_vote_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        soft_vote()
    with pytest.raises(InvalidArgument):
        soft_vote(0.3, 1.2)


@pytest.mark.parametrize("p,alpha,up", [(0.84, 10, 9.4), (0.42, 1, 1.42), (0.42, 10, 5.2), (0.65, 10, 7.5),
                                        (0.84, 2, 2.68), (0.84, 5, 5.2)])
def test_priority_values(p, alpha, up):
    assert priority(p, alpha, True) == pytest.approx(up)
    assert priority(p, alpha, False) == 1.0


def test_priority_vector():
    up = priorities(7, (0.42, 0.84, 0.65), 10)
    assert np.allclose(up, [1] * 7 + [5.2, 9.4, 7.5])


@given(st.floats(0.01, 1), st.floats(0, 50), st.floats(0, 50))
def test_priority_increases_with_alpha(p, a1, a2):
    if a1 < a2:
        assert priority(p, a1, True) <= priority(p, a2, True)
        # strict once the step survives rounding against the leading 1
        if (a2 - a1) * p > 1e-12:
            assert priority(p, a1, True) < priority(p, a2, True)


def test_priority_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        priority(0.5, -1, True)
    with pytest.raises(InvalidArgument):
        priority(1.5, 1, True)


def test_ensemble_prediction_is_mean_of_bases():
    ds = generate_synthetic_dataset(op_id=5)
    model = train_ensemble(ds.records)
    cs = CurrentState(ds.test_records[0].levels)
    assert model.predict(cs) == pytest.approx(np.mean(model.base_probabilities(cs)))


def test_planted_profile_bayes_accuracy():
    assert 0.85 < planted_profile().bayes_accuracy() < 0.93


def test_synthetic_dataset_is_deterministic():
    a = generate_synthetic_dataset(rng=np.random.default_rng(1))
    b = generate_synthetic_dataset(rng=np.random.default_rng(1))
    assert a == b
    assert len(a.records) == 140 and len(a.test_records) == 60
