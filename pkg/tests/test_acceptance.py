"""Acceptance criteria, each checked at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary. Campaigns are shared between criteria through
module-scoped fixtures.
"""

import json
import time
from dataclasses import replace

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from hetnet_alloc.channel import ScenarioConfig
from hetnet_alloc.cli import main
from hetnet_alloc.evaluation import ConfusionCounts, k_fold_cv, metrics
from hetnet_alloc.harness import ALPHA_SWEEP, ExperimentConfig, oracle_agreement, run_campaign
from hetnet_alloc.risk import generate_synthetic_dataset
from hetnet_alloc.solver import DEFAULT_TOLERANCES

pytestmark = pytest.mark.slow

SEED = 2024
PAIRS = 100
SWEEP_REALIZATIONS = 20
RELIABILITY_REALIZATIONS = 20
COMPACT = ScenarioConfig(mbs_range_m=(50.0, 200.0))


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def wsr_plain():
    return timed(lambda: run_campaign(ExperimentConfig(approach="wsrmax", realizations=PAIRS, seed=SEED)))


@pytest.fixture(scope="module")
def wsr_alpha10():
    cfg = ExperimentConfig(approach="wsrmax", prioritize=True, alpha=10.0, realizations=PAIRS, seed=SEED)
    return timed(lambda: run_campaign(cfg))


@pytest.fixture(scope="module")
def pf_plain():
    return timed(lambda: run_campaign(ExperimentConfig(approach="pf", realizations=PAIRS, seed=SEED)))


@pytest.fixture(scope="module")
def sweep():
    base = ExperimentConfig(approach="wsrmax", prioritize=True, realizations=SWEEP_REALIZATIONS, seed=SEED)
    return {a: run_campaign(replace(base, alpha=float(a))) for a in ALPHA_SWEEP}


@pytest.fixture(scope="module")
def reliability(tmp_path_factory):
    path = tmp_path_factory.mktemp("scenario") / "compact.json"
    path.write_text(json.dumps(COMPACT.to_dict()))
    base = ExperimentConfig(approach="pf-rel", psi=127.0, realizations=RELIABILITY_REALIZATIONS, seed=SEED)
    return {"default-layout": run_campaign(base), "compact": run_campaign(replace(base, scenario=path))}


def test_1_oracle_equivalence():
    checks, secs = timed(lambda: oracle_agreement(50, seed=SEED))
    bad = [c for c in checks if not c.ok]
    wsr = [c for c in checks if c.mode == "wsrmax"]
    ok = not bad and len(wsr) == 50 and secs < 120.0
    report("1 oracle equivalence", ok,
           f"{len(checks) - len(bad)}/{len(checks)} toy checks agree over 50 instances and "
           f"{len({c.mode for c in checks})} modes in {secs:.1f}s (limit 120s)")
    for c in bad:
        print(c.line())
    assert ok


def test_3_prioritization_trend(wsr_plain, wsr_alpha10):
    (plain, t_plain), (prio, t_prio) = wsr_plain, wsr_alpha10
    op = plain.is_op
    paired = [(a, b) for a, b in zip(plain.realizations, prio.realizations) if a.optimal and b.optimal]
    base = np.mean([a.sinr[op].mean() for a, _ in paired])
    boosted = np.mean([b.sinr[op].mean() for _, b in paired])
    ratio = boosted / base
    secs = t_plain + t_prio
    ok = len(paired) == PAIRS and ratio >= 1.25 and secs < 900.0
    report("3 prioritization trend", ok,
           f"mean OP SINR {boosted:.2f} (alpha=10) vs {base:.2f} (plain), ratio {ratio:.3f} >= 1.25 "
           f"over {len(paired)} pairs in {secs:.0f}s (limit 900s)")
    assert ok


def test_4_pf_fairness(wsr_plain, pf_plain):
    (wsr, _), (pf, t_pf) = wsr_plain, pf_plain
    normal = ~wsr.is_op
    pairs = [(np.std(a.sinr[normal]), np.std(b.sinr[normal]))
             for a, b in zip(wsr.realizations, pf.realizations) if a.optimal and b.optimal]
    sd_w, sd_p = np.array(pairs).T
    share = float(np.mean(sd_p < sd_w))
    reduction = float(np.median(1.0 - sd_p / sd_w))
    ok = len(pairs) == PAIRS and share >= 0.90 and reduction >= 0.20
    report("4 PF fairness", ok,
           f"PF normal-user SD below WSRMax in {100 * share:.0f}% of {len(pairs)} pairs (need 90%), "
           f"median reduction {100 * reduction:.1f}% (need 20%); PF campaign {t_pf:.0f}s")
    assert ok


def test_5_reliability(reliability):
    parts, ok = [], True
    for name, rep in reliability.items():
        table = rep.sinr_table()
        normal = ~rep.is_op
        low = float(table[:, normal].min()) if len(table) else float("nan")
        infeasible = [r.index for r in rep.realizations if not r.optimal]
        ok &= bool(np.all(table[:, normal] >= 127.0))
        ok &= all(r.status.value == "Infeasible" for r in rep.realizations if not r.optimal)
        parts.append(f"{name}: {rep.n_optimal} optimal (min normal SINR {low:.1f}), "
                     f"{len(infeasible)} infeasible reported {infeasible}")
    ok &= reliability["compact"].n_optimal > 0
    report("5 reliability", ok, "; ".join(parts))
    assert ok


def test_6_alpha_monotonicity(sweep):
    alphas = sorted(sweep)
    p = np.asarray(sweep[alphas[0]].config.p_voting)
    op = sweep[alphas[0]].is_op
    gap = DEFAULT_TOLERANCES.relative_gap
    worst, violations = np.inf, 0
    for i in range(SWEEP_REALIZATIONS):
        rs = [sweep[a].realizations[i] for a in alphas]
        if not all(r.optimal for r in rs):
            violations += 1
            continue
        weighted = [float(p @ r.sinr[op]) for r in rs]
        for j in range(len(alphas) - 1):
            # near-optimal solves may step back by at most the summed gaps over the alpha step
            slack = gap * (abs(rs[j].objective) + abs(rs[j + 1].objective)) / (alphas[j + 1] - alphas[j])
            step = weighted[j + 1] - weighted[j]
            worst = min(worst, step)
            violations += step < -slack
    ok = violations == 0
    report("6 alpha monotonicity", ok,
           f"sum_OP p_voting*S nondecreasing over alpha {alphas} in {SWEEP_REALIZATIONS - violations}/"
           f"{SWEEP_REALIZATIONS} realizations (smallest step {worst:.3g})")
    assert ok


def test_2_sinr_consistency(wsr_plain, wsr_alpha10, pf_plain, sweep, reliability):
    reps = [wsr_plain[0], wsr_alpha10[0], pf_plain[0], *sweep.values(), reliability["default-layout"]]
    devs = [r.sinr_deviation for rep in reps for r in rep.realizations if r.optimal]
    worst = max(devs)
    ok = worst <= 1e-6 and len(devs) > 0
    report("2 SINR consistency", ok,
           f"solver vs direct SINR within {worst:.2e} relative (limit 1e-6) on {len(devs)} solved instances")
    assert ok


def test_7_classifier_suite():
    # the component oracles run in test_risk.py and test_evaluation.py; this is the reconstructed row
    m = metrics(ConfusionCounts(22, 34, 1, 3))
    row = f"SV {round(m.accuracy)} {round(m.recall)} {m.specificity:.1f}"
    ok = row == "SV 93 88 97.1"
    report("7 classifier suite", ok, f"confusion (22, 34, 1, 3) gives '{row}'")
    assert ok


def test_8_ensemble_band():
    accs = []
    for op_id in (1, 2, 3):
        ds = generate_synthetic_dataset(rng=np.random.default_rng([SEED, op_id]), op_id=op_id)
        records = list(ds.records) + list(ds.test_records)
        accs.append(k_fold_cv(records, 10, "SV", np.random.default_rng([SEED, op_id, 1])))
    ok = all(80.0 <= a <= 95.0 for a in accs)
    report("8 ensemble band", ok,
           "10-fold soft-vote accuracy " + ", ".join(f"{a:.1f}%" for a in accs) + " within [80, 95]")
    assert ok


def test_9_determinism(tmp_path):
    args = ["run", "--approach", "wsrmax", "--prioritize", "--alpha", "10", "--realizations", "5",
            "--seed", str(SEED), "--no-figures"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    same = [(tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names]
    ok = all(same) and "realizations.csv" in names and "summary.csv" in names
    report("9 determinism", ok, f"{sum(same)}/{len(names)} output files byte-identical across two runs")
    assert ok
