import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hetnet_alloc.channel import ScenarioConfig
from hetnet_alloc.errors import ConfigError, InvalidArgument
from hetnet_alloc.harness import (
    ExperimentConfig, build_program, check_instance, confidence_interval, emit_csv, emit_plotdata, emit_sweep,
    fairness_sd, oracle_agreement, read_summary, realization_channel, render_figure, run_alpha_sweep,
    run_campaign, toy_instance, user_priorities,
)
from hetnet_alloc.harness.output import REALIZATION_HEADER
from hetnet_alloc.solver import solve


def scaled(n, sd, mean=5.0, seed=0):
    z = np.random.default_rng(seed).normal(size=n)
    return mean + sd * (z - z.mean()) / z.std(ddof=1)


# -- statistics -----------------------------------------------------------------

def test_fairness_sd_examples():
    assert fairness_sd([4.0, 4.0, 4.0]) == 0.0
    assert fairness_sd([1.0, 2.0, 3.0]) == pytest.approx(np.sqrt(2 / 3))
    assert fairness_sd([1.0, 2.0, 30.0], [True, True, False]) == pytest.approx(0.5)
    with pytest.raises(InvalidArgument):
        fairness_sd([1.0, 2.0], [True, False])


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30), st.floats(-1e3, 1e3))
def test_fairness_sd_is_shift_invariant(xs, c):
    assert fairness_sd(np.array(xs) + c) == pytest.approx(fairness_sd(xs), rel=1e-6, abs=1e-3)


def test_confidence_interval_examples():
    assert confidence_interval([3.0] * 5) == (3.0, 0.0)
    mean, half = confidence_interval(scaled(400, 10.0))
    assert mean == pytest.approx(5.0) and half == pytest.approx(0.98)
    _, half4 = confidence_interval(scaled(1600, 10.0))
    assert half4 == pytest.approx(half / 2)
    _, h99 = confidence_interval(scaled(400, 10.0), level=0.99)
    assert h99 == pytest.approx(2.5758 * 0.5, rel=1e-4)
    with pytest.raises(InvalidArgument):
        confidence_interval([1.0])
    with pytest.raises(InvalidArgument):
        confidence_interval([1.0, 2.0], level=1.0)


# -- configuration ------------------------------------------------------------

def test_config_validation(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig(approach="maxmin")
    with pytest.raises(ConfigError):
        ExperimentConfig(realizations=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(alpha=-1.0)
    with pytest.raises(ConfigError):
        ExperimentConfig(engine="cplex")
    with pytest.raises(ConfigError):
        ExperimentConfig(p_voting=(0.2, 1.4, 0.1))
    with pytest.raises(ConfigError):
        ExperimentConfig(p_voting=(0.2,)).load_scenario()
    with pytest.raises(ConfigError):
        ExperimentConfig(scenario=tmp_path / "none.json").load_scenario()


def test_user_priorities():
    sc = ExperimentConfig().load_scenario()
    assert np.all(user_priorities(ExperimentConfig(), sc) == 1.0)
    up = user_priorities(ExperimentConfig(prioritize=True, alpha=10.0), sc)
    assert np.allclose(up, [1] * 7 + [5.2, 9.4, 7.5])


# -- campaigns ----------------------------------------------------------------

@pytest.fixture(scope="module")
def small_report():
    return run_campaign(ExperimentConfig(approach="wsrmax", prioritize=True, realizations=3, seed=5))


def test_single_realization_report_equals_the_solve():
    cfg = ExperimentConfig(approach="wsrmax", realizations=1, seed=9)
    rep = run_campaign(cfg)
    sc = cfg.load_scenario()
    ch = realization_channel(cfg, sc, 1)
    prog = build_program(cfg, sc, ch)
    sol = solve(prog, cfg.engine)
    from hetnet_alloc.milp import extract_solution
    S = extract_solution(sol.values, prog, sc, ch).sinr
    assert np.allclose(rep.mean_sinr, S, rtol=0, atol=0)
    assert all(np.isnan(u.ci95) for u in rep.users)
    assert rep.n_optimal == 1 and not rep.degraded


def test_report_aggregates(small_report):
    rep = small_report
    assert len(rep.users) == 10 and rep.n_optimal == 3
    assert rep.avg_sinr == pytest.approx(rep.mean_sinr.mean())
    assert rep.sd_normal == pytest.approx(np.std(rep.mean_sinr[:7]))
    assert rep.sd_all == pytest.approx(np.std(rep.mean_sinr))
    table = rep.sinr_table()
    assert table.shape == (3, 10)
    assert np.allclose(rep.mean_sinr, table.mean(axis=0))
    assert all(u.ci95 >= 0 for u in rep.users)


def test_paired_campaigns_share_channels(small_report):
    other = run_campaign(replace(small_report.config, approach="wsrmax", prioritize=False))
    assert [r.channel_digest for r in other.realizations] == [r.channel_digest for r in small_report.realizations]


def test_worker_count_does_not_change_results(small_report):
    rep2 = run_campaign(replace(small_report.config, workers=2))
    for a, b in zip(small_report.realizations, rep2.realizations):
        assert a.channel_digest == b.channel_digest
        assert np.array_equal(a.sinr, b.sinr)


def test_csv_schema_and_round_trip(small_report, tmp_path):
    paths = emit_csv(small_report, tmp_path)
    lines = paths["realizations"].read_text().splitlines()
    assert lines[0] == ",".join(REALIZATION_HEADER)
    assert len(lines) == 1 + 3 * 10
    summary = paths["summary"].read_text().splitlines()
    assert summary[0] == "user,mean_sinr,ci95,is_op" and summary[-1].startswith("ALL,")
    assert len(summary) == 1 + 10 + 1
    users, (avg, sdn, sda) = read_summary(paths["summary"])
    for row, u in zip(users, small_report.users):
        assert row == (u.user, u.mean_sinr, u.ci95, u.is_op)
    assert (avg, sdn, sda) == (small_report.avg_sinr, small_report.sd_normal, small_report.sd_all)


def test_csv_output_is_deterministic(small_report, tmp_path):
    again = run_campaign(small_report.config)
    a = emit_csv(small_report, tmp_path / "a")
    b = emit_csv(again, tmp_path / "b")
    for key in a:
        assert a[key].read_bytes() == b[key].read_bytes()


def test_plotdata_and_figure(small_report, tmp_path):
    p = emit_plotdata(small_report, tmp_path / "plot.dat")
    rows = [line.split() for line in p.read_text().splitlines() if not line.startswith("#")]
    assert len(rows) == 10 and all(len(r) == 3 for r in rows)
    f = render_figure(small_report, tmp_path / "fig.png")
    assert f.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_emit_reports_unwritable_path(small_report, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        emit_plotdata(small_report, blocker / "plot.dat")


def test_alpha_sweep_emits_one_file_per_alpha(tmp_path):
    cfg = ExperimentConfig(approach="wsrmax", realizations=2, seed=1)
    reports = run_alpha_sweep(cfg)
    assert sorted(reports) == [1.0, 2.0, 5.0, 10.0]
    assert all(r.config.prioritize for r in reports.values())
    files = emit_sweep(reports, tmp_path)
    assert sorted(f.name for f in files) == ["plotdata_alpha1.dat", "plotdata_alpha10.dat",
                                            "plotdata_alpha2.dat", "plotdata_alpha5.dat"]
    assert (tmp_path / "alpha_10" / "summary.csv").exists()


def test_unreachable_reliability_flags_degraded(tmp_path):
    # the default macro ring is too far out for every normal user to reach 127
    rep = run_campaign(ExperimentConfig(approach="pf-rel", realizations=2, seed=0))
    assert rep.n_optimal == 0 and rep.n_non_optimal == 2 and rep.degraded
    assert np.all(np.isnan(rep.mean_sinr)) and np.isnan(rep.avg_sinr)
    paths = emit_csv(rep, tmp_path)
    assert paths["realizations"].read_text().splitlines() == [",".join(REALIZATION_HEADER)]
    assert "Infeasible" in paths["status"].read_text()


def test_compact_scenario_file_meets_reliability(tmp_path):
    path = tmp_path / "compact.json"
    path.write_text(json.dumps(ScenarioConfig(mbs_range_m=(50.0, 200.0)).to_dict()))
    rep = run_campaign(ExperimentConfig(approach="pf-rel", realizations=2, seed=0, scenario=path))
    # realization 2 of seed 0 places a normal user where 127 is out of reach
    assert [r.status.value for r in rep.realizations] == ["Optimal", "Infeasible"]
    assert rep.n_non_optimal == 1
    assert rep.sinr_table()[:, :7].min() >= 127.0


# -- oracle agreement -----------------------------------------------------------

def test_oracle_agreement_small():
    checks = oracle_agreement(3, seed=4)
    assert len(checks) == 3 * 5 and all(c.ok for c in checks)
    assert "ok" in checks[0].line()


def test_oracle_check_flags_status_mismatch(monkeypatch):
    import hetnet_alloc.harness.oracle_check as oc
    from hetnet_alloc.solver import LpSolution
    from hetnet_alloc.status import Status

    sc, ch = toy_instance(0, 0)
    monkeypatch.setattr(oc, "solve", lambda prog, engine: LpSolution(np.zeros(prog.n_vars), float("nan"),
                                                                     Status.INFEASIBLE))
    assert not check_instance(sc, ch, "wsrmax").ok
