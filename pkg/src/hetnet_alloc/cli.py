"""Command-line front end: campaigns, classifier evaluation, oracle checks."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, InvalidArgument, TrainError
from .evaluation import CLASSIFIERS, confusion, fit_classifier, k_fold_cv, metrics, write_metric_rows
from .harness import (
    ALPHA_SWEEP, DEFAULT_P_VOTING, ExperimentConfig, emit_csv, emit_plotdata, emit_sweep, oracle_agreement,
    render_figure, render_sweep_figure, run_alpha_sweep, run_campaign,
)
from .harness.output import FIGURE, PLOTDATA
from .milp.patterns import APPROACHES
from .milp.program import read_lp
from .risk.ensemble import priority, train_ensemble
from .risk.levels import CurrentState, read_csv, split_dataset, write_csv
from .risk.synthetic import generate_synthetic_dataset
from .solver import ENGINES, format_solution, solve


def _report_lines(rep) -> list[str]:
    cfg = rep.config
    out = [f"approach={cfg.approach} prioritized={cfg.prioritize} alpha={cfg.alpha:g} "
           f"optimal={rep.n_optimal}/{len(rep.realizations)} nodes={rep.total_nodes} "
           f"seconds={rep.total_seconds:.1f}"]
    bad = [f"{r.index}:{r.status}" for r in rep.realizations if not r.optimal]
    if bad:
        out.append("non-optimal realizations: " + " ".join(bad))
    if rep.degraded:
        out.append("DEGRADED: more than 10% of realizations did not solve to optimality")
    for u in rep.users:
        out.append(f"  user {u.user:2d}{' (OP)' if u.is_op else '     '} mean SINR {u.mean_sinr:12.4f} "
                   f"+/- {u.ci95:.4f}")
    out.append(f"  avg SINR {rep.avg_sinr:.4f}  SD normal {rep.sd_normal:.4f}  SD all {rep.sd_all:.4f}")
    return out


def cmd_run(args) -> int:
    cfg = ExperimentConfig(approach=args.approach, prioritize=args.prioritize, alpha=args.alpha,
                           realizations=args.realizations, seed=args.seed, scenario=args.scenario,
                           psi=args.psi, p_voting=tuple(args.p_voting), engine=args.engine,
                           formulation=args.formulation, workers=args.workers)
    out = Path(args.out)
    if args.alpha_sweep:
        reports = run_alpha_sweep(cfg)
        emit_sweep(reports, out)
        for alpha, rep in sorted(reports.items()):
            if not args.no_figures:
                render_figure(rep, out / f"alpha_{alpha:g}" / FIGURE)
            print("\n".join(_report_lines(rep)))
        if not args.no_figures:
            render_sweep_figure(reports, out / "op_sinr_by_alpha.png")
        return 0
    rep = run_campaign(cfg)
    emit_csv(rep, out)
    emit_plotdata(rep, out / PLOTDATA)
    if not args.no_figures:
        render_figure(rep, out / FIGURE)
    print("\n".join(_report_lines(rep)))
    return 0


def cmd_evalml(args) -> int:
    rows = []
    rng = np.random.default_rng(args.seed)
    for path in args.dataset:
        records = read_csv(path)
        ds = split_dataset(0, records, n_train=min(args.train, len(records) - 1))
        if not ds.test_records:
            raise ConfigError(f"{path}: no records left for testing")
        name = Path(path).stem
        for clf in CLASSIFIERS:
            c = confusion(fit_classifier(clf, ds.records), ds.test_records)
            cv = k_fold_cv(records, args.folds, clf, rng)
            rows.append((name, clf, c, metrics(c), cv))
            print(f"{name} {clf} accuracy={metrics(c).accuracy:.1f} cv={cv:.1f}")
        model = train_ensemble(ds.records)
        current = CurrentState(ds.test_records[-1].levels)
        p = model.predict(current)
        print(f"{name} P_voting={p:.4f} UP(alpha={args.alpha:g})={priority(p, args.alpha, True):.4f}")
    write_metric_rows(rows, args.out)
    return 0


def cmd_oracle_check(args) -> int:
    checks = oracle_agreement(args.instances, args.seed, engine=args.engine)
    for c in checks:
        print(c.line())
    bad = [c for c in checks if not c.ok]
    print(f"{len(checks) - len(bad)}/{len(checks)} checks agree")
    return 1 if bad else 0


def cmd_synth(args) -> int:
    ds = generate_synthetic_dataset(rng=np.random.default_rng([args.seed, args.op_id]), op_id=args.op_id)
    write_csv(ds.all_records, args.out)
    return 0


def cmd_solve_lp(args) -> int:
    prog = read_lp(Path(args.file).read_text())
    sys.stdout.write(format_solution(prog, solve(prog, args.engine)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hetnet-alloc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="Monte-Carlo allocation campaign")
    r.add_argument("--approach", choices=APPROACHES, default="wsrmax")
    r.add_argument("--prioritize", action="store_true", help="weight outpatients by 1 + alpha * p_voting")
    r.add_argument("--alpha", type=float, default=10.0)
    r.add_argument("--alpha-sweep", action="store_true",
                   help=f"prioritized runs for alpha in {', '.join(f'{a:g}' for a in ALPHA_SWEEP)}")
    r.add_argument("--realizations", type=int, default=300)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--scenario", default=None, help="scenario JSON; default is the three-cell layout")
    r.add_argument("--psi", type=float, default=127.0, help="minimum normal-user SINR for pf-rel")
    r.add_argument("--p-voting", type=float, nargs="+", default=list(DEFAULT_P_VOTING))
    r.add_argument("--engine", choices=ENGINES, default="highs")
    r.add_argument("--formulation", choices=("pattern", "phi"), default="pattern")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--no-figures", action="store_true")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("evalml", help="train and evaluate NB, LR, DT and the soft vote")
    e.add_argument("--dataset", nargs="+", required=True)
    e.add_argument("--folds", type=int, default=10)
    e.add_argument("--train", type=int, default=140, help="leading records used for training")
    e.add_argument("--alpha", type=float, default=10.0)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_evalml)

    o = sub.add_parser("oracle-check", help="solver against exhaustive search on toy instances")
    o.add_argument("--instances", type=int, default=50)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--engine", choices=ENGINES, default="bnb")
    o.set_defaults(func=cmd_oracle_check)

    s = sub.add_parser("synth", help="write a synthetic outpatient history")
    s.add_argument("--op-id", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    lp = sub.add_parser("solve-lp", help="solve an LP-format file and print name=value lines")
    lp.add_argument("file")
    lp.add_argument("--engine", choices=ENGINES, default="bnb")
    lp.set_defaults(func=cmd_solve_lp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidArgument, TrainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
