"""CSV, plot-data and figure output for campaign reports."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .campaign import ExperimentReport

REALIZATION_HEADER = ("realization", "user", "is_op", "alpha", "approach", "prioritized", "sinr", "prbs_held")
SUMMARY_HEADER = ("user", "mean_sinr", "ci95", "is_op")
STATUS_HEADER = ("realization", "status", "objective", "nodes", "channel_sha256")
REALIZATIONS_CSV = "realizations.csv"
SUMMARY_CSV = "summary.csv"
STATUS_CSV = "status.csv"
PLOTDATA = "plotdata.dat"
FIGURE = "sinr.png"


def _num(v: float) -> str:
    # repr round-trips exactly, which keeps re-parsed values identical
    return repr(float(v))


def _write_rows(path: Path, header, rows) -> None:
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit_csv(report: ExperimentReport, out_dir) -> dict[str, Path]:
    """Write per-realization, summary and status CSVs into ``out_dir``.

    Only Optimal realizations appear in the per-realization file; every
    realization, with its status and channel hash, is listed in the status
    file.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = report.config
    is_op = report.is_op
    rows = []
    for r in report.realizations:
        if not r.optimal:
            continue
        for k, (s, held) in enumerate(zip(r.sinr, r.prbs_held)):
            rows.append([r.index, k + 1, int(is_op[k]), _num(cfg.alpha), cfg.approach,
                         int(cfg.prioritize), _num(s), int(held)])
    paths = {"realizations": out / REALIZATIONS_CSV, "summary": out / SUMMARY_CSV, "status": out / STATUS_CSV}
    _write_rows(paths["realizations"], REALIZATION_HEADER, rows)
    summary = [[u.user, _num(u.mean_sinr), _num(u.ci95), int(u.is_op)] for u in report.users]
    summary.append(["ALL", _num(report.avg_sinr), _num(report.sd_normal), _num(report.sd_all)])
    _write_rows(paths["summary"], SUMMARY_HEADER, summary)
    _write_rows(paths["status"], STATUS_HEADER,
                [[r.index, str(r.status), _num(r.objective), r.nodes, r.channel_digest] for r in report.realizations])
    return paths


def read_summary(path) -> tuple[list[tuple[int, float, float, bool]], tuple[float, float, float]]:
    """Parse a summary CSV into per-user rows and the ``(avg, sd_normal, sd_all)`` row."""
    users, agg = [], None
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        if tuple(next(r)) != SUMMARY_HEADER:
            raise ValueError(f"{path}: unexpected summary header")
        for row in r:
            if row[0] == "ALL":
                agg = (float(row[1]), float(row[2]), float(row[3]))
            else:
                users.append((int(row[0]), float(row[1]), float(row[2]), bool(int(row[3]))))
    if agg is None:
        raise ValueError(f"{path}: missing ALL row")
    return users, agg


def emit_plotdata(report: ExperimentReport, path) -> Path:
    """Three whitespace-separated columns: user index, mean SINR, CI half-width."""
    path = Path(path)
    cfg = report.config
    lines = [f"# approach={cfg.approach} prioritized={int(cfg.prioritize)} alpha={_num(cfg.alpha)} "
             f"optimal={report.n_optimal}/{len(report.realizations)}",
             "# user mean_sinr ci95"]
    lines += [f"{u.user} {_num(u.mean_sinr)} {_num(u.ci95)}" for u in report.users]
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write plot data to {path}: {exc}") from exc
    return path


def sweep_plotdata_name(alpha: float) -> str:
    return f"plotdata_alpha{alpha:g}.dat"


def emit_sweep(reports: dict[float, ExperimentReport], out_dir) -> list[Path]:
    """One sub-directory of CSVs and one plot-data file per ``alpha``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for alpha, rep in sorted(reports.items()):
        emit_csv(rep, out / f"alpha_{alpha:g}")
        written.append(emit_plotdata(rep, out / sweep_plotdata_name(alpha)))
    return written


def render_figure(report: ExperimentReport, path, title: str | None = None) -> Path:
    """Bar chart of per-user mean SINR with 95% CI whiskers; outpatients highlighted."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    users = [u.user for u in report.users]
    means = report.mean_sinr
    ci = np.nan_to_num(np.array([u.ci95 for u in report.users]))
    colors = ["tab:red" if op else "tab:blue" for op in report.is_op]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(users, np.nan_to_num(means), yerr=ci, color=colors, capsize=3)
    ax.set_xticks(users)
    ax.set_xlabel("user")
    ax.set_ylabel("mean SINR")
    cfg = report.config
    ax.set_title(title or f"{cfg.approach}, prioritized={cfg.prioritize}, alpha={cfg.alpha:g}")
    fig.tight_layout()
    try:
        fig.savefig(path, dpi=120, metadata={"Software": None})
    except OSError as exc:
        raise OSError(f"cannot write figure to {path}: {exc}") from exc
    finally:
        plt.close(fig)
    return path


def render_sweep_figure(reports: dict[float, ExperimentReport], path) -> Path:
    """Grouped bars of outpatient mean SINR per ``alpha``."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    alphas = sorted(reports)
    first = reports[alphas[0]]
    ops = [u.user for u in first.users if u.is_op]
    width = 0.8 / len(alphas)
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, a in enumerate(alphas):
        m = [u.mean_sinr for u in reports[a].users if u.is_op]
        ax.bar(np.arange(len(ops)) + i * width, np.nan_to_num(m), width, label=f"alpha={a:g}")
    ax.set_xticks(np.arange(len(ops)) + 0.4 - width / 2)
    ax.set_xticklabels([str(u) for u in ops])
    ax.set_xlabel("outpatient user")
    ax.set_ylabel("mean SINR")
    ax.legend()
    fig.tight_layout()
    try:
        fig.savefig(path, dpi=120, metadata={"Software": None})
    except OSError as exc:
        raise OSError(f"cannot write figure to {path}: {exc}") from exc
    finally:
        plt.close(fig)
    return path
