"""Report emission: delimited tables, markdown mirrors, and rendered figures."""

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .runner import METRIC_NAMES, RunReport

METHOD_LABELS = {
    "baseline": "Baseline",
    "ros": "ROS",
    "rus": "RUS",
    "smote": "SMOTE",
    "msmote": "MSMOTE",
    "nearmiss": "NearMiss",
    "cost_sensitive": "Cost-Sensitive Learning",
    "focal": "Focal Loss",
    "ohem": "OHEM",
    "ldam_drw": "LDAM+DRW",
    "art": "ART",
}


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _write_markdown_table(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("| " + " | ".join(header) + " |\n")
        fh.write("|" + "|".join("---" for _ in header) + "|\n")
        for row in rows:
            fh.write("| " + " | ".join(str(v) for v in row) + " |\n")


def emit_report(report: RunReport, out_dir, fmt="both", histories=True):
    """Write metric/significance/rank tables plus figures for one experiment.

    fmt is "csv", "markdown" or "both". Returns the list of files written.
    """
    os.makedirs(out_dir, exist_ok=True)
    fig_dir = os.path.join(out_dir, "figures")
    os.makedirs(fig_dir, exist_ok=True)
    written = []

    # per-metric aggregate tables
    for metric in METRIC_NAMES:
        rows = []
        for m in report.methods:
            mean, std = report.aggregates[m][metric]
            rows.append((METHOD_LABELS[m], f"{mean:.4f}", f"{std:.4f}"))
        if fmt in ("csv", "both"):
            p = os.path.join(out_dir, f"metrics_{metric}.csv")
            _write_csv(p, ("method", "mean", "std"), rows)
            written.append(p)
        if fmt in ("markdown", "both"):
            p = os.path.join(out_dir, f"metrics_{metric}.md")
            _write_markdown_table(
                p,
                ("Method", report.name),
                [(r[0], f"{r[1]} ± {r[2]}") for r in rows],
            )
            written.append(p)

    # per-seed records
    rows = [
        (c.method, c.seed, f"{c.macro_f1:.6f}", f"{c.macro_precision:.6f}",
         f"{c.macro_recall:.6f}", f"{c.accuracy:.6f}", c.epochs_trained, c.error or "")
        for c in report.cells
    ]
    p = os.path.join(out_dir, "per_seed_metrics.csv")
    _write_csv(
        p,
        ("method", "seed", "macro_f1", "macro_precision", "macro_recall",
         "accuracy", "epochs_trained", "error"),
        rows,
    )
    written.append(p)

    # significance vs the adaptive method
    if report.significance:
        rows = []
        for m, res in report.significance.items():
            rows.append(
                (METHOD_LABELS[m], f"{res['t_test'].p_value:.4f}",
                 f"{res['wilcoxon'].p_value:.4f}")
            )
        header = ("Method", "Paired t-test", "Wilcoxon test")
        if fmt in ("csv", "both"):
            p = os.path.join(out_dir, "significance.csv")
            _write_csv(p, header, rows)
            written.append(p)
        if fmt in ("markdown", "both"):
            p = os.path.join(out_dir, "significance.md")
            _write_markdown_table(p, header, rows)
            written.append(p)

    if report.avg_ranks:
        p = os.path.join(out_dir, "ranks.csv")
        _write_csv(
            p,
            ("method", "avg_rank"),
            [(METHOD_LABELS[m], f"{r:.3f}") for m, r in report.avg_ranks.items()],
        )
        written.append(p)

    # bar chart of macro-F1 mean +/- std
    means = [report.aggregates[m]["macro_f1"][0] for m in report.methods]
    stds = [report.aggregates[m]["macro_f1"][1] for m in report.methods]
    fig, ax = plt.subplots(figsize=(max(6, 1.1 * len(report.methods)), 4))
    xs = np.arange(len(report.methods))
    ax.bar(xs, means, yerr=stds, capsize=3, color="#4878cf")
    ax.set_xticks(xs)
    ax.set_xticklabels([METHOD_LABELS[m] for m in report.methods], rotation=45, ha="right")
    ax.set_ylabel("macro-F1")
    ax.set_title(f"{report.name}: macro-F1 (mean ± std over {len(report.seeds)} seeds)")
    fig.tight_layout()
    p = os.path.join(fig_dir, "macro_f1.png")
    fig.savefig(p, dpi=120)
    plt.close(fig)
    written.append(p)

    if histories:
        hist_dir = os.path.join(out_dir, "histories")
        os.makedirs(hist_dir, exist_ok=True)
        for c in report.cells:
            if not c.ok:
                continue
            if c.history:
                p = os.path.join(hist_dir, f"{c.method}_seed{c.seed}_epochs.csv")
                _write_csv(
                    p,
                    ("epoch", "lr", "train_loss", "val_loss"),
                    [(e, f"{lr:.8f}", f"{tl:.6f}", f"{vl:.6f}") for e, lr, tl, vl in c.history],
                )
                written.append(p)
            if c.boost_history:
                p = os.path.join(hist_dir, f"{c.method}_seed{c.seed}_boosts.csv")
                k = len(c.boost_history[0].probs)
                header = (
                    ["epoch"]
                    + [f"f1_{i}" for i in range(k)]
                    + [f"s_{i}" for i in range(k)]
                    + [f"w_{i}" for i in range(k)]
                    + [f"p_{i}" for i in range(k)]
                    + [f"count_{i}" for i in range(k)]
                )
                rows = []
                for b in c.boost_history:
                    rows.append(
                        [b.epoch]
                        + [f"{v:.6f}" for v in b.f1_per_class]
                        + [f"{v:.6f}" for v in b.difficulty]
                        + [f"{v:.6f}" for v in b.weights]
                        + [f"{v:.6f}" for v in b.probs]
                        + [int(v) for v in b.target_counts]
                    )
                _write_csv(p, header, rows)
                written.append(p)
    return written


def emit_ablation_report(results: dict, variable: str, out_dir):
    """Write the sweep table and line figure for one ablation.

    `results` is {series_label: {value: RunReport}} as produced by run_ablation.
    """
    os.makedirs(out_dir, exist_ok=True)
    fig_dir = os.path.join(out_dir, "figures")
    os.makedirs(fig_dir, exist_ok=True)

    rows = []
    for series, by_value in results.items():
        for value, report in by_value.items():
            for m in report.methods:
                mean, std = report.aggregates[m]["macro_f1"]
                rows.append((series, value, m, f"{mean:.4f}", f"{std:.4f}"))
    table = os.path.join(out_dir, f"ablation_{variable}.csv")
    _write_csv(table, ("series", variable, "method", "macro_f1_mean", "macro_f1_std"), rows)

    fig, ax = plt.subplots(figsize=(6.5, 4))
    for series, by_value in results.items():
        values = list(by_value)
        for m in next(iter(by_value.values())).methods:
            means = np.array([by_value[v].aggregates[m]["macro_f1"][0] for v in values])
            stds = np.array([by_value[v].aggregates[m]["macro_f1"][1] for v in values])
            label = METHOD_LABELS[m] if len(results) == 1 else f"{METHOD_LABELS[m]} ({series})"
            xs = np.array([float(v) for v in values])
            ax.plot(xs, means, marker="o", label=label)
            ax.fill_between(xs, means - stds, means + stds, alpha=0.15)
    ax.set_xlabel(variable.replace("_", " "))
    ax.set_ylabel("macro-F1")
    if variable == "model_width":
        ax.set_xscale("log", base=2)
    ax.legend(fontsize=8)
    fig.tight_layout()
    figure = os.path.join(fig_dir, f"ablation_{variable}.png")
    fig.savefig(figure, dpi=120)
    plt.close(fig)
    return [table, figure]
