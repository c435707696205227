"""Figure rendering for the report path of the CLI.

Every plot function writes a PNG next to the delimited output; nothing
here is needed for computation.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .outcomes import OutcomeTable
from .statistics import StudyReport


def plot_distribution(table: OutcomeTable, path: str, title: str = ""):
    """Bar chart of outcome probabilities."""
    outcomes = table.sorted_outcomes()
    labels = [o.label() for o in outcomes]
    values = [table.get_float(o) for o in outcomes]
    fig, ax = plt.subplots(figsize=(max(6, 0.8 * len(labels)), 4))
    ax.bar(range(len(labels)), values, color="#4878cf")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_study(report: StudyReport, path: str, title: str = ""):
    """Empirical rates with Clopper-Pearson error bars and true values."""
    names = [r.name for r in report.rows]
    p_hat = [r.p_hat for r in report.rows]
    p_true = [r.p_true for r in report.rows]
    err_low = [r.p_hat - r.cp_low for r in report.rows]
    err_high = [r.cp_high - r.p_hat for r in report.rows]
    x = range(len(names))
    fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(names)), 4.5))
    ax.errorbar(x, p_hat, yerr=[err_low, err_high], fmt="o", capsize=4,
                label=f"sampled (N={report.n_trials}), "
                      f"{report.confidence:.0%} CP interval")
    ax.plot(x, p_true, "D", color="#d1495b", label="calculated")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("probability")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_curve(rows, outcome_labels: list[str], path: str, title: str = ""):
    """Probabilities versus distinguishability overlap.

    ``rows`` is a list of (overlap, OutcomeTable) pairs as produced by
    the partial-distinguishability sweep.
    """
    xs = [abs(complex(c)) for c, _ in rows]
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    from .outcomes import Outcome

    for label in outcome_labels:
        outcome = Outcome.parse(label)
        ys = [table.get_float(outcome) for _, table in rows]
        ax.plot(xs, ys, marker=".", label=label)
    ax.set_xlabel("|overlap|")
    ax.set_ylabel("probability")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
