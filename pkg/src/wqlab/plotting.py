"""Figure rendering for report and scaling outputs.

Figures accompany (never replace) the CSV/JSON data files; everything
draws through the Agg backend so no display is needed.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_scaling(study, path) -> None:
    """Log-log decay plot with error bars, one line per series, plus the
    fitted slope in the legend."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    series_names = sorted({r["series"] for r in study.to_rows()})
    for name in series_names:
        rows = [r for r in study.to_rows() if r["series"] == name and r["value"] > 0]
        if not rows:
            continue
        ns = np.array([r["n"] for r in rows], dtype=float)
        vals = np.array([r["value"] for r in rows])
        errs = np.array([r["std_error"] for r in rows])
        slope = study.slopes.get(name, float("nan"))
        ax.errorbar(ns, vals, yerr=errs, marker="o", capsize=3,
                    label=f"{name} (slope {slope:.3f})")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("error")
    ax.set_title(f"scaling study: {study.family}")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)


def plot_report_summary(reports, path) -> None:
    """Slack per check, grouped by bound id; failures drawn in red."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    if reports:
        bounds = sorted({r.bound_id for r in reports})
        positions = {b: i for i, b in enumerate(bounds)}
        xs, ys, colors = [], [], []
        for r in reports:
            xs.append(positions[r.bound_id] + 0.1 * (hash(r.instance_id) % 7 - 3) / 3)
            ys.append(max(r.slack, 1e-16))
            colors.append("tab:red" if not r.passed
                          else ("tab:orange" if r.marginal else "tab:blue"))
        ax.scatter(xs, ys, c=colors, s=18, alpha=0.8)
        ax.set_xticks(range(len(bounds)))
        ax.set_xticklabels(bounds, rotation=60, ha="right", fontsize=7)
        ax.set_yscale("log")
    ax.set_ylabel("slack (rhs - lhs)")
    ax.set_title("bound checks: slack by bound")
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)
