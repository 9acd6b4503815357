"""Figures for the CLI report commands, rendered off-screen to files."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.bbox": "tight",
    "figure.dpi": 120,
}


def _save(fig, path: str) -> str:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_density(rows, path: str) -> str:
    """n * fixprop(n) against n on a log axis; rows are (n, lower, upper)."""
    ns = [r[0] for r in rows]
    mid = [r[0] * float((r[1] + r[2]) / 2) for r in rows]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(ns, mid, lw=1.2, color="C0", label="n * fixprop(n)")
        ax.axhline(1.0, color="k", lw=0.8, ls="--")
        if len(ns) > 1:
            ax.set_xscale("log")
        ax.set_xlabel("level n")
        ax.set_ylabel("n * fixprop(n)")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_frobenius(report, path: str) -> str:
    """Running root fraction over good primes with a 3 sigma band around the prediction."""
    good = [s for s in report.samples if not s.excluded]
    xs, ys, hits = [], [], 0
    for i, s in enumerate(good, start=1):
        hits += s.has_root
        xs.append(s.p)
        ys.append(hits / i)
    pred = report.prediction
    band = [3 * math.sqrt(pred * (1 - pred) / i) for i in range(1, len(good) + 1)]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(xs, ys, lw=1.0, color="C0", label="observed")
        ax.fill_between(xs, [pred - b for b in band], [pred + b for b in band], color="C1", alpha=0.2, label="3 sigma")
        ax.axhline(pred, color="C1", lw=0.9, label=f"prediction ({report.prediction_kind})")
        ax.set_ylim(max(0.0, pred - 0.25), min(1.0, pred + 0.25))
        ax.set_xlabel("prime p")
        ax.set_ylabel(f"fraction with a root of p_{report.level}")
        ax.legend(frameon=False, fontsize=8)
        return _save(fig, path)


def plot_orbit(report, path: str, title: str = "") -> str:
    """Mod-p orbit as a residue-flag strip: tail then one period."""
    n = len(report.states)
    colors = ["C3" if (i + report.first_level) in report.exceptional_levels else "C0" for i in range(n)]
    with plt.rc_context(_RC | {"axes.grid": False}):
        fig, ax = plt.subplots(figsize=(max(3.0, 0.25 * n + 1), 1.6))
        ax.bar(range(report.first_level, report.first_level + n), [1] * n, color=colors, width=0.9)
        if report.tail_len:
            ax.axvline(report.first_level + report.tail_len - 0.5, color="k", lw=1)
        ax.set_yticks([])
        ax.set_xlabel("level n (red: exceptional)")
        ax.set_title(title or f"p = {report.p}: tail {report.tail_len}, cycle {report.cycle_len}", fontsize=9)
        return _save(fig, path)
