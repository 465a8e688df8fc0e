"""Render a GameResult to files: delimited per-trial data plus figures.

Writes into a directory:
    trials.csv        one row per trial
    summary.json      the aggregate numbers
    convergence.png   running success rate vs the 3-sigma binomial band
    outcomes.png      counts of successes / failures / violations
"""

from __future__ import annotations

import csv
import json
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .game import GameResult

__all__ = ["write_report"]


def _write_trials_csv(result: GameResult, path: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "real", "mu", "guess", "success", "violation",
                    "queries", "s_star"])
        for rec in result.records:
            w.writerow([rec.trial, int(rec.real), rec.mu,
                        "" if rec.guess is None else rec.guess,
                        int(rec.success), int(rec.violation),
                        len(rec.queries), " ".join(rec.s_star)])


def _plot_convergence(result: GameResult, path: str):
    xs, ys = [], []
    wins = 0
    for i, rec in enumerate(result.records, start=1):
        wins += rec.success
        xs.append(i)
        ys.append(wins / i)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    band_x = range(1, len(xs) + 1)
    hi = [0.5 + 3 * math.sqrt(0.25 / n) for n in band_x]
    lo = [0.5 - 3 * math.sqrt(0.25 / n) for n in band_x]
    ax.fill_between(band_x, lo, hi, alpha=0.2, label="3-sigma band around 1/2")
    ax.axhline(0.5, linewidth=0.8, linestyle="--")
    ax.plot(xs, ys, linewidth=1.2, label="running success rate")
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("trial")
    ax.set_ylabel("success rate")
    ax.set_title(f"{result.adversary} adversary, mode={result.mode}, "
                 f"p={result.prime}")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_outcomes(result: GameResult, path: str):
    losses = result.trials - result.successes - result.violations
    labels = ["success", "loss", "violation"]
    counts = [result.successes, losses, result.violations]
    fig, ax = plt.subplots(figsize=(5, 4))
    bars = ax.bar(labels, counts)
    for bar, n in zip(bars, counts):
        ax.annotate(str(n), (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                    ha="center", va="bottom")
    ax.set_ylabel("trials")
    ax.set_title(f"{result.adversary}: {result.trials} trials")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(result: GameResult, outdir: str) -> dict:
    """Write all report files, return {name: path}."""
    os.makedirs(outdir, exist_ok=True)
    paths = {
        "trials_csv": os.path.join(outdir, "trials.csv"),
        "summary_json": os.path.join(outdir, "summary.json"),
        "convergence_png": os.path.join(outdir, "convergence.png"),
        "outcomes_png": os.path.join(outdir, "outcomes.png"),
    }
    _write_trials_csv(result, paths["trials_csv"])
    with open(paths["summary_json"], "w", encoding="utf-8") as fh:
        json.dump(result.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    _plot_convergence(result, paths["convergence_png"])
    _plot_outcomes(result, paths["outcomes_png"])
    return paths
