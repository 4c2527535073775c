"""
plots.py
Static SVG figures for the experiment outputs (matplotlib, Agg backend).
"""

from pathlib import Path
from typing import Dict, Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from spectrum_sensing.schemas.spectrum_schemas import WidebandPsd  # noqa: E402

# fixed element ids so repeated runs emit identical SVG text
plt.rcParams["svg.hashsalt"] = "spectrum-sensing"


def _save(fig, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_rmse_beta(frame: pd.DataFrame, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (snr, method, family), group in frame.groupby(
        ["snr_db", "method", "family"], sort=True
    ):
        group = group.sort_values("beta")
        ax.errorbar(
            group["beta"],
            group["mean_rmse"],
            yerr=group["std_error"],
            marker="o",
            capsize=2,
            label=f"{method.upper()} {family} ({snr:g} dB)",
        )
    ax.set_xlabel("roll-off factor beta")
    ax.set_ylabel("edge RMSE (MHz)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


def plot_false_edges(
    psd: WidebandPsd,
    edge_lists: Dict[str, Iterable[float]],
    true_edges: Iterable[float],
    impulse_positions: Iterable[float],
    path: Path,
) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(psd.grid.frequencies, psd.values, color="0.3", linewidth=0.7, label="PSD")
    top = float(np.max(psd.values)) if psd.values.size else 1.0
    for f in true_edges:
        ax.axvline(f, color="black", linestyle="--", linewidth=0.8)
    for f in impulse_positions:
        ax.annotate("impulse", xy=(f, top), xytext=(f, top * 1.05), ha="center")
    colors = ["tab:red", "tab:green", "tab:blue", "tab:orange"]
    for (name, edges), color in zip(edge_lists.items(), colors):
        edges = list(edges)
        ax.scatter(edges, [top * 0.9] * len(edges), marker="v", color=color, label=name)
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("PSD")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_roc(frame: pd.DataFrame, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for snr, group in frame.groupby("snr_db", sort=True):
        group = group.sort_values("empirical_pfa")
        ax.plot(group["empirical_pfa"], group["empirical_pd"], marker="o", label=f"{snr:g} dB")
    ax.plot([0, 1], [0, 1], color="0.7", linestyle=":")
    ax.set_xlabel("P_fa")
    ax.set_ylabel("P_d")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_cs_tradeoff(frame: pd.DataFrame, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.errorbar(
        frame["ratio"],
        frame["mean_rel_error"],
        yerr=frame["rel_error_std_error"],
        marker="o",
        capsize=2,
        label="relative error",
    )
    ax.plot(frame["ratio"], frame["detection_rate"], marker="s", label="detection rate")
    ax.set_xlabel("M / L")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, path)
