"""Figure rendering for the CLI report paths.

Figures land next to the delimited output; the CSV/JSON files remain the
machine contract. Uses the Agg backend so headless runs work everywhere.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_PNG_META = {"Software": "qaoa-bo"}


def _save(fig, path) -> None:
    # render to a sibling temp name and move into place, so a crash mid-write
    # cannot leave a truncated figure behind
    path = os.fspath(path)
    tmp = os.path.join(os.path.dirname(os.path.abspath(path)),
                       ".tmp-" + os.path.basename(path))
    try:
        fig.savefig(tmp, dpi=150, bbox_inches="tight", metadata=_PNG_META)
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.unlink(tmp)


def plot_landscape(values: np.ndarray, per_dim: int, path, noisy: np.ndarray | None = None) -> None:
    """Heatmap of a p=1 objective over the (gamma, beta) grid."""
    f = np.asarray(values, dtype=float).reshape(per_dim, per_dim)
    panels = 1 if noisy is None else 2
    fig, axes = plt.subplots(1, panels, figsize=(5.2 * panels, 4.2), squeeze=False)
    extent = (0.0, 2.0 * np.pi, 0.0, 2.0 * np.pi)
    titles = ["objective"]
    grids = [f]
    if noisy is not None:
        titles.append("objective under Pauli channel")
        grids.append(np.asarray(noisy, dtype=float).reshape(per_dim, per_dim))
    for ax, grid, title in zip(axes[0], grids, titles):
        im = ax.imshow(grid.T, origin="lower", extent=extent, aspect="auto", cmap="viridis")
        ax.set_xlabel(r"$\gamma$")
        ax.set_ylabel(r"$\beta$")
        ax.set_title(title)
        fig.colorbar(im, ax=ax)
    _save(fig, path)


def plot_convergence(best_f_per_seed: list[np.ndarray], path, f_star: float | None = None) -> None:
    """Best objective value so far vs. step, one faint line per seed plus the median."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    steps = None
    for curve in best_f_per_seed:
        curve = np.asarray(curve, dtype=float)
        steps = np.arange(1, curve.size + 1)
        ax.plot(steps, curve, color="tab:blue", alpha=0.25, lw=1)
    if steps is not None and best_f_per_seed:
        stacked = np.vstack([np.asarray(c, dtype=float) for c in best_f_per_seed])
        ax.plot(steps, np.median(stacked, axis=0), color="tab:blue", lw=2, label="median")
    if f_star is not None:
        ax.axhline(f_star, color="tab:red", ls="--", lw=1, label=r"$f^*$")
    ax.set_xlabel("step")
    ax.set_ylabel("best objective so far")
    ax.legend(loc="lower right")
    _save(fig, path)


def plot_regret(r_per_seed: list[np.ndarray], path) -> None:
    """Optimization error r_t vs. step on a log scale."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for curve in r_per_seed:
        curve = np.asarray(curve, dtype=float)
        ax.plot(np.arange(1, curve.size + 1), np.maximum(curve, 1e-12),
                color="tab:orange", alpha=0.3, lw=1)
    if r_per_seed:
        stacked = np.vstack([np.asarray(c, dtype=float) for c in r_per_seed])
        ax.plot(np.arange(1, stacked.shape[1] + 1),
                np.maximum(np.median(stacked, axis=0), 1e-12),
                color="tab:orange", lw=2, label="median")
        ax.legend(loc="upper right")
    ax.set_yscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel(r"$r_t$")
    _save(fig, path)


def plot_sweep_summary(rows: list[dict], x_key: str, path) -> None:
    """Final best objective against the swept variable."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    xs = [row[x_key] for row in rows]
    ys = [row["best_f_final"] for row in rows]
    ax.plot(xs, ys, "o-", color="tab:green")
    ax.set_xlabel(x_key)
    ax.set_ylabel("best objective at T")
    _save(fig, path)
