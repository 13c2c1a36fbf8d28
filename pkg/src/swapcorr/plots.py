"""Figure rendering for sweep and trajectory outputs (headless, file-based)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .scenarios import SweepRow, TrajectoryResult  # noqa: E402


def render_sweep_figure(rows: Sequence[SweepRow], path: str) -> None:
    """Two-panel surface plot: total correlation and negativity over (a1, a2)."""
    a1 = sorted(set(r.a1 for r in rows))
    a2 = sorted(set(r.a2 for r in rows))
    n1, n2 = len(a1), len(a2)
    total = np.array([r.total_correlation for r in rows]).reshape(n1, n2)
    neg = np.array([r.negativity_sum for r in rows]).reshape(n1, n2)
    A2, A1 = np.meshgrid(a2, a1)

    fig = plt.figure(figsize=(11, 4.5))
    for idx, (surface, label) in enumerate(
        [(total, "total correlation (bits)"), (neg, "negativity (sum of |neg. eigenvalues|)")]
    ):
        ax = fig.add_subplot(1, 2, idx + 1, projection="3d")
        ax.plot_surface(A1, A2, surface, cmap="viridis", linewidth=0, antialiased=True)
        ax.set_xlabel("$a_1$")
        ax.set_ylabel("$a_2$")
        ax.set_title(label)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trajectory_figure(result: TrajectoryResult, path: str) -> None:
    """Correlation measures versus time with the death point marked."""
    t = [p.t for p in result.points]
    total = [p.row.total_correlation for p in result.points]
    disc = [p.row.discord for p in result.points]
    neg = [p.row.negativity_sum for p in result.points]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(t, total, label="total correlation (bits)")
    ax.plot(t, disc, label="discord (bits)")
    ax.plot(t, neg, label="negativity")
    if result.death_time is not None:
        ax.axvline(result.death_time, color="k", linestyle="--", linewidth=1,
                   label=f"death at t={result.death_time:.4f}")
    ax.set_xlabel("t")
    ax.set_ylabel("correlation measures")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
