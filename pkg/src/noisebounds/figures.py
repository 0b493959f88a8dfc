"""Matplotlib rendering of the report curves emitted by the CLI.

Each helper takes the same rows that go into the delimited output and
writes a PNG next to it.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_anneal_curve", "render_lower_bound_curve"]


def render_anneal_curve(rows, threshold_bits_per_qubit: float, path: str) -> None:
    """Entropy density against ramp time with the sampling threshold.

    ``rows`` are (T, budget_bits_per_qubit, threshold, classical) tuples.
    """
    times = [r[0] for r in rows]
    budgets = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(times, budgets, color="tab:blue", label="entropy density bound")
    ax.axhline(threshold_bits_per_qubit, color="tab:red", linestyle="--",
               label="polynomial-sampling threshold")
    crossed = [t for t, b in zip(times, budgets) if b <= threshold_bits_per_qubit]
    if crossed:
        ax.axvspan(crossed[0], times[-1], color="tab:red", alpha=0.12,
                   label="classically matched")
    ax.set_xlabel("ramp time T  [1/J]")
    ax.set_ylabel("relative entropy per qubit  [bits]")
    ax.set_yscale("log")
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_lower_bound_curve(
    densities, bound_densities, sa_density: float, sdp_density: float, path: str
) -> None:
    """Energy floor against entropy density with the classical baselines."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(densities, bound_densities, color="tab:blue", label="energy floor")
    ax.axhline(sa_density, color="tab:orange", linestyle="--", label="certified annealing")
    ax.axhline(sdp_density, color="tab:green", linestyle=":", label="relaxation rounding")
    ax.set_xlabel("relative entropy density  [bits/qubit]")
    ax.set_ylabel("energy per qubit")
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
