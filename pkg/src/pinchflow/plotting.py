"""Figure rendering for the CLI report path.

Figures are written next to the delimited outputs; the CSVs remain the
machine-readable contract.  Matplotlib is used in the non-interactive Agg
backend so the functions are safe in headless runs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import RevolutionProfile, SupportProfile, boundary_points


def plot_monitor_series(records, path) -> None:
    """Four-panel summary of a flow run's monitor time series."""
    t = np.array([r.t for r in records])
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True)
    ax = axes[0, 0]
    ax.plot(t, [r.g_max for r in records], lw=1.2)
    ax.set_ylabel("max roundness deficit")
    ax = axes[0, 1]
    ax.plot(t, [r.pinch for r in records], lw=1.2, color="tab:red")
    ax.set_ylabel("pinching ratio")
    ax = axes[1, 0]
    ax.plot(t, [r.r_minus for r in records], lw=1.2, label="inradius")
    ax.plot(t, [r.r_plus for r in records], lw=1.2, label="circumradius")
    ax.set_ylabel("ball radii")
    ax.set_xlabel("t")
    ax.legend(frameon=False, fontsize=8)
    ax = axes[1, 1]
    ax.plot(t, [r.f_min for r in records], lw=1.2, color="tab:green")
    ax.set_ylabel("min speed")
    ax.set_xlabel("t")
    for a in axes.flat:
        a.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_support_profile(profile: SupportProfile, path, title: str | None = None) -> None:
    """Meridian cross-section reconstructed from the support data."""
    x, rho = boundary_points(profile)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(x, rho, lw=1.2)
    ax.plot(x, -rho, lw=1.2, color="C0")
    ax.set_aspect("equal")
    ax.set_xlabel("axis")
    ax.set_ylabel("radius")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_revolution_profile(profile: RevolutionProfile, path,
                            title: str | None = None) -> None:
    """Graph u(x) of a revolution profile."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(profile.x, profile.u, lw=1.2)
    ax.plot(profile.x, -profile.u, lw=1.2, color="C0")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_qform_scan(ratios, c1, c2, path, critical: float | None = None) -> None:
    """Coefficient curves of the degree-alpha gradient form against ratio."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ratios, c1, lw=1.2, label="coefficient of (d1h22)^2")
    ax.plot(ratios, c2, lw=1.2, label="coefficient of (d2h11)^2")
    ax.axhline(0.0, color="k", lw=0.6)
    if critical is not None:
        ax.axvline(critical, color="tab:red", lw=0.8, ls="--", label="critical ratio")
    ax.set_xlabel("pinching ratio")
    ax.set_ylabel("coefficient")
    ax.legend(frameon=False, fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
