"""Report rendering: delimited bound sweeps plus the matching figures.

The report path writes everything to files: a combined CSV of the bound
sweeps, a capacity-bounds figure over the noise grid, and a growth-rate
curve with its sweep CSV.  Rendering uses the non-interactive backend so it
works in headless runs.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .bounds import bounds_sweep, row_in_units, rows_to_csv
from .geometry import SigmaRhoParams
from .growth import v1

__all__ = ["render_bounds_figure", "render_growth_figure", "write_report"]

_UNIT_LABEL = {"nats": "nats/symbol", "bits": "bits/symbol"}


def render_bounds_figure(rows_by_sigma, path, units="bits"):
    """Capacity bounds against noise power, one lower-bound curve per sigma.

    Upper bounds are drawn for the smallest sigma only (the curves for other
    sigmas share the average-power bound and would overplot).
    """
    if not rows_by_sigma:
        raise ValueError("nothing to plot")
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    uppers_for = min(rows_by_sigma)
    for sigma in sorted(rows_by_sigma):
        rows = [row_in_units(r, units) for r in rows_by_sigma[sigma]]
        nu = [r.nu for r in rows]
        ax.plot(nu, [r.epi_lower for r in rows], label=f"lower, sigma={sigma:g}")
        if sigma == uppers_for:
            ax.plot(nu, [r.awgn_upper for r in rows], "--", label="avg-power upper")
            if all(r.minkowski_upper is not None for r in rows):
                ax.plot(nu, [r.minkowski_upper for r in rows], ":",
                        label="volume upper")
    ax.set_xscale("log")
    ax.set_xlabel("noise power")
    ax.set_ylabel(f"capacity bound [{_UNIT_LABEL[units]}]")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_growth_figure(sigmas, values, path):
    """Growth rate v1 against the battery cap."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(sigmas, values, marker="o")
    ax.set_xlabel("battery cap sigma")
    ax.set_ylabel("growth rate v1 [nats/symbol]")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(out_dir, sigmas, rho, nu_grid, gamma=1e-6, units="bits",
                 v1_sigmas=(0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)):
    """Run the sweeps and write CSV + figures under out_dir.

    Returns a dict naming the four artifacts: bounds_csv, bounds_figure,
    growth_csv, growth_figure.
    """
    os.makedirs(out_dir, exist_ok=True)
    rows_by_sigma = {}
    all_rows = []
    for sigma in sigmas:
        rows = bounds_sweep(SigmaRhoParams(sigma, rho), nu_grid, gamma)
        rows_by_sigma[sigma] = rows
        all_rows.extend(rows)

    bounds_csv = os.path.join(out_dir, "bounds.csv")
    with open(bounds_csv, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv([row_in_units(r, units) for r in all_rows]))
    bounds_fig = os.path.join(out_dir, "bounds.png")
    render_bounds_figure(rows_by_sigma, bounds_fig, units)

    growth_vals = [v1(s, gamma).value for s in v1_sigmas]
    growth_csv = os.path.join(out_dir, "growth.csv")
    with open(growth_csv, "w", encoding="utf-8") as fh:
        fh.write("sigma,v1_nats\n")
        for s, val in zip(v1_sigmas, growth_vals):
            fh.write(f"{s:.12g},{val:.12g}\n")
    growth_fig = os.path.join(out_dir, "growth.png")
    render_growth_figure(list(v1_sigmas), growth_vals, growth_fig)

    return {
        "bounds_csv": bounds_csv,
        "bounds_figure": bounds_fig,
        "growth_csv": growth_csv,
        "growth_figure": growth_fig,
    }
