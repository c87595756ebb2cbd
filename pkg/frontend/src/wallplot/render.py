"""Figure renderers: density heatmap with marginal insets, sigma/t curves,
and 3D side-view projections. All inputs are parsed before any drawing, so
a bad run directory raises without leaving a partial image."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import PlotDataError, last_density, read_meta, read_series

KINDS = ("density-heatmap", "sigma-curves", "3d-density")


@dataclass
class PlotJob:
    run_dirs: tuple[Path, ...]
    kind: str
    output: Path
    cmap: str = "viridis"
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        self.run_dirs = tuple(Path(d) for d in self.run_dirs)
        self.output = Path(self.output)
        if self.kind not in KINDS:
            raise PlotDataError(f"unknown figure kind {self.kind!r}")
        if not self.run_dirs:
            raise PlotDataError("at least one run directory is required")


def _run_label(run_dir: Path, override: str | None) -> str:
    if override:
        return override
    config = read_meta(run_dir).get("config", {})
    return f"mass={config.get('mass', '?')}"


def render_heatmap(job: PlotJob):
    """Density heatmap of the first run's last snapshot, with projected
    per-axis profiles in an inset. Axes are physical coordinates."""
    grid = last_density(job.run_dirs[0])
    if grid.values.ndim != 2:
        raise PlotDataError(f"density-heatmap needs a 2D grid, got {grid.values.ndim}D")
    x, y = grid.coordinates(0), grid.coordinates(1)

    fig, ax = plt.subplots(figsize=(6.4, 5.6))
    mesh = ax.imshow(
        grid.values.T,
        origin="lower",
        extent=(x[0], x[-1], y[0], y[-1]),
        cmap=job.cmap,
        aspect="auto",
    )
    fig.colorbar(mesh, ax=ax, label="site probability")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"density at t={grid.time:g} (j={grid.step})")

    inset = ax.inset_axes((0.62, 0.62, 0.36, 0.36))
    mx, my = grid.values.sum(axis=1), grid.values.sum(axis=0)
    inset.plot(x, mx / mx.max(), "r-.", lw=1.0, label="x profile")
    inset.plot(y, my / my.max(), "b--", lw=1.0, label="y profile")
    inset.set_yticks([])
    inset.tick_params(labelsize=6)
    inset.legend(fontsize=5, frameon=False)

    fig.savefig(job.output, dpi=150)
    plt.close(fig)
    return fig


def render_sigma_curves(job: PlotJob):
    """sigma_y/t (main) and sigma_x/t (inset) against t, one curve per run."""
    curves = []
    for i, run_dir in enumerate(job.run_dirs):
        series = read_series(run_dir, require_sigma=True)
        if "sigma_y" not in series or "sigma_x" not in series:
            raise PlotDataError(f"{run_dir}/series.csv: missing sigma columns")
        label = _run_label(run_dir, job.labels[i] if i < len(job.labels) else None)
        curves.append((label, series))

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    inset = ax.inset_axes((0.55, 0.55, 0.4, 0.4))
    markers = ("s", "D", "o", "^")
    for i, (label, series) in enumerate(curves):
        t = series["t"]
        style = dict(marker=markers[i % len(markers)], ms=3, lw=1.0)
        ax.plot(t, series["sigma_y"] / t, label=label, **style)
        inset.plot(t, series["sigma_x"] / t, **style)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\sigma_y(t)/t$")
    inset.set_ylabel(r"$\sigma_x(t)/t$", fontsize=7)
    inset.tick_params(labelsize=6)
    ax.legend()

    fig.savefig(job.output, dpi=150)
    plt.close(fig)
    return fig


def render_3d_density(job: PlotJob):
    """x-z and x-y side views (projections) of a 3D density snapshot."""
    grid = last_density(job.run_dirs[0])
    if grid.values.ndim != 3:
        raise PlotDataError(f"3d-density needs a 3D grid, got {grid.values.ndim}D")
    x, y, z = (grid.coordinates(a) for a in range(3))

    fig, (left, right) = plt.subplots(1, 2, figsize=(9.6, 4.2))
    xz = grid.values.sum(axis=1)
    xy = grid.values.sum(axis=2)
    for axes, data, vert, vlabel, title in (
        (left, xz, z, "z", "x-z side view"),
        (right, xy, y, "y", "x-y side view"),
    ):
        mesh = axes.imshow(
            data.T,
            origin="lower",
            extent=(x[0], x[-1], vert[0], vert[-1]),
            cmap=job.cmap,
            aspect="auto",
        )
        fig.colorbar(mesh, ax=axes)
        axes.set_xlabel("x")
        axes.set_ylabel(vlabel)
        axes.set_title(title)
    fig.suptitle(f"density projections at t={grid.time:g} (j={grid.step})")

    fig.savefig(job.output, dpi=150)
    plt.close(fig)
    return fig


RENDERERS = {
    "density-heatmap": render_heatmap,
    "sigma-curves": render_sigma_curves,
    "3d-density": render_3d_density,
}


def render(job: PlotJob):
    return RENDERERS[job.kind](job)
