"""Plotting companion for wallwalk: renders figures from run directories."""

__version__ = "0.1.0"

from .io import DensityGrid, PlotDataError, last_density, read_density, read_meta, read_series
from .render import PlotJob, render, render_3d_density, render_heatmap, render_sigma_curves

__all__ = [
    "DensityGrid",
    "PlotDataError",
    "PlotJob",
    "last_density",
    "read_density",
    "read_meta",
    "read_series",
    "render",
    "render_3d_density",
    "render_heatmap",
    "render_sigma_curves",
]
