"""Measured quantities: marginals, positional moments, slab mass, time series.

All observables depend on the field only through its site density, so they
are invariant under global phases and any site-local unitary applied before
the density is formed. Moments are population statistics in physical units;
on the periodic ring they use minimal-image deviations around the
variance-minimizing cut, which reproduces plain moments whenever the mass
fits in a half-ring and degrades gracefully when it does not.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeGeometry


def axis_marginal(density: np.ndarray, axis: int) -> np.ndarray:
    """Sum the site density over every axis except ``axis``."""
    other = tuple(a for a in range(density.ndim) if a != axis)
    return density.sum(axis=other) if other else np.asarray(density, float)


def axis_moments(density: np.ndarray, geometry: LatticeGeometry, axis: int) -> tuple[float, float]:
    """(mean position, standard deviation) along ``axis``, physical units.

    The ring is cut at the point that minimizes the wrapped variance (the
    intrinsic circular mean), so results match plain moments exactly
    whenever the mass fits in a half-ring, and stay bounded under wrap.
    Rejects zero-mass densities.
    """
    marg = axis_marginal(density, axis)
    mass = float(marg.sum())
    if not mass > 0:
        raise ValueError("cannot take moments of a zero-mass density")
    n = geometry.sizes[axis]
    idx = np.arange(n)
    offsets = ((idx[None, :] - idx[:, None]) % n).astype(float)  # one row per cut
    first = offsets @ marg / mass
    second = (offsets**2) @ marg / mass
    variances = second - first**2
    cut = int(np.argmin(variances))
    center = cut + first[cut] - geometry.origin[axis]
    center = (center + n / 2) % n - n / 2
    eps = geometry.epsilon
    return center * eps, float(np.sqrt(max(variances[cut], 0.0))) * eps


def std_dev_per_axis(density: np.ndarray, geometry: LatticeGeometry, axis: int) -> float:
    """Standard deviation of position along ``axis`` (physical units)."""
    return axis_moments(density, geometry, axis)[1]


def slab_mass(
    density: np.ndarray,
    geometry: LatticeGeometry,
    axis: int,
    center: float,
    half_width: float,
) -> float:
    """Probability within |coordinate - center| <= half_width along ``axis``.

    Distances are periodic (minimal image), so a half_width of at least half
    the circumference captures everything.
    """
    if half_width < 0:
        raise ValueError("half_width must be nonnegative")
    circumference = geometry.sizes[axis] * geometry.epsilon
    dist = geometry.coordinates(axis) - center
    dist = np.abs((dist + circumference / 2) % circumference - circumference / 2)
    marg = axis_marginal(density, axis)
    return float(marg[dist <= half_width].sum())


def boundary_shell_mass(density: np.ndarray, shell: int = 2) -> float:
    """Mass within ``shell`` sites of any lattice boundary (wrap detector)."""
    interior = tuple(slice(shell, n - shell) for n in density.shape)
    if any(n <= 2 * shell for n in density.shape):
        return float(density.sum())
    return float(density.sum() - density[interior].sum())


@dataclass
class SeriesRecord:
    """One observation: step index, physical time, norm, per-axis moments."""

    step: int
    time: float
    norm: float
    mean: tuple[float, ...]
    sigma: tuple[float, ...]
    density_ref: str | None = None
    shell_mass: float | None = None


@dataclass
class ObservableSeries:
    """Per-timestep records, strictly increasing in step index."""

    records: list[SeriesRecord] = field(default_factory=list)

    def append(self, record: SeriesRecord) -> None:
        if self.records and record.step <= self.records[-1].step:
            raise ValueError("series records must be strictly increasing in step")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str, axis: int | None = None) -> np.ndarray:
        """Extract one column ('step', 'time', 'norm', 'mean', 'sigma') as an array."""
        if name in ("mean", "sigma"):
            return np.array([getattr(r, name)[axis] for r in self.records])
        return np.array([getattr(r, name) for r in self.records])
