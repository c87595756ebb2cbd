"""Spinor fields on periodic lattices and their initial conditions.

A walker state is a complex amplitude array over a 1-3 dimensional
periodic lattice with 2 or 4 internal (spin) components per site.
Physical coordinates are tied to site indices by ``(k - origin) * epsilon``;
the lattice spacing ``epsilon`` doubles as the timestep of the walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

NORM_TOL = 1e-12

# Fixed component orderings (documented contract shared by all operators):
#   spin_dim = 2 : (up, down)
#   spin_dim = 4 : (block1 up, block1 down, block2 up, block2 down)
SPIN_DIMS = (2, 4)


@dataclass(frozen=True)
class LatticeGeometry:
    """Periodic lattice: per-axis sizes, spacing, and the index of coordinate 0."""

    sizes: tuple[int, ...]
    epsilon: float
    origin: tuple[int, ...] = ()

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not 1 <= len(sizes) <= 3:
            raise ValueError(f"lattice must have 1-3 axes, got {len(sizes)}")
        if any(s < 2 for s in sizes):
            raise ValueError(f"every axis needs at least 2 sites, got {sizes}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        origin = tuple(int(o) for o in self.origin) if self.origin else tuple(s // 2 for s in sizes)
        object.__setattr__(self, "origin", origin)
        if len(origin) != len(sizes):
            raise ValueError("origin must give one index per axis")
        for o, s in zip(origin, sizes):
            if not 0 <= o < s:
                raise ValueError(f"origin index {o} outside axis of size {s}")

    @property
    def dims(self) -> int:
        return len(self.sizes)

    @property
    def num_sites(self) -> int:
        return math.prod(self.sizes)

    def coordinates(self, axis: int) -> np.ndarray:
        """Physical coordinates of all indices on ``axis``."""
        return (np.arange(self.sizes[axis]) - self.origin[axis]) * self.epsilon

    def coordinate(self, axis: int, index: int) -> float:
        return (index - self.origin[axis]) * self.epsilon

    def nearest_index(self, axis: int, coord: float) -> int:
        """Inverse of :meth:`coordinate`, rounding to the closest site."""
        return int(round(coord / self.epsilon)) + self.origin[axis]

    def extent(self, axis: int) -> tuple[float, float]:
        """(min, max) physical coordinate covered by sites on ``axis``."""
        c = self.coordinates(axis)
        return float(c[0]), float(c[-1])


@dataclass
class SpinorField:
    """Complex amplitudes over (sites, spin component).

    ``amplitudes`` has shape ``geometry.sizes + (spin_dim,)``. Fields are
    value-like: operators return new fields and never mutate their input.
    """

    geometry: LatticeGeometry
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        expected = self.geometry.sizes
        if self.amplitudes.shape[:-1] != expected:
            raise ValueError(
                f"amplitude grid {self.amplitudes.shape[:-1]} does not match lattice {expected}"
            )
        if self.amplitudes.shape[-1] not in SPIN_DIMS:
            raise ValueError(f"spin dimension must be one of {SPIN_DIMS}")

    @property
    def spin_dim(self) -> int:
        return self.amplitudes.shape[-1]

    def copy(self) -> "SpinorField":
        return SpinorField(self.geometry, self.amplitudes.copy())


@dataclass(frozen=True)
class GaussianPacketSpec:
    """Gaussian density profile times a fixed spin polarization.

    ``width`` is the standard deviation of the probability density in
    physical coordinates (recorded as such in run metadata).
    """

    center: tuple[float, ...]
    width: float
    polarization: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "polarization", tuple(complex(p) for p in self.polarization))
        if not self.width > 0:
            raise ValueError("packet width must be positive")
        if len(self.polarization) not in SPIN_DIMS:
            raise ValueError(f"polarization length must be one of {SPIN_DIMS}")
        if not np.linalg.norm(self.polarization) > 0:
            raise ValueError("polarization must be nonzero")


def make_gaussian_packet(geometry: LatticeGeometry, spec: GaussianPacketSpec) -> SpinorField:
    """Sample a normalized Gaussian density at site coordinates.

    The density is sampled pointwise and renormalized to unit total mass,
    then each site amplitude is ``sqrt(density) * polarization``.
    Raises ``ValueError`` if the requested center lies outside the lattice.
    """
    if len(spec.center) != geometry.dims:
        raise ValueError("packet center must give one coordinate per axis")
    log_n = np.zeros(geometry.sizes)
    for ax in range(geometry.dims):
        lo, hi = geometry.extent(ax)
        c = spec.center[ax]
        if not lo <= c <= hi:
            raise ValueError(f"center {c} outside axis {ax} extent [{lo}, {hi}]")
        coords = geometry.coordinates(ax)
        shape = [1] * geometry.dims
        shape[ax] = geometry.sizes[ax]
        log_n = log_n - ((coords - c) ** 2 / (2 * spec.width**2)).reshape(shape)
    density = np.exp(log_n)
    density /= density.sum()
    pol = np.asarray(spec.polarization, dtype=np.complex128)
    pol = pol / np.linalg.norm(pol)
    amplitudes = np.sqrt(density)[..., None] * pol
    return SpinorField(geometry, amplitudes)


def zero_field(geometry: LatticeGeometry, spin_dim: int) -> SpinorField:
    return SpinorField(geometry, np.zeros(geometry.sizes + (spin_dim,), dtype=np.complex128))


def single_site_field(
    geometry: LatticeGeometry, site: tuple[int, ...], spinor: tuple[complex, ...]
) -> SpinorField:
    """Field with all amplitude on one site, normalized."""
    out = zero_field(geometry, len(spinor))
    vec = np.asarray(spinor, dtype=np.complex128)
    out.amplitudes[tuple(site)] = vec / np.linalg.norm(vec)
    return out


def total_norm(field: SpinorField) -> float:
    """Sum of |amplitude|^2 over all sites and spin components."""
    return float(np.sum(np.abs(field.amplitudes) ** 2))


def probability_density(field: SpinorField) -> np.ndarray:
    """Per-site probability: |amplitude|^2 summed over the spin axis."""
    return np.sum(np.abs(field.amplitudes) ** 2, axis=-1)
