"""One-step walk operators, time evolution, and the dense-matrix oracle.

A step composes site-local coins with spin-dependent shifts, applied
right-to-left (the rightmost factor acts first):

  2D:  shift_y . coin(+) . shift_x . coin(-)          on 2 components
  3D:  coupling . shift_z . rot_z . shift_x . rot_x . shift_y . rot_y
                                                      on 4 components

The coin angle varies only along the confining axis (y in 2D, z in 3D) and
is precomputed per slice. On tiny lattices the full step can be materialized
as an explicit unitary matrix, which serves as the brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import observables as obs
from .coins import DomainWallParams, rotation_set, wall_angle_profile
from .lattice import LatticeGeometry, SpinorField, probability_density, total_norm
from .shifts import Axis, shift_2d, shift_3d_block

DENSE_DIM_LIMIT = 4096

_FLAVOR_SPEC = {
    "2d": dict(spin_dim=2, dims=2, confining_axis=1),
    "3d": dict(spin_dim=4, dims=3, confining_axis=2),
}


@dataclass(frozen=True, eq=False)
class StepPlan:
    """The ordered sub-operations of one walk step plus their parameters.

    ``uniform_angle`` replaces the tanh profile with a constant wall angle
    (used by the continuum validators, where translation invariance along
    the confining axis is needed). ``rotations`` overrides the default
    (R_x, R_y, R_z) triple of the 3D walk, e.g. for negative controls.
    """

    flavor: str
    params: DomainWallParams
    angle_mode: str = "physical"
    uniform_angle: float | None = None
    rotations: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.flavor not in _FLAVOR_SPEC:
            raise ValueError(f"flavor must be one of {sorted(_FLAVOR_SPEC)}")
        if self.angle_mode not in ("physical", "index"):
            raise ValueError("angle_mode must be 'physical' or 'index'")
        if self.rotations is not None:
            rots = tuple(np.asarray(r, dtype=np.complex128) for r in self.rotations)
            if len(rots) != 3 or any(r.shape != (2, 2) for r in rots):
                raise ValueError("rotations must be three 2x2 matrices")
            object.__setattr__(self, "rotations", rots)

    @property
    def spin_dim(self) -> int:
        return _FLAVOR_SPEC[self.flavor]["spin_dim"]

    @property
    def dims(self) -> int:
        return _FLAVOR_SPEC[self.flavor]["dims"]

    @property
    def confining_axis(self) -> int:
        return _FLAVOR_SPEC[self.flavor]["confining_axis"]

    @property
    def operations(self) -> tuple[str, ...]:
        """Sub-operation names in application order (first acts first)."""
        if self.flavor == "2d":
            return ("coin_minus", "shift_x", "coin_plus", "shift_y")
        return ("rot_y", "shift_y", "rot_x", "shift_x", "rot_z", "shift_z", "coupling_coin")


@lru_cache(maxsize=32)
def _angle_table(
    params: DomainWallParams,
    geometry: LatticeGeometry,
    axis: int,
    mode: str,
    uniform_angle: float | None,
) -> np.ndarray:
    if uniform_angle is not None:
        table = np.full(geometry.sizes[axis], float(uniform_angle))
    else:
        table = wall_angle_profile(params, geometry, axis, mode)
    table.flags.writeable = False
    return table


def _coin_tables(plan: StepPlan, geometry: LatticeGeometry):
    """Broadcast-ready cos/sin tables along the confining axis."""
    axis = plan.confining_axis
    tb = _angle_table(plan.params, geometry, axis, plan.angle_mode, plan.uniform_angle)
    shape = [1] * geometry.dims
    shape[axis] = geometry.sizes[axis]
    if plan.flavor == "2d":
        tm = -np.pi / 4 - plan.params.epsilon * tb
        tp = +np.pi / 4 - plan.params.epsilon * tb
        return tuple(a.reshape(shape) for a in (np.cos(tm), np.sin(tm), np.cos(tp), np.sin(tp)))
    a = plan.params.epsilon * tb
    return tuple(x.reshape(shape) for x in (np.cos(a), np.sin(a)))


def _mix_pair(amps: np.ndarray, i: int, j: int, c, s) -> None:
    # [[c, i s], [i s, c]] on components (i, j); c, s broadcast over sites.
    # Both outputs are built before writing back (the slices alias amps).
    ai, aj = amps[..., i], amps[..., j]
    new_i = c * ai + 1j * s * aj
    new_j = 1j * s * ai + c * aj
    amps[..., i] = new_i
    amps[..., j] = new_j


def _rotate_pair(amps: np.ndarray, i: int, j: int, r: np.ndarray) -> None:
    ai, aj = amps[..., i], amps[..., j]
    new_i = r[0, 0] * ai + r[0, 1] * aj
    new_j = r[1, 0] * ai + r[1, 1] * aj
    amps[..., i] = new_i
    amps[..., j] = new_j


def _check_plan(field: SpinorField, plan: StepPlan) -> None:
    if field.spin_dim != plan.spin_dim:
        raise ValueError(f"{plan.flavor} plan needs spin_dim {plan.spin_dim}, got {field.spin_dim}")
    if field.geometry.dims != plan.dims:
        raise ValueError(f"{plan.flavor} plan needs a {plan.dims}D lattice")
    if field.geometry.epsilon != plan.params.epsilon:
        raise ValueError("lattice epsilon and wall-parameter epsilon disagree")


def step(field: SpinorField, plan: StepPlan) -> SpinorField:
    """Advance the field one timestep. Norm-preserving up to rounding."""
    _check_plan(field, plan)
    geometry = field.geometry
    out = SpinorField(geometry, field.amplitudes.copy())
    amps = out.amplitudes
    if plan.flavor == "2d":
        cm, sm, cp, sp = _coin_tables(plan, geometry)
        _mix_pair(amps, 0, 1, cm, sm)
        out = shift_2d(out, Axis.X)
        amps = out.amplitudes
        _mix_pair(amps, 0, 1, cp, sp)
        return shift_2d(out, Axis.Y)
    rx, ry, rz = plan.rotations if plan.rotations is not None else rotation_set()
    c, s = _coin_tables(plan, geometry)
    for rot, axis in ((ry, Axis.Y), (rx, Axis.X), (rz, Axis.Z)):
        _rotate_pair(amps, 0, 1, rot)
        _rotate_pair(amps, 2, 3, rot)
        out = shift_3d_block(out, axis)
        amps = out.amplitudes
    _mix_pair(amps, 0, 2, c, s)
    _mix_pair(amps, 1, 3, c, s)
    return out


@dataclass
class EvolveResult:
    field: SpinorField
    series: obs.ObservableSeries
    snapshots: dict[int, np.ndarray]
    wrap: dict


def evolve(
    field: SpinorField,
    plan: StepPlan,
    steps: int,
    *,
    cadence: int = 1,
    snapshot_every: int = 0,
    wrap_check: bool = True,
    wrap_threshold: float = 1e-6,
    observers: tuple = (),
) -> EvolveResult:
    """Apply ``steps`` walk steps, recording observables every ``cadence`` steps.

    The final step is always recorded. Density snapshots are kept at step 0
    and every ``snapshot_every`` steps when that is positive, plus the final
    step. With ``wrap_check`` on, records carry the mass within two sites of
    the boundary, and the result flags the first record where it exceeds
    ``wrap_threshold`` (the run is not interrupted).
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if cadence < 1:
        raise ValueError("cadence must be at least 1")
    _check_plan(field, plan)
    geometry = field.geometry
    eps = plan.params.epsilon
    series = obs.ObservableSeries()
    snapshots: dict[int, np.ndarray] = {}
    wrap = {"checked": bool(wrap_check), "triggered": False, "first_step": None, "max_shell_mass": 0.0}

    def want_snapshot(j: int) -> bool:
        return j == steps or (snapshot_every > 0 and j % snapshot_every == 0)

    if want_snapshot(0):
        snapshots[0] = probability_density(field)

    current = field
    for j in range(1, steps + 1):
        current = step(current, plan)
        if j % cadence and j != steps:
            continue
        density = probability_density(current)
        mean_sigma = [obs.axis_moments(density, geometry, ax) for ax in range(geometry.dims)]
        record = obs.SeriesRecord(
            step=j,
            time=j * eps,
            norm=total_norm(current),
            mean=tuple(ms[0] for ms in mean_sigma),
            sigma=tuple(ms[1] for ms in mean_sigma),
        )
        if wrap_check:
            record.shell_mass = obs.boundary_shell_mass(density)
            wrap["max_shell_mass"] = max(wrap["max_shell_mass"], record.shell_mass)
            if record.shell_mass > wrap_threshold and not wrap["triggered"]:
                wrap["triggered"] = True
                wrap["first_step"] = j
        if want_snapshot(j):
            snapshots[j] = density
            record.density_ref = f"j{j:04d}"
        series.append(record)
        for fn in observers:
            fn(j, j * eps, current)
    return EvolveResult(field=current, series=series, snapshots=snapshots, wrap=wrap)


@dataclass
class DenseOperator:
    """Explicit matrix of one full step on a tiny lattice.

    Basis ordering matches ``amplitudes.ravel()``: site-major (C order),
    spin component fastest.
    """

    matrix: np.ndarray
    geometry: LatticeGeometry
    spin_dim: int

    def apply(self, field: SpinorField) -> SpinorField:
        out = (self.matrix @ field.amplitudes.ravel()).reshape(field.amplitudes.shape)
        return SpinorField(field.geometry, out)


def dense_step_matrix(plan: StepPlan, geometry: LatticeGeometry) -> DenseOperator:
    """Build the one-step operator column-by-column from basis states."""
    dim = geometry.num_sites * plan.spin_dim
    if dim > DENSE_DIM_LIMIT:
        raise ValueError(f"dense operator dimension {dim} exceeds limit {DENSE_DIM_LIMIT}")
    shape = geometry.sizes + (plan.spin_dim,)
    matrix = np.empty((dim, dim), dtype=np.complex128)
    basis = np.zeros(dim, dtype=np.complex128)
    for col in range(dim):
        basis[col] = 1.0
        column_field = step(SpinorField(geometry, basis.reshape(shape)), plan)
        matrix[:, col] = column_field.amplitudes.ravel()
        basis[col] = 0.0
    return DenseOperator(matrix=matrix, geometry=geometry, spin_dim=plan.spin_dim)
