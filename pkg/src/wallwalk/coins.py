"""Coin unitaries and the domain-wall coin-angle profile.

The wall profile is an odd tanh kink; it enters the 2D walk through the
pair of quarter-turn coins and the 3D walk through a block-coupling coin.
All matrices here act on the internal (spin) space only.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

SQRT2 = np.sqrt(2.0)

ID2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

# 2-component conventions used by the continuum reference (1 time + 2 space).
GAMMA0_2D = -SIGMA_X
GAMMA1_2D = -1j * SIGMA_Y
GAMMA_CHIRAL_2D = -1j * SIGMA_Z

# Coupling matrix of the 4-component block coin: mixes the two 2-spinor
# blocks while leaving the up/down structure alone.
B0_COUPLING = np.kron(SIGMA_X, ID2)


def weyl_gammas() -> dict[str, np.ndarray]:
    """4x4 gamma matrices in the chiral (Weyl) representation, metric (+,-,-,-)."""
    zero = np.zeros((2, 2), dtype=np.complex128)
    g0 = np.block([[zero, ID2], [ID2, zero]])
    gi = [np.block([[zero, s], [-s, zero]]) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
    g5 = np.block([[-ID2, zero], [zero, ID2]])
    return {"g0": g0, "g1": gi[0], "g2": gi[1], "g3": gi[2], "g5": g5}


@dataclass(frozen=True)
class DomainWallParams:
    """Wall profile parameters: effective mass, self-coupling, coupling strength,
    and the lattice parameter epsilon (spacing = timestep)."""

    mass: float
    lam: float
    coupling: float
    epsilon: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.mass < 0:
            raise ValueError("mass must be nonnegative")

    def with_epsilon(self, epsilon: float) -> "DomainWallParams":
        return replace(self, epsilon=epsilon)


def domain_wall_angle(params: DomainWallParams, y) -> np.ndarray | float:
    """Wall angle  coupling * (mass/sqrt(lambda)) * tanh(mass * y / sqrt(2)).

    Odd in y, bounded by |coupling| * mass / sqrt(lambda); identically zero
    for mass = 0. Accepts scalars or arrays.
    """
    m = params.mass
    return params.coupling * (m / np.sqrt(params.lam)) * np.tanh(m * np.asarray(y, float) / SQRT2)


def wall_angle_profile(params, geometry, axis: int, mode: str = "physical") -> np.ndarray:
    """Per-slice wall angle along the confining ``axis`` of ``geometry``.

    ``mode`` selects the tanh argument: "physical" evaluates at the physical
    coordinate (index - origin) * epsilon, "index" at the bare offset
    (index - origin). Physical is the default; the bare-index variant is kept
    as a comparison switch.
    """
    offsets = np.arange(geometry.sizes[axis]) - geometry.origin[axis]
    if mode == "physical":
        arg = offsets * geometry.epsilon
    elif mode == "index":
        arg = offsets.astype(float)
    else:
        raise ValueError(f"unknown angle mode {mode!r}")
    return np.asarray(domain_wall_angle(params, arg))


def coin_2d(sign: int, wall_angle: float, epsilon: float) -> np.ndarray:
    """One of the paired 2D coins: angle is sign*pi/4 - epsilon*wall_angle.

    Returns [[cos t, i sin t], [i sin t, cos t]], manifestly unitary.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    t = sign * np.pi / 4 - epsilon * wall_angle
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, 1j * s], [1j * s, c]])


def coupling_coin_4d(wall_angle: float, epsilon: float) -> np.ndarray:
    """4x4 block-coupling coin: rotates between the two 2-spinor blocks.

    Equals [[cos a, i sin a], [i sin a, cos a]] (a = wall_angle * epsilon)
    acting on the block index, tensored with the identity on up/down.
    Reduces to the identity when the wall angle vanishes.
    """
    a = wall_angle * epsilon
    c, s = np.cos(a), np.sin(a)
    mix = np.array([[c, 1j * s], [1j * s, c]])
    return np.kron(mix, ID2)


def rotation_set() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three 2x2 rotations of the 3D split-step walk, as (R_x, R_y, R_z).

    R_x is the Hadamard matrix, R_z a Hermitian involution, and R_y is
    constructed as the product R_x @ R_z, which makes R_z R_x R_y the
    identity (both factors square to the identity).
    """
    rx = np.array([[1, 1], [1, -1]], dtype=np.complex128) / SQRT2
    rz = np.array([[1, -1j], [1j, -1]], dtype=np.complex128) / SQRT2
    ry = rx @ rz
    return rx, ry, rz
