"""Spin-dependent translations on periodic lattices.

Sampling convention, shared with the dense-operator oracle: the output up
component at site k is read from site k+1, the output down component from
site k-1 (so a lone spin-up amplitude lands one site in the -axis
direction). ``inverse=True`` applies the adjoint (reverse sampling).
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

from .lattice import SpinorField


class Axis(IntEnum):
    X = 0
    Y = 1
    Z = 2


def _shift_pair(amps: np.ndarray, axis: int, up: int, down: int, inverse: bool) -> None:
    # out[k] = in[k+1] is a roll by -1; the adjoint swaps directions.
    d = +1 if inverse else -1
    amps[..., up] = np.roll(amps[..., up], d, axis=axis)
    amps[..., down] = np.roll(amps[..., down], -d, axis=axis)


def shift_2d(field: SpinorField, axis: Axis, inverse: bool = False) -> SpinorField:
    """Spin-dependent translation of a 2-component field along ``axis``."""
    if field.spin_dim != 2:
        raise ValueError("shift_2d needs a 2-component field")
    if axis >= field.geometry.dims:
        raise ValueError(f"axis {axis.name} not present in a {field.geometry.dims}D lattice")
    out = field.amplitudes.copy()
    _shift_pair(out, int(axis), up=0, down=1, inverse=inverse)
    return SpinorField(field.geometry, out)


def shift_3d_block(field: SpinorField, axis: Axis, inverse: bool = False) -> SpinorField:
    """Block translation of a 4-component field: the first 2-spinor block is
    shifted forward, the second with the adjoint sampling."""
    if field.spin_dim != 4:
        raise ValueError("shift_3d_block needs a 4-component field")
    if axis >= field.geometry.dims:
        raise ValueError(f"axis {axis.name} not present in a {field.geometry.dims}D lattice")
    out = field.amplitudes.copy()
    _shift_pair(out, int(axis), up=0, down=1, inverse=inverse)
    _shift_pair(out, int(axis), up=2, down=3, inverse=not inverse)
    return SpinorField(field.geometry, out)
