"""Readers for wallwalk run directories.

Everything plotted traces back to a CSV cell or a metadata field; these
readers validate eagerly and fail loudly, naming the offending file, so a
render never leaves a partial image behind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class PlotDataError(ValueError):
    """Missing or malformed run output."""


@dataclass
class DensityGrid:
    values: np.ndarray  # shape from the file header
    step: int
    time: float
    epsilon: float
    origin: tuple[int, ...]

    def coordinates(self, axis: int) -> np.ndarray:
        n = self.values.shape[axis]
        return (np.arange(n) - self.origin[axis]) * self.epsilon


def read_meta(run_dir: Path) -> dict:
    path = Path(run_dir) / "meta.json"
    if not path.exists():
        raise PlotDataError(f"{path}: missing metadata file")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise PlotDataError(f"{path}: corrupt JSON ({err})") from err


def read_series(run_dir: Path, require_sigma: bool = False) -> dict[str, np.ndarray]:
    path = Path(run_dir) / "series.csv"
    if not path.exists():
        raise PlotDataError(f"{path}: missing series file")
    lines = path.read_text().splitlines()
    if not lines:
        raise PlotDataError(f"{path}: empty series file")
    columns = lines[0].split(",")
    if columns[:3] != ["j", "t", "norm"]:
        raise PlotDataError(f"{path}: unexpected header {lines[0]!r}")
    if require_sigma and not any(c.startswith("sigma_") for c in columns):
        raise PlotDataError(f"{path}: no sigma columns in header")
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(columns):
            raise PlotDataError(f"{path}: line {line_no} has {len(cells)} cells, "
                                f"expected {len(columns)}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as err:
            raise PlotDataError(f"{path}: line {line_no}: {err}") from err
    data = np.array(rows) if rows else np.empty((0, len(columns)))
    return {name: data[:, i] for i, name in enumerate(columns)}


def _parse_density_header(path: Path, header: str) -> dict:
    if not header.startswith("# density "):
        raise PlotDataError(f"{path}: not a density grid (header {header[:40]!r})")
    fields = {}
    for token in header[2:].split()[1:]:
        key, _, value = token.partition("=")
        fields[key] = value
    try:
        return {
            "step": int(fields["j"]),
            "time": float(fields["t"]),
            "shape": tuple(int(v) for v in fields["shape"].split(",")),
            "epsilon": float(fields["epsilon"]),
            "origin": tuple(int(v) for v in fields["origin"].split(",")),
        }
    except (KeyError, ValueError) as err:
        raise PlotDataError(f"{path}: malformed density header ({err})") from err


def read_density(path: Path) -> DensityGrid:
    path = Path(path)
    if not path.exists():
        raise PlotDataError(f"{path}: missing density file")
    with path.open() as handle:
        header = handle.readline().rstrip("\n")
        meta = _parse_density_header(path, header)
        body = handle.read()
    if not body.strip():
        raise PlotDataError(f"{path}: density file has no data rows")
    try:
        flat = np.array(
            [[float(c) for c in line.split(",")] for line in body.splitlines() if line.strip()]
        )
    except ValueError as err:
        raise PlotDataError(f"{path}: malformed density data ({err})") from err
    expected = int(np.prod(meta["shape"]))
    if flat.size != expected:
        raise PlotDataError(f"{path}: {flat.size} values, header promises {expected}")
    return DensityGrid(
        values=flat.reshape(meta["shape"]),
        step=meta["step"],
        time=meta["time"],
        epsilon=meta["epsilon"],
        origin=meta["origin"],
    )


def last_density(run_dir: Path) -> DensityGrid:
    """The latest snapshot listed in the run's metadata."""
    meta = read_meta(run_dir)
    names = meta.get("outputs", {}).get("densities", [])
    if not names:
        raise PlotDataError(f"{Path(run_dir) / 'meta.json'}: run has no density snapshots")
    return read_density(Path(run_dir) / names[-1])
