"""Command-line front end: configs, figure presets, run driving, file output.

Config files are flat ``key = value`` documents ('#' starts a comment).
Recognized keys: flavor, sizes, epsilon, steps, mass, lambda, coupling,
center, width, polarization, cadence, snapshot_every, angle_mode,
wrap_check, preset, out_dir. A run writes ``meta.json`` (fully resolved
config plus conventions and norm/wrap summaries), ``series.csv`` with
columns j, t, norm, mean_<axis>..., sigma_<axis>..., and row-major density
grids ``density_j<NNNN>.csv``. Outputs are byte-identical for identical
configs and versions.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .coins import DomainWallParams, rotation_set
from .continuum import convergence_study
from .engine import StepPlan, evolve
from .generators import check_clifford
from .lattice import GaussianPacketSpec, LatticeGeometry, make_gaussian_packet, total_norm
from .observables import ObservableSeries

AXIS_NAMES = ("x", "y", "z")


class ConfigError(ValueError):
    """Invalid, unknown, or missing configuration input."""


# Grid sizes and step counts below are inferred, not stated by the source
# figures; they are chosen so the tanh wall sits at the lattice midpoint and
# (except fig1, see help text) no wavefront wraps within the run.
PRESETS: dict[str, dict] = {
    "fig1": dict(
        flavor="2d", sizes=(128, 128), epsilon=0.04, steps=250, mass=1.0, lam=60.0,
        coupling=70.0, center=(0.0, 0.0), width=0.1, polarization=(1, 1),
    ),
    "fig2": dict(
        flavor="2d", sizes=(256, 256), epsilon=0.02, steps=100, mass=1.0, lam=60.0,
        coupling=70.0, center=(0.0, 0.0), width=0.1, polarization=(0, 1),
    ),
    "fig3": dict(
        flavor="3d", sizes=(64, 64, 64), epsilon=0.04, steps=12, mass=0.0, lam=60.0,
        coupling=70.0, center=(0.0, 0.0, 0.0), width=0.1, polarization=(1, 1j, 1, 1j),
    ),
    "fig4": dict(
        flavor="3d", sizes=(64, 64, 64), epsilon=0.08, steps=20, mass=11.0, lam=90.0,
        coupling=4.0, center=(0.0, 0.0, 0.0), width=0.15, polarization=(0, 1, 0, 1),
    ),
}

PRESET_NOTES = {
    "fig1": "steps follow the physical-time reading t = j*eps with t = 10; at "
    "250 steps the free axis wraps the 128-site grid (recorded as a wrap "
    "warning). Pass --steps to pick the other reading.",
    "fig2": "localized run; pass --mass 0 for the free companion curve.",
    "fig3": "free 3D spread (mass 0).",
    "fig4": "3D confinement along z.",
}


@dataclass
class RunConfig:
    flavor: str
    sizes: tuple[int, ...]
    epsilon: float
    steps: int
    mass: float
    lam: float
    coupling: float
    center: tuple[float, ...]
    width: float
    polarization: tuple[complex, ...]
    cadence: int = 1
    snapshot_every: int = 0
    angle_mode: str = "physical"
    wrap_check: bool = True
    preset: str | None = None
    out_dir: str | None = None

    def validate(self) -> "RunConfig":
        try:
            self.wall_params()
            geometry = self.geometry()
            packet = self.packet()
        except ValueError as err:
            raise ConfigError(str(err)) from err
        if self.steps < 0:
            raise ConfigError("steps must be nonnegative")
        if self.cadence < 1:
            raise ConfigError("cadence must be at least 1")
        if self.snapshot_every < 0:
            raise ConfigError("snapshot_every must be nonnegative")
        if self.angle_mode not in ("physical", "index"):
            raise ConfigError("angle_mode must be 'physical' or 'index'")
        expected_dims = 2 if self.flavor == "2d" else 3
        if geometry.dims != expected_dims:
            raise ConfigError(f"{self.flavor} runs need {expected_dims} lattice sizes")
        if len(packet.polarization) != (2 if self.flavor == "2d" else 4):
            raise ConfigError("polarization length does not match the walk flavor")
        return self

    def geometry(self) -> LatticeGeometry:
        return LatticeGeometry(sizes=self.sizes, epsilon=self.epsilon)

    def wall_params(self) -> DomainWallParams:
        return DomainWallParams(mass=self.mass, lam=self.lam, coupling=self.coupling,
                                epsilon=self.epsilon)

    def packet(self) -> GaussianPacketSpec:
        return GaussianPacketSpec(center=self.center, width=self.width,
                                  polarization=self.polarization)

    def plan(self) -> StepPlan:
        return StepPlan(flavor=self.flavor, params=self.wall_params(), angle_mode=self.angle_mode)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["sizes"] = list(self.sizes)
        out["center"] = list(self.center)
        out["polarization"] = [[p.real, p.imag] for p in self.polarization]
        return out


_KEY_PARSERS = {
    "flavor": str,
    "sizes": lambda v: tuple(int(s) for s in v.split(",")),
    "epsilon": float,
    "steps": int,
    "mass": float,
    "lambda": float,
    "coupling": float,
    "center": lambda v: tuple(float(s) for s in v.split(",")),
    "width": float,
    "polarization": lambda v: tuple(complex(s.strip()) for s in v.split(",")),
    "cadence": int,
    "snapshot_every": int,
    "angle_mode": str,
    "wrap_check": lambda v: {"true": True, "false": False}[v.lower()],
    "preset": str,
    "out_dir": str,
}

_FIELD_NAME = {"lambda": "lam"}
REQUIRED_KEYS = ("flavor", "sizes", "epsilon", "steps", "mass", "lambda", "coupling",
                 "center", "width", "polarization")


def parse_config(source: str) -> RunConfig:
    """Parse and fully validate a config document; all defaults materialize."""
    entries: list[tuple[int, str, str]] = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in text.split("=", 1))
        if key not in _KEY_PARSERS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        entries.append((line_no, key, value))

    values: dict[str, object] = {}
    preset_entry = [(n, v) for n, k, v in entries if k == "preset"]
    if preset_entry:
        line_no, name = preset_entry[0]
        if name not in PRESETS:
            raise ConfigError(f"line {line_no}: unknown preset {name!r}")
        values.update(PRESETS[name])
        values["preset"] = name
    for line_no, key, value in entries:
        if key == "preset":
            continue
        try:
            parsed = _KEY_PARSERS[key](value)
        except (ValueError, KeyError) as err:
            raise ConfigError(f"line {line_no}: invalid value for {key!r}: {value!r}") from err
        values[_FIELD_NAME.get(key, key)] = parsed

    missing = [k for k in REQUIRED_KEYS if _FIELD_NAME.get(k, k) not in values]
    if missing:
        raise ConfigError(f"missing required key {missing[0]!r}")
    return RunConfig(**values).validate()


def preset_config(name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    return RunConfig(**PRESETS[name], preset=name).validate()


def write_series_csv(path: Path, series: ObservableSeries, dims: int) -> None:
    axes = AXIS_NAMES[:dims]
    header = ["j", "t", "norm"] + [f"mean_{a}" for a in axes] + [f"sigma_{a}" for a in axes]
    lines = [",".join(header)]
    for r in series.records:
        cells = [str(r.step)] + [
            format(v, ".17e") for v in (r.time, r.norm, *r.mean, *r.sigma)
        ]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_density_csv(path: Path, density: np.ndarray, geometry: LatticeGeometry,
                      step_index: int, time: float) -> None:
    header = (
        f"# density j={step_index} t={time!r} shape={','.join(map(str, geometry.sizes))}"
        f" epsilon={geometry.epsilon!r} origin={','.join(map(str, geometry.origin))}"
        " layout=row-major"
    )
    flat = density.reshape(-1, geometry.sizes[-1])
    with path.open("w") as handle:
        handle.write(header + "\n")
        np.savetxt(handle, flat, fmt="%.17e", delimiter=",")


def run_config(config: RunConfig, out_dir: Path) -> dict:
    """Execute one evolution run and write all output files."""
    out_dir.mkdir(parents=True, exist_ok=True)
    geometry = config.geometry()
    field = make_gaussian_packet(geometry, config.packet())
    result = evolve(
        field,
        config.plan(),
        config.steps,
        cadence=config.cadence,
        snapshot_every=config.snapshot_every,
        wrap_check=config.wrap_check,
    )
    write_series_csv(out_dir / "series.csv", result.series, geometry.dims)
    density_files = []
    for j in sorted(result.snapshots):
        name = f"density_j{j:04d}.csv"
        write_density_csv(out_dir / name, result.snapshots[j], geometry, j, j * config.epsilon)
        density_files.append(name)
    norms = result.series.column("norm") if len(result.series) \
        else np.array([total_norm(result.field)])
    meta = {
        "tool": "wallwalk",
        "version": __version__,
        "config": config.to_dict(),
        "conventions": {
            "width": "standard deviation of the probability density, physical units",
            "sigma": "population standard deviation, physical units, minimal-image near wrap",
            "angle_argument": config.angle_mode,
            "component_order": "(up, down)" if config.flavor == "2d"
            else "(block1 up, block1 down, block2 up, block2 down)",
        },
        "norm_drift": {
            "max_abs_deviation": float(np.max(np.abs(norms - 1.0))),
            "final_norm": float(norms[-1]),
        },
        "wrap_warning": result.wrap,
        "outputs": {"series": "series.csv", "densities": density_files},
    }
    (out_dir / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return meta


def _complex_matrix(m: np.ndarray) -> dict:
    return {"real": np.real(m).tolist(), "imag": np.imag(m).tolist()}


def _clifford_json(report: dict) -> dict:
    out = dict(report)
    out["matrices"] = {k: _complex_matrix(v) for k, v in report["matrices"].items()}
    return out


def _add_run_parser(sub) -> None:
    p = sub.add_parser("run", help="evolve a walk from a preset or config file")
    p.add_argument("--config", type=Path, help="path to a key = value config document")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="named setup; " + " ".join(f"[{k}] {v}" for k, v in PRESET_NOTES.items()))
    p.add_argument("--out-dir", type=Path, default=Path("wallwalk-run"))
    p.add_argument("--steps", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--mass", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--coupling", type=float)
    p.add_argument("--snapshot-every", type=int)
    p.add_argument("--angle-mode", choices=("physical", "index"))
    p.add_argument("--seedless", action="store_true",
                   help="reserved; the simulator uses no randomness anywhere")


def _resolve_run_config(args) -> RunConfig:
    if args.config and args.preset:
        raise ConfigError("pass either --config or --preset, not both")
    if args.config:
        config = parse_config(args.config.read_text())
    elif args.preset:
        config = preset_config(args.preset)
    else:
        raise ConfigError("one of --config or --preset is required")
    overrides = {}
    for attr in ("steps", "epsilon", "mass", "lam", "coupling", "angle_mode"):
        value = getattr(args, attr)
        if value is not None:
            overrides[attr] = value
    if args.snapshot_every is not None:
        overrides["snapshot_every"] = args.snapshot_every
    if overrides:
        config = replace(config, **overrides).validate()
    return config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wallwalk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)

    c = sub.add_parser("converge", help="walk vs continuum reference error ladder")
    c.add_argument("--epsilons", default="0.08,0.04,0.02,0.01")
    c.add_argument("--t-final", type=float, default=0.32)
    c.add_argument("--extent", type=float, default=1.28)
    c.add_argument("--mass", type=float, default=1.0)
    c.add_argument("--lambda", dest="lam", type=float, default=60.0)
    c.add_argument("--coupling", type=float, default=70.0)
    c.add_argument("--width", type=float, default=0.1)
    c.add_argument("--center", default="0,0")
    c.add_argument("--polarization", default="1,1")
    c.add_argument("--out", type=Path, help="write the error table as JSON")

    k = sub.add_parser("clifford", help="measure B matrices and verify Clifford relations")
    k.add_argument("--corrupt", action="store_true",
                   help="negative control: replace one rotation with the identity")
    k.add_argument("--out", type=Path, help="write the report as JSON")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            config = _resolve_run_config(args)
            out_dir = args.out_dir
            if out_dir == Path("wallwalk-run") and config.out_dir:
                out_dir = Path(config.out_dir)
            meta = run_config(config, out_dir)
            drift = meta["norm_drift"]["max_abs_deviation"]
            print(f"wrote {out_dir}/meta.json series.csv and "
                  f"{len(meta['outputs']['densities'])} density files (norm drift {drift:.2e})")
            if meta["wrap_warning"].get("triggered"):
                print(f"warning: boundary-shell mass exceeded threshold at step "
                      f"{meta['wrap_warning']['first_step']}", file=sys.stderr)
            return 0
        if args.command == "converge":
            epsilons = [float(v) for v in args.epsilons.split(",")]
            params = DomainWallParams(mass=args.mass, lam=args.lam, coupling=args.coupling,
                                      epsilon=epsilons[0])
            packet = GaussianPacketSpec(
                center=tuple(float(v) for v in args.center.split(",")),
                width=args.width,
                polarization=tuple(complex(v) for v in args.polarization.split(",")),
            )
            table = convergence_study(packet, params, epsilons, args.t_final, args.extent)
            table["params"] = {"mass": args.mass, "lambda": args.lam, "coupling": args.coupling,
                               "width": args.width}
            print(f"{'epsilon':>10} {'sites':>6} {'steps':>6} {'error':>14}")
            for row in table["rows"]:
                print(f"{row['epsilon']:>10g} {row['sites']:>6d} {row['steps']:>6d} "
                      f"{row['error']:>14.6e}")
            for o in table["orders"]:
                print(f"ratio {o['epsilon_coarse']:g}->{o['epsilon_fine']:g}: "
                      f"{o['error_ratio']:.3f} (order {o['order']:.2f})")
            if args.out:
                args.out.write_text(json.dumps(table, sort_keys=True, indent=2) + "\n")
            return 0
        if args.command == "clifford":
            params = DomainWallParams(mass=1.0, lam=60.0, coupling=70.0, epsilon=1.0)
            rotations = None
            if args.corrupt:
                rx, _, rz = rotation_set()
                rotations = (rx, np.eye(2, dtype=complex), rz)
            plan = StepPlan(flavor="3d", params=params, rotations=rotations)
            report = check_clifford(plan)
            print(f"zeroth-order condition: {'ok' if report['zeroth_order']['ok'] else 'FAILED'} "
                  f"(residual {report['zeroth_order']['residual']:.2e})")
            for name, residual in report["squares"].items():
                print(f"B_{name}^2 = I residual {residual:.2e}")
            for pair, residual in report["anticommutators"].items():
                print(f"anticommutator {pair} residual {residual:.2e}")
            print(f"coupling matrix exact: {report['b0_exact']}")
            print(f"chiral-set similarity: {report['weyl_map']}")
            print("PASS" if report["passed"] else "FAIL")
            if args.out:
                args.out.write_text(json.dumps(_clifford_json(report), sort_keys=True, indent=2) + "\n")
            return 0 if report["passed"] else 1
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
