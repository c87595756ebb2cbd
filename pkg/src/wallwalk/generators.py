"""Generator extraction from dense step operators, and Clifford checks.

With a uniform wall angle the step operator preserves every lattice momentum
sector, so its action reduces to a small spin-space block per mode. Two
tools build on this:

* ``extract_generator`` fits U(eps) = I + eps G + O(eps^2) over a ladder of
  matched physical lattices (same box, finer spacing) by polynomial
  extrapolation of the per-mode blocks to eps -> 0.
* ``measure_shift_matrix`` / ``measure_coupling_derivative`` read the
  first-order coefficients exactly: each axis shift enters the step once, so
  a momentum block is a trig polynomial with unit frequency in that axis
  angle, and its derivative at zero equals a symmetric difference at a
  quarter period. No extrapolation error is involved.

``check_clifford`` verifies that the measured coefficient matrices of the 3D
walk form a Dirac operator: squares equal to the identity, pairwise
anticommutation, anticommutation with the coupling matrix, and unitary
equivalence with the chiral-representation set {g0 g1, g0 g2, g0 g3, g0}.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .coins import B0_COUPLING, coupling_coin_4d, weyl_gammas
from .engine import DenseOperator, StepPlan, dense_step_matrix
from .lattice import LatticeGeometry
from .shifts import Axis

CLIFFORD_TOL = 1e-10


def _require_uniform(plan: StepPlan) -> None:
    if plan.uniform_angle is None and plan.params.mass != 0:
        raise ValueError("momentum-sector analysis needs a uniform wall angle (or mass 0)")


def plane_wave(geometry: LatticeGeometry, mode: tuple[int, ...]) -> np.ndarray:
    """Normalized plane wave over flattened sites; ``mode`` holds signed integers."""
    wave = np.ones(geometry.sizes, dtype=np.complex128)
    for ax, n in enumerate(mode):
        idx = np.arange(geometry.sizes[ax])
        shape = [1] * geometry.dims
        shape[ax] = geometry.sizes[ax]
        wave = wave * np.exp(2j * np.pi * n * idx / geometry.sizes[ax]).reshape(shape)
    return wave.ravel() / np.sqrt(geometry.num_sites)


def spin_block(dense: DenseOperator, mode: tuple[int, ...]) -> tuple[np.ndarray, float]:
    """Spin-space block of a dense step on one momentum sector.

    Returns the block and the leakage residual out of the sector (zero up to
    rounding for translation-invariant plans).
    """
    pw = plane_wave(dense.geometry, mode)
    d = dense.spin_dim
    block = np.empty((d, d), dtype=np.complex128)
    leak = 0.0
    for s in range(d):
        vec = np.zeros(dense.matrix.shape[0], dtype=np.complex128)
        vec[s::d] = pw
        image = dense.matrix @ vec
        image_by_site = image.reshape(-1, d)
        block[:, s] = pw.conj() @ image_by_site
        projected = np.outer(pw, block[:, s]).ravel()
        leak = max(leak, float(np.linalg.norm(image - projected)))
    return block, leak


@dataclass
class GeneratorEstimate:
    """Extrapolated one-step generator on the base lattice, band-limited.

    Only momentum modes with index magnitude up to ``max_mode`` are
    resolvable from the ladder (higher modes oscillate faster than the
    coarsest sample spacing), so the estimate is restricted to that band.
    ``matrix`` approximates (U(eps) - I)/eps in the eps -> 0 limit at fixed
    physical box on the retained subspace; ``residual`` is the size of the
    last extrapolation correction; ``refine_residuals`` gives the distance
    of each single-eps estimate from the extrapolant (should shrink with
    eps); ``mode_blocks`` holds the extrapolated per-momentum spin blocks
    and ``raw_blocks`` the single-eps ones, per ladder rung.
    """

    matrix: np.ndarray
    residual: float
    epsilons: tuple[float, ...]
    hermitian_norm: float
    refine_residuals: list[float]
    failed: bool
    max_mode: int
    mode_blocks: dict[tuple[int, ...], np.ndarray]
    raw_blocks: list[dict[tuple[int, ...], np.ndarray]]


def _neville_to_zero(nodes, values):
    """Polynomial extrapolation of matrix samples to 0; returns (limit, last correction)."""
    p = [np.asarray(v, dtype=np.complex128) for v in values]
    x = list(nodes)
    if len(p) == 1:
        return p[0], float("inf")
    previous_best = p[-1]
    for m in range(1, len(p)):
        previous_best = p[-1]
        for i in range(len(p) - 1, m - 1, -1):
            p[i] = (x[i - m] * p[i] - x[i] * p[i - 1]) / (x[i - m] - x[i])
    correction = float(np.linalg.norm(p[-1] - previous_best, ord=2))
    return p[-1], correction


def _signed_modes(size: int) -> list[int]:
    return list(range(-(size // 2), (size + 1) // 2))


def extract_generator(
    plan: StepPlan,
    geometry: LatticeGeometry,
    epsilons,
    max_mode: int | None = None,
    modes=None,
) -> GeneratorEstimate:
    """Fit the generator over matched lattices at each epsilon in the list.

    ``geometry`` fixes the physical box; every epsilon must tile it with an
    integer number of sites, and the refined dense operators must respect
    the size guard. The wall angle must be uniform. ``max_mode`` bounds the
    retained momentum band (default: a quarter of the smallest axis);
    ``modes`` overrides the band with an explicit list of mode tuples.
    """
    _require_uniform(plan)
    epsilons = tuple(float(e) for e in epsilons)
    if len(epsilons) < 2 or len(set(epsilons)) != len(epsilons):
        raise ValueError("need at least two distinct epsilons")
    if max_mode is None:
        max_mode = max(1, min(geometry.sizes) // 4)
    extents = tuple(n * geometry.epsilon for n in geometry.sizes)
    if modes is not None:
        base_modes = [tuple(int(v) for v in m) for m in modes]
    else:
        base_modes = [
            tuple(m)
            for m in np.stack(
                np.meshgrid(*[_signed_modes(n) for n in geometry.sizes], indexing="ij"), axis=-1
            ).reshape(-1, geometry.dims)
            if max(abs(int(v)) for v in m) <= max_mode
        ]

    per_eps_blocks: list[dict[tuple[int, ...], np.ndarray]] = []
    for eps in epsilons:
        sizes = []
        for ext in extents:
            n = ext / eps
            if abs(n - round(n)) > 1e-9 or round(n) < 2:
                raise ValueError(f"epsilon {eps} does not tile the physical box {extents}")
            sizes.append(int(round(n)))
        grid = LatticeGeometry(sizes=tuple(sizes), epsilon=eps)
        dense = dense_step_matrix(replace(plan, params=plan.params.with_epsilon(eps)), grid)
        ident = np.eye(plan.spin_dim)
        blocks = {}
        for mode in base_modes:
            block, _ = spin_block(dense, mode)
            blocks[mode] = (block - ident) / eps
        per_eps_blocks.append(blocks)

    mode_limits: dict[tuple[int, ...], np.ndarray] = {}
    residual = 0.0
    for mode in base_modes:
        series = [blocks[mode] for blocks in per_eps_blocks]
        limit, corr = _neville_to_zero(epsilons, series)
        mode_limits[mode] = limit
        residual = max(residual, corr)

    refine = [
        max(
            float(np.linalg.norm(per_eps_blocks[j][mode] - mode_limits[mode], ord=2))
            for mode in base_modes
        )
        for j in range(len(epsilons))
    ]
    failed = any(b > a + 1e-14 for a, b in zip(refine, refine[1:]))

    d = plan.spin_dim
    matrix = np.zeros((geometry.num_sites * d,) * 2, dtype=np.complex128)
    for mode, block in mode_limits.items():
        pw = plane_wave(geometry, mode)
        matrix += np.kron(np.outer(pw, pw.conj()), block)
    hermitian_norm = float(np.linalg.norm((matrix + matrix.conj().T) / 2, ord=2))
    return GeneratorEstimate(
        matrix=matrix,
        residual=residual,
        epsilons=epsilons,
        hermitian_norm=hermitian_norm,
        refine_residuals=refine,
        failed=failed,
        max_mode=max_mode,
        mode_blocks=mode_limits,
        raw_blocks=per_eps_blocks,
    )


def _tiny_grid(plan: StepPlan, axis: int | None) -> LatticeGeometry:
    sizes = [2] * plan.dims
    if axis is not None:
        sizes[axis] = 4
    return LatticeGeometry(sizes=tuple(sizes), epsilon=plan.params.epsilon)


def measure_shift_matrix(plan: StepPlan, axis: Axis) -> np.ndarray:
    """Exact first-order coefficient of the momentum along ``axis``.

    Works on a massless copy of the plan: the block at quarter-period modes
    gives the k-derivative at k = 0 with no extrapolation, because the block
    is A e^{ik} + B e^{-ik} exactly.
    """
    massless = replace(plan, params=plan.params.with_epsilon(1.0), uniform_angle=0.0)
    grid = _tiny_grid(massless, int(axis))
    dense = dense_step_matrix(massless, grid)
    plus = [0] * massless.dims
    minus = [0] * massless.dims
    plus[int(axis)], minus[int(axis)] = 1, -1
    up, _ = spin_block(dense, tuple(plus))
    down, _ = spin_block(dense, tuple(minus))
    return (up - down) / 2j


def measure_coupling_derivative(plan: StepPlan) -> np.ndarray:
    """Exact derivative of the zero-momentum block in the scaled wall angle.

    The wall angle enters once per step in 3D (unit frequency) and through
    both coins in 2D (frequency two), so the sampling points differ.
    """
    s = np.pi / 2 if plan.flavor == "3d" else np.pi / 4
    blocks = []
    for sign in (+1, -1):
        probed = replace(plan, params=plan.params.with_epsilon(1.0), uniform_angle=sign * s)
        dense = dense_step_matrix(probed, _tiny_grid(probed, None))
        block, _ = spin_block(dense, (0,) * probed.dims)
        blocks.append(block)
    if plan.flavor == "3d":
        return (blocks[0] - blocks[1]) / 2
    return blocks[0] - blocks[1]


def coupling_matrix_exact() -> np.ndarray:
    """Coupling matrix read from the block-coupling coin alone (bitwise exact)."""
    plus = coupling_coin_4d(np.pi / 2, 1.0)
    minus = coupling_coin_4d(-np.pi / 2, 1.0)
    return (plus - minus) / 2j


def _max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m)))


def _weyl_targets() -> list[np.ndarray]:
    g = weyl_gammas()
    return [g["g0"] @ g["g1"], g["g0"] @ g["g2"], g["g0"] @ g["g3"], g["g0"]]


def _similarity_to_weyl(measured: list[np.ndarray]) -> dict:
    """Search for a unitary V with V B_i V^dag = T_i for the whole set."""
    targets = _weyl_targets()
    ident = np.eye(4)
    stacked = np.vstack(
        [np.kron(ident, t) - np.kron(b.T, ident) for b, t in zip(measured, targets)]
    )
    _, svals, vh = np.linalg.svd(stacked)
    null_res = float(svals[-1])
    candidate = vh[-1].conj().reshape(4, 4, order="F")
    candidate *= 2.0 / np.linalg.norm(candidate)  # unitary 4x4 has Frobenius norm 2
    unitary_res = _max_abs(candidate.conj().T @ candidate - ident)
    map_res = max(
        _max_abs(candidate @ b @ candidate.conj().T - t) for b, t in zip(measured, targets)
    )
    exists = null_res < 1e-8 and unitary_res < 1e-8 and map_res < 1e-8
    return {
        "exists": bool(exists),
        "nullspace_residual": null_res,
        "unitarity_residual": unitary_res,
        "map_residual": map_res,
    }


def check_clifford(plan: StepPlan) -> dict:
    """Measure the 3D walk's coefficient matrices and verify Dirac structure.

    The report carries every residual; ``passed`` requires the zeroth-order
    condition, all Clifford relations within ``CLIFFORD_TOL``, the exact
    coupling matrix, and a unitary map onto the chiral-representation set.
    """
    if plan.flavor != "3d":
        raise ValueError("Clifford check applies to the 3D walk")
    frozen = replace(plan, params=plan.params.with_epsilon(1.0), uniform_angle=0.0)
    dense0 = dense_step_matrix(frozen, _tiny_grid(frozen, None))
    zero_block, sector_leak = spin_block(dense0, (0,) * frozen.dims)
    zeroth_residual = _max_abs(zero_block - np.eye(4))
    zeroth_ok = zeroth_residual < 1e-12

    names = ["x", "y", "z"]
    b = {n: measure_shift_matrix(plan, Axis[n.upper()]) for n in names}
    b["0"] = measure_coupling_derivative(plan) / 1j

    ident = np.eye(4)
    squares = {n: _max_abs(b[n] @ b[n] - ident) for n in names}
    pairs = [("x", "y"), ("x", "z"), ("y", "z"), ("x", "0"), ("y", "0"), ("z", "0")]
    anticommutators = {
        f"{p}{q}": _max_abs(b[p] @ b[q] + b[q] @ b[p]) for p, q in pairs
    }
    b0_exact = bool(np.array_equal(coupling_matrix_exact(), B0_COUPLING))
    b0_step_residual = _max_abs(b["0"] - B0_COUPLING)
    weyl = _similarity_to_weyl([b["x"], b["y"], b["z"], b["0"]])

    violations = [
        {"relation": f"square_{n}", "residual": r} for n, r in squares.items() if r > CLIFFORD_TOL
    ] + [
        {"relation": f"anticommutator_{k}", "residual": r}
        for k, r in anticommutators.items()
        if r > CLIFFORD_TOL
    ]
    passed = zeroth_ok and not violations and b0_exact and weyl["exists"]
    return {
        "zeroth_order": {"residual": zeroth_residual, "ok": bool(zeroth_ok)},
        "sector_leak": sector_leak,
        "matrices": {k: v for k, v in b.items()},
        "squares": squares,
        "anticommutators": anticommutators,
        "violations": violations,
        "b0_exact": b0_exact,
        "b0_step_residual": b0_step_residual,
        "weyl_map": weyl,
        "tolerance": CLIFFORD_TOL,
        "passed": bool(passed),
    }
