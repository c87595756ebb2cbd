"""Discrete-time quantum walks with a domain-wall coin.

Simulates 2D (2-component) and 3D (4-component) split-step walks whose coin
angle follows a tanh wall profile along one axis, producing dynamical
confinement there while the walker spreads freely along the others. Includes
continuum-limit validation tools and a CLI for reproducible runs.
"""

__version__ = "0.1.0"

from .coins import DomainWallParams, coin_2d, coupling_coin_4d, domain_wall_angle, rotation_set
from .continuum import convergence_study, dirac_evolve_2d
from .engine import DenseOperator, StepPlan, dense_step_matrix, evolve, step
from .generators import check_clifford, extract_generator
from .lattice import (
    GaussianPacketSpec,
    LatticeGeometry,
    SpinorField,
    make_gaussian_packet,
    probability_density,
    total_norm,
)
from .observables import axis_marginal, slab_mass, std_dev_per_axis
from .shifts import Axis, shift_2d, shift_3d_block

__all__ = [
    "Axis",
    "DenseOperator",
    "DomainWallParams",
    "GaussianPacketSpec",
    "LatticeGeometry",
    "SpinorField",
    "StepPlan",
    "axis_marginal",
    "check_clifford",
    "coin_2d",
    "convergence_study",
    "coupling_coin_4d",
    "dense_step_matrix",
    "dirac_evolve_2d",
    "domain_wall_angle",
    "evolve",
    "extract_generator",
    "make_gaussian_packet",
    "probability_density",
    "rotation_set",
    "shift_2d",
    "shift_3d_block",
    "slab_mass",
    "std_dev_per_axis",
    "step",
    "total_norm",
]
