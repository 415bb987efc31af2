"""Dissipative quantum state generation with Lyapunov feedback acceleration.

A small simulator for Lindblad master equations whose stationary state is
a designed target: assemble a model (or pick one from the catalog), attach
the feedback control law, propagate, and analyze convergence speed and
noise robustness.
"""

from .control import (
    LyapunovController,
    SpeedReport,
    StationarityReport,
    control_amplitudes,
    effective_rates,
    effective_speed,
    evolution_speed,
    lyapunov_v,
    verify_stationarity,
)
from .engine import (
    HamiltonianSpec,
    NoiseChannel,
    OpenSystemModel,
    PropagationError,
    TrajectoryRecord,
    dissipator,
    master_rhs,
    noise_superoperator,
    propagate,
    validate_density_matrix,
)
from .linalg import (
    basis_ket,
    commutator,
    dagger,
    dyad,
    frobenius_distance,
    hermitian_eigen,
    kron,
    projector,
    trace,
)
from .models import (
    LambdaParams,
    TwoAtomParams,
    ZenoReduction,
    build_lambda_effective,
    build_lambda_full,
    build_two_atom_effective,
    build_two_atom_full,
    cooperativity,
    lambda_rotation,
    two_atom_basis,
    zeno_reduce,
)

__version__ = "0.1.0"
