"""Lyapunov feedback control and stationary-state verification.

The Lyapunov function is the target overlap V = Tr(rho rho_s).  Its time
derivative under the free dynamics,

    Vdot = Tr[(-i[H, rho] + N rho + L rho) rho_s],

is the evolution speed toward the target.  Adding control Hamiltonians
H_n with amplitudes chosen by the feedback law

    f_n = Tr[(-i[H_n, rho]) rho_s]

raises the speed by exactly sum_n f_n^2, so the controlled dynamics never
evolves slower than the free one and the fields switch themselves off as
the state converges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import OpenSystemModel, master_rhs
from .linalg import as_ket, as_operator

STATIONARITY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class SpeedReport:
    """Evolution speed with and without the feedback fields."""

    v: float
    vdot_free: float
    vdot_controlled: float
    control_contribution: float


@dataclass(frozen=True)
class StationarityReport:
    """Residual norms for the stationary-state conditions.

    The target must be annihilated by the Hamiltonian and by every
    Lindblad operator, must be reachable (some L_k^dag maps it to
    something nonzero), and every orthogonal partner in the reduced
    space must be driven by the Hamiltonian.
    """

    h_residual: float
    h_annihilates_target: bool
    lindblad_residuals: tuple
    lindblad_annihilates_target: bool
    reach_residuals: tuple
    target_reachable: bool
    complement_residuals: tuple
    complement_driven: bool
    threshold: float

    @property
    def passed(self) -> bool:
        return (
            self.h_annihilates_target
            and self.lindblad_annihilates_target
            and self.target_reachable
            and self.complement_driven
        )


def lyapunov_v(rho, rho_s) -> float:
    """Target overlap Tr(rho rho_s); real for Hermitian arguments."""
    rho = as_operator(rho, "state")
    rho_s = as_operator(rho_s, "target state")
    if rho.shape != rho_s.shape:
        raise ValueError("dimension mismatch between state and target")
    return float(np.einsum("ij,ji->", rho, rho_s).real)


def _control_tracks(model: OpenSystemModel, rho: np.ndarray) -> np.ndarray:
    """Tr[(-i[H_n, rho]) rho_s] for each control Hamiltonian.

    Uses Tr([H, rho] rho_s) = Tr(rho [rho_s, H]) to avoid forming the
    commutator with the state.
    """
    tracks = np.empty(len(model.controls))
    for n, h_n in enumerate(model.controls):
        g_n = -1j * (model.target @ h_n - h_n @ model.target)
        tracks[n] = np.einsum("ij,ji->", g_n, rho).real
    return tracks


def control_amplitudes(model: OpenSystemModel, rho) -> np.ndarray:
    """Feedback amplitudes gain * Tr[(-i[H_n, rho]) rho_s], saturated at
    the model's control cap when one is configured."""
    rho = as_operator(rho, "state")
    if rho.shape[0] != model.dim:
        raise ValueError("state dimension mismatch")
    f = model.control_gain * _control_tracks(model, rho)
    if model.control_cap is not None:
        np.clip(f, -model.control_cap, model.control_cap, out=f)
    return f


class LyapunovController:
    """Callable state-feedback law for :func:`qsteer.engine.propagate`.

    Precomputes the Hermitian track operators -i[rho_s, H_n] so each
    evaluation is a single trace per control.
    """

    def __init__(self, model: OpenSystemModel):
        target = model.target
        self._tracks = np.stack(
            [-1j * (target @ h_n - h_n @ target) for h_n in model.controls]
        ) if model.controls else np.zeros((0, model.dim, model.dim))
        self._gain = model.control_gain
        self._cap = model.control_cap

    def __call__(self, t: float, rho: np.ndarray) -> np.ndarray:
        f = self._gain * np.einsum("nij,ji->n", self._tracks, rho).real
        if self._cap is not None:
            np.clip(f, -self._cap, self._cap, out=f)
        return f


def evolution_speed(
    model: OpenSystemModel, t: float, rho, controls_on: bool
) -> SpeedReport:
    """Evolution speed of the free dynamics and with feedback applied.

    ``vdot_controlled - vdot_free`` equals ``sum_n f_n^2`` exactly when
    the gain is 1 and no cap is active.
    """
    rho = as_operator(rho, "state")
    if rho.shape[0] != model.dim:
        raise ValueError("state dimension mismatch")
    zeros = np.zeros(len(model.controls))
    deriv_free = master_rhs(model, t, rho, zeros)
    vdot_free = float(np.einsum("ij,ji->", deriv_free, model.target).real)
    contribution = 0.0
    if controls_on and model.controls:
        tracks = _control_tracks(model, rho)
        f = control_amplitudes(model, rho)
        contribution = float(np.dot(f, tracks))
    return SpeedReport(
        v=lyapunov_v(rho, model.target),
        vdot_free=vdot_free,
        vdot_controlled=vdot_free + contribution,
        control_contribution=contribution,
    )


def effective_rates(lindblad_ops, target_ket, tol: float = 1e-10) -> list:
    """Decompose jump operators of the form sqrt(rate) |target><excited|.

    Returns ``[(rate, excited_ket), ...]``; rejects any operator that is
    not such a dyad onto the target within ``tol``.
    """
    s = as_ket(target_ket, "target ket", normalized=True)
    out = []
    for op in lindblad_ops:
        op = as_operator(op, "Lindblad operator")
        if op.shape[0] != s.size:
            raise ValueError("Lindblad operator dimension mismatch")
        w = op.conj().T @ s
        rate = float(np.vdot(w, w).real)
        rebuilt = np.outer(s, w.conj())
        scale = max(1.0, float(np.linalg.norm(op)))
        if np.linalg.norm(op - rebuilt) > tol * scale:
            raise ValueError(
                "operator is not of the form sqrt(rate)|target><excited|"
            )
        excited = w / np.sqrt(rate) if rate > 0 else w
        out.append((rate, excited))
    return out


def effective_speed(lindblad_ops, rho, target_ket) -> float:
    """Evolution speed in the effective form sum_k rate_k <E_k|rho|E_k>.

    Valid only when every jump operator is a dyad onto the target and the
    Hamiltonian annihilates it; used as a cross-check of the trace form.
    """
    rho = as_operator(rho, "state")
    total = 0.0
    for rate, excited in effective_rates(lindblad_ops, target_ket):
        total += rate * float(np.vdot(excited, rho @ excited).real)
    return total


def verify_stationarity(
    model: OpenSystemModel,
    target_ket,
    complement_basis,
    t: float = 0.0,
    threshold: float = STATIONARITY_THRESHOLD,
) -> StationarityReport:
    """Check the stationary-state conditions on a reduced space.

    ``target_ket`` and ``complement_basis`` must together form an
    orthonormal set; the Hamiltonian is evaluated at time ``t``.
    Annihilation conditions pass when the residual norm is at most
    ``threshold``; non-annihilation conditions require it to exceed
    ``threshold``.
    """
    s = as_ket(target_ket, "target ket", normalized=True)
    complement = [as_ket(m, "complement ket") for m in complement_basis]
    basis = np.column_stack([s] + complement)
    gram = basis.conj().T @ basis
    if np.abs(gram - np.eye(gram.shape[0])).max() > 1e-8:
        raise ValueError("target and complement basis are not orthonormal")

    h = model.hamiltonian.evaluate(t)
    h_residual = float(np.linalg.norm(h @ s))
    lindblad_residuals = tuple(
        float(np.linalg.norm(op @ s)) for op in model.lindblad_ops
    )
    reach_residuals = tuple(
        float(np.linalg.norm(op.conj().T @ s)) for op in model.lindblad_ops
    )
    complement_residuals = tuple(
        float(np.linalg.norm(h @ m)) for m in complement
    )
    return StationarityReport(
        h_residual=h_residual,
        h_annihilates_target=h_residual <= threshold,
        lindblad_residuals=lindblad_residuals,
        lindblad_annihilates_target=all(
            r <= threshold for r in lindblad_residuals
        ),
        reach_residuals=reach_residuals,
        target_reachable=any(r > threshold for r in reach_residuals),
        complement_residuals=complement_residuals,
        complement_driven=all(r > threshold for r in complement_residuals),
        threshold=threshold,
    )
