"""Benchmark open-system models: driven three-level atom and two atoms
in a lossy cavity.

Both systems funnel population into a designated pure state: the
three-level atom into a ground-state superposition selected by the drive
mixing angle, and the cavity system into the singlet-like combination of
the two single-excitation ground configurations.  Each comes in a full
and a reduced (effective) picture; the three-level pair is an exact basis
rotation while the two-atom pair relies on the strong-coupling (Zeno)
limit confining the dynamics to the dark subspace of the atom-cavity
coupling.

All rates and Rabi frequencies are in units of the reference Rabi
frequency; times are in its inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import HamiltonianSpec, NoiseChannel, OpenSystemModel
from .linalg import as_operator, basis_ket, dyad, hermitian_eigen, is_hermitian

# Mixing angle matching drive amplitudes (0.8, 0.6); also the default
# target angle, so the stationary-state conditions hold out of the box.
DEFAULT_MIXING_ANGLE = math.atan2(0.8, 0.6)


@dataclass
class LambdaParams:
    """Three-level atom parameters.

    ``phi`` defaults to ``theta`` (decoupled target) and ``gamma2`` to
    ``gamma1`` (equal branching), matching the regimes in which the
    effective rotated picture is exact.
    """

    omega0: float = 1.0
    theta: float = DEFAULT_MIXING_ANGLE
    phi: float | None = None
    gamma1: float = 1.0
    gamma2: float | None = None
    mu1: float = 0.8
    mu2: float = 0.6
    eta: float = 0.0
    control_gain: float = 1.0
    control_cap: float | None = None

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("omega0 must be > 0")
        if self.gamma1 < 0 or (self.gamma2 is not None and self.gamma2 < 0):
            raise ValueError("decay rates must be >= 0")
        if self.eta < 0:
            raise ValueError("noise intensity must be >= 0")

    @property
    def phi_value(self) -> float:
        return self.theta if self.phi is None else self.phi

    @property
    def gamma2_value(self) -> float:
        return self.gamma1 if self.gamma2 is None else self.gamma2


@dataclass
class TwoAtomParams:
    """Two atoms in a lossy cavity.

    The two pump lasers differ by a relative phase of pi, so their
    amplitudes are +/- omega0 / sqrt(2).  ``gamma2`` defaults to
    ``gamma1 / 2``; ``n_max`` is the cavity photon truncation.
    """

    omega0: float = 1.0
    omega_mw: float = 0.2
    delta: float = 0.15
    lambda_c: float = 10.0
    kappa: float = 0.5
    gamma1: float = 1.0
    gamma2: float | None = None
    mu1: float = 1.0
    mu2: float = 1.5
    n_max: int = 1
    control_gain: float = 1.0
    control_cap: float | None = None

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("omega0 must be > 0")
        if self.lambda_c <= 0:
            raise ValueError("cavity coupling must be > 0")
        if self.kappa < 0:
            raise ValueError("cavity decay must be >= 0")
        if self.gamma1 < 0 or (self.gamma2 is not None and self.gamma2 < 0):
            raise ValueError("decay rates must be >= 0")
        self.n_max = int(self.n_max)
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def gamma2_value(self) -> float:
        return 0.5 * self.gamma1 if self.gamma2 is None else self.gamma2


# --------------------------------------------------------------------------
# Three-level atom, basis (|e>, |g1>, |g2>)
# --------------------------------------------------------------------------

_E, _G1, _G2 = 0, 1, 2


def lambda_target_kets(phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal pair (|S>, |T>) in the (e, g1, g2) basis."""
    s = math.cos(phi) * basis_ket(3, _G1) - math.sin(phi) * basis_ket(3, _G2)
    t = math.sin(phi) * basis_ket(3, _G1) + math.cos(phi) * basis_ket(3, _G2)
    return s, t


def lambda_rotation(phi: float) -> np.ndarray:
    """Basis change from (e, g1, g2) to (e, S, T) coordinates."""
    s, t = lambda_target_kets(phi)
    return np.vstack([basis_ket(3, _E), s.conj(), t.conj()])


def build_lambda_full(p: LambdaParams) -> OpenSystemModel:
    """Three-level atom in the bare basis (|e>, |g1>, |g2>).

    Two resonant drives with amplitudes omega0 sin(theta), omega0
    cos(theta), spontaneous decay into both ground states, independent
    amplitude-noise channels on both drives, and one control Hamiltonian
    per transition.
    """
    phi = p.phi_value
    gamma2 = p.gamma2_value
    e = basis_ket(3, _E)
    g1 = basis_ket(3, _G1)
    g2 = basis_ket(3, _G2)
    omega1 = p.omega0 * math.sin(p.theta)
    omega2 = p.omega0 * math.cos(p.theta)

    drive = omega1 * dyad(e, g1) + omega2 * dyad(e, g2)
    h0 = drive + drive.conj().T
    lindblads = (
        math.sqrt(p.gamma1 / 2.0) * dyad(g1, e),
        math.sqrt(gamma2 / 2.0) * dyad(g2, e),
    )
    controls = (
        p.mu1 * (dyad(e, g1) + dyad(g1, e)),
        p.mu2 * (dyad(e, g2) + dyad(g2, e)),
    )
    noise = (
        NoiseChannel(omega1 * (dyad(e, g1) + dyad(g1, e)), p.eta),
        NoiseChannel(omega2 * (dyad(e, g2) + dyad(g2, e)), p.eta),
    )
    s, t = lambda_target_kets(phi)
    target = dyad(s, s)
    return OpenSystemModel(
        hamiltonian=HamiltonianSpec(dim=3, static_terms=(h0,)),
        target=target,
        lindblad_ops=lindblads,
        noise=noise,
        controls=controls,
        control_gain=p.control_gain,
        control_cap=p.control_cap,
        populations={"S": dyad(s, s), "T": dyad(t, t), "e": dyad(e, e)},
        named_states={
            "e": e,
            "g1": g1,
            "g2": g2,
            "S": s,
            "T": t,
            "ground_mixture": 0.5 * (dyad(g1, g1) + dyad(g2, g2)),
        },
        reduced_space=("S", "T", "e"),
    )


def build_lambda_effective(p: LambdaParams) -> OpenSystemModel:
    """Three-level atom in the rotated basis (|e>, |S>, |T>).

    The drive becomes omega0 sin(theta - phi) on the S leg and
    omega0 cos(theta - phi) on the T leg; for equal decay rates the two
    decay channels rotate into one channel feeding S and one feeding T.
    Exactly equivalent to :func:`build_lambda_full` under the basis
    rotation, so it requires gamma1 == gamma2.
    """
    phi = p.phi_value
    if abs(p.gamma1 - p.gamma2_value) > 1e-12:
        raise ValueError(
            "effective picture requires gamma1 == gamma2 "
            "(rotated decay channels are only equivalent for equal rates)"
        )
    gamma = p.gamma1
    e = basis_ket(3, 0)
    s = basis_ket(3, 1)
    t = basis_ket(3, 2)
    omega_s = p.omega0 * math.sin(p.theta - phi)
    omega_t = p.omega0 * math.cos(p.theta - phi)

    drive = omega_s * dyad(e, s) + omega_t * dyad(e, t)
    h0 = drive + drive.conj().T
    lindblads = (
        math.sqrt(gamma / 2.0) * dyad(s, e),
        math.sqrt(gamma / 2.0) * dyad(t, e),
    )
    rot = lambda_rotation(phi)
    full = build_lambda_full(p)
    controls = tuple(rot @ h_n @ rot.conj().T for h_n in full.controls)
    noise = tuple(
        NoiseChannel(rot @ ch.h_s @ rot.conj().T, ch.eta) for ch in full.noise
    )
    return OpenSystemModel(
        hamiltonian=HamiltonianSpec(dim=3, static_terms=(h0,)),
        target=dyad(s, s),
        lindblad_ops=lindblads,
        noise=noise,
        controls=controls,
        control_gain=p.control_gain,
        control_cap=p.control_cap,
        populations={"S": dyad(s, s), "T": dyad(t, t), "e": dyad(e, e)},
        named_states={
            "e": e,
            "S": s,
            "T": t,
            "g1": rot @ full.named_states["g1"],
            "g2": rot @ full.named_states["g2"],
            "ground_mixture": 0.5 * (dyad(s, s) + dyad(t, t)),
        },
        reduced_space=("S", "T", "e"),
    )


# --------------------------------------------------------------------------
# Two atoms + cavity, basis atom_A (x) atom_B (x) cavity
# --------------------------------------------------------------------------


def _annihilation(n_levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), 1).astype(
        np.complex128
    )


def _embed3(op_a, op_b, op_c) -> np.ndarray:
    return np.kron(np.kron(op_a, op_b), op_c)


def two_atom_basis(p: TwoAtomParams) -> dict:
    """Named kets of the full two-atom + cavity space.

    psi1..psi4 are the four two-atom ground configurations with the
    cavity empty; D is the antisymmetric single-excitation state; S and T
    are the odd and even combinations of psi1 and psi2.
    """
    n_levels = p.n_max + 1
    e = basis_ket(3, _E)
    g1 = basis_ket(3, _G1)
    g2 = basis_ket(3, _G2)
    vac = basis_ket(n_levels, 0)

    def ket3(a, b, c):
        return np.kron(np.kron(a, b), c)

    psi1 = ket3(g1, g2, vac)
    psi2 = ket3(g2, g1, vac)
    psi3 = ket3(g2, g2, vac)
    psi4 = ket3(g1, g1, vac)
    dark = (ket3(e, g2, vac) - ket3(g2, e, vac)) / math.sqrt(2.0)
    s = (psi1 - psi2) / math.sqrt(2.0)
    t = (psi1 + psi2) / math.sqrt(2.0)
    return {
        "psi1": psi1, "psi2": psi2, "psi3": psi3, "psi4": psi4,
        "D": dark, "S": s, "T": t,
    }


def _two_atom_operators(p: TwoAtomParams) -> dict:
    n_levels = p.n_max + 1
    eye3 = np.eye(3, dtype=np.complex128)
    eye_c = np.eye(n_levels, dtype=np.complex128)
    a_op = _annihilation(n_levels)
    e = basis_ket(3, _E)
    g1 = basis_ket(3, _G1)
    g2 = basis_ket(3, _G2)

    raise_a = _embed3(dyad(e, g1), eye3, eye_c)
    raise_b = _embed3(eye3, dyad(e, g1), eye_c)
    omega_a = p.omega0 / math.sqrt(2.0)
    omega_b = -p.omega0 / math.sqrt(2.0)
    laser = omega_a * raise_a + omega_b * raise_b
    laser = laser + laser.conj().T

    coupling = _embed3(dyad(e, g2), eye3, a_op) + _embed3(eye3, dyad(e, g2), a_op)
    cavity = p.lambda_c * (coupling + coupling.conj().T)

    mw_amp = p.omega_mw * (
        _embed3(dyad(g2, g1), eye3, eye_c) + _embed3(eye3, dyad(g2, g1), eye_c)
    )
    lindblads = (
        math.sqrt(p.gamma1 / 2.0) * _embed3(dyad(g1, e), eye3, eye_c),
        math.sqrt(p.gamma2_value / 2.0) * _embed3(dyad(g2, e), eye3, eye_c),
        math.sqrt(p.gamma1 / 2.0) * _embed3(eye3, dyad(g1, e), eye_c),
        math.sqrt(p.gamma2_value / 2.0) * _embed3(eye3, dyad(g2, e), eye_c),
        math.sqrt(p.kappa) * _embed3(eye3, eye3, a_op),
    )
    controls = (
        p.mu1 * (raise_a + raise_a.conj().T),
        p.mu2 * (raise_b + raise_b.conj().T),
    )
    return {
        "laser": laser,
        "cavity": cavity,
        "coupling_direction": coupling + coupling.conj().T,
        "mw_amp": mw_amp,
        "lindblads": lindblads,
        "controls": controls,
    }


def build_two_atom_full(p: TwoAtomParams) -> OpenSystemModel:
    """Two driven atoms coupled to a common lossy cavity mode.

    Static terms: pump lasers (relative phase pi) plus the atom-cavity
    exchange; the microwave ground-state drive rotates at the detuning
    and is folded into the static part when the detuning is zero.  Five
    decay channels: two per atom plus the cavity.
    """
    ops = _two_atom_operators(p)
    kets = two_atom_basis(p)
    dim = 9 * (p.n_max + 1)

    static = [ops["laser"] + ops["cavity"]]
    rotating = []
    if p.omega_mw != 0.0:
        if p.delta == 0.0:
            static.append(ops["mw_amp"] + ops["mw_amp"].conj().T)
        else:
            rotating.append((ops["mw_amp"], p.delta))

    populations = {
        label: dyad(kets[label], kets[label])
        for label in ("S", "T", "psi1", "psi2", "psi3", "psi4", "D")
    }
    return OpenSystemModel(
        hamiltonian=HamiltonianSpec(
            dim=dim, static_terms=tuple(static), rotating_terms=tuple(rotating)
        ),
        target=dyad(kets["S"], kets["S"]),
        lindblad_ops=ops["lindblads"],
        controls=ops["controls"],
        control_gain=p.control_gain,
        control_cap=p.control_cap,
        populations=populations,
        named_states=dict(kets),
        reduced_space=("S", "T", "psi3", "psi4", "D"),
    )


def build_two_atom_effective(p: TwoAtomParams) -> OpenSystemModel:
    """Zeno-limit reduction of the two-atom system to the dark subspace.

    Basis order (|S>, |T>, |psi3>, |psi4>, |D>).  The laser couples T to
    D with amplitude omega0 / sqrt(2); the microwave couples T to psi3
    and psi4 with amplitude sqrt(2) omega_mw rotating at +/- detuning.
    Decay proceeds from D into psi3 (rate gamma2/2) and into S and T
    (rate gamma1/4 each); the cavity is decoupled, so its decay drops out.
    """
    s, t, psi3, psi4, dark = (basis_ket(5, i) for i in range(5))
    static = (p.omega0 / math.sqrt(2.0)) * dyad(dark, t)
    static = static + static.conj().T

    static_terms = [static]
    rotating = []
    if p.omega_mw != 0.0:
        amp3 = math.sqrt(2.0) * p.omega_mw * dyad(psi3, t)
        amp4 = math.sqrt(2.0) * p.omega_mw * dyad(psi4, t)
        if p.delta == 0.0:
            static_terms.append(amp3 + amp3.conj().T + amp4 + amp4.conj().T)
        else:
            rotating.append((amp3, p.delta))
            rotating.append((amp4, -p.delta))

    lindblads = (
        math.sqrt(p.gamma2_value / 2.0) * dyad(psi3, dark),
        math.sqrt(p.gamma1 / 4.0) * dyad(s, dark),
        math.sqrt(p.gamma1 / 4.0) * dyad(t, dark),
    )

    # Controls act on the full space; restrict them to the dark subspace.
    full_ops = _two_atom_operators(p)
    kets = two_atom_basis(p)
    basis = np.column_stack(
        [kets["S"], kets["T"], kets["psi3"], kets["psi4"], kets["D"]]
    )
    controls = tuple(
        basis.conj().T @ h_n @ basis for h_n in full_ops["controls"]
    )

    labels = ("S", "T", "psi3", "psi4", "D")
    vectors = (s, t, psi3, psi4, dark)
    populations = {lab: dyad(v, v) for lab, v in zip(labels, vectors)}
    named = {lab: v for lab, v in zip(labels, vectors)}
    named["psi1"] = (t + s) / math.sqrt(2.0)
    named["psi2"] = (t - s) / math.sqrt(2.0)
    return OpenSystemModel(
        hamiltonian=HamiltonianSpec(
            dim=5,
            static_terms=tuple(static_terms),
            rotating_terms=tuple(rotating),
        ),
        target=dyad(s, s),
        lindblad_ops=lindblads,
        controls=controls,
        control_gain=p.control_gain,
        control_cap=p.control_cap,
        populations=populations,
        named_states=named,
        reduced_space=labels,
    )


# --------------------------------------------------------------------------
# Zeno reduction
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ZenoReduction:
    """Eigenspace projector of the dominant coupling and the slow
    Hamiltonian restricted to it.

    ``basis`` holds the selected eigenvectors as columns, so
    ``effective_h = basis^dag h_p basis``; within a degenerate eigenspace
    the column choice is arbitrary, but ``projector`` and
    ``projector @ h_p @ projector`` are basis-independent.
    """

    projector: np.ndarray
    basis: np.ndarray
    effective_h: np.ndarray
    eigenvalue: float


def zeno_reduce(h_p, h_q, eigenvalue_select: float, tol: float = 1e-6) -> ZenoReduction:
    """Project the slow Hamiltonian onto one eigenspace of the fast one.

    In the strong-coupling limit the dynamics generated by
    h_p + K h_q (K -> infinity) is confined to eigenspaces of h_q, each
    evolving under the restriction of h_p.
    """
    h_p = as_operator(h_p, "slow Hamiltonian")
    h_q = as_operator(h_q, "fast coupling")
    if h_p.shape != h_q.shape:
        raise ValueError("dimension mismatch between h_p and h_q")
    if not is_hermitian(h_p) or not is_hermitian(h_q):
        raise ValueError("h_p and h_q must be Hermitian")
    values, vectors = hermitian_eigen(h_q)
    mask = np.abs(values - eigenvalue_select) <= tol
    if not mask.any():
        raise ValueError(
            f"no eigenvalue of the coupling within {tol} of {eigenvalue_select}"
        )
    basis = vectors[:, mask]
    projector = basis @ basis.conj().T
    return ZenoReduction(
        projector=projector,
        basis=basis,
        effective_h=basis.conj().T @ h_p @ basis,
        eigenvalue=float(eigenvalue_select),
    )


def cooperativity(p: TwoAtomParams) -> float:
    """lambda^2 / (gamma1 kappa)."""
    if p.gamma1 <= 0 or p.kappa <= 0:
        raise ValueError("cooperativity requires gamma1 > 0 and kappa > 0")
    return p.lambda_c**2 / (p.gamma1 * p.kappa)
