"""Master-equation assembly and fixed-step propagation.

The right-hand side combines a (possibly time-dependent) Hamiltonian
commutator, a Lindblad dissipator whose rates are pre-absorbed into the
jump operators, and a noise-averaged amplitude-noise double commutator:

    drho/dt = -i[H(t) + sum_n f_n H_n, rho] + N rho + L rho

States are density matrices propagated with classic fixed-step RK4.
When a feedback controller is attached, the control amplitudes f_n are
recomputed at every RK stage from that stage's state, i.e. the feedback
law is part of the ODE vector field rather than a piecewise-constant
schedule.  After every full step the state is re-Hermitized and
trace-renormalized; the renormalization magnitude is tracked and stays
at roundoff level for any step size small enough to be trusted.

Units: energies in the reference Rabi frequency, times in its inverse.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_operator, is_hermitian

logger = logging.getLogger(__name__)

DENSITY_TRACE_TOL = 1e-10
DENSITY_EIG_FLOOR = -1e-8
POSITIVITY_ABORT = -1e-6
TRACE_DRIFT_WARN = 1e-8


class PropagationError(RuntimeError):
    """Numerical abort during time evolution (positivity loss or NaN)."""


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=np.complex128)
    out.setflags(write=False)
    return out


def validate_density_matrix(rho, name: str = "density matrix") -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return a complex copy."""
    rho = as_operator(rho, name)
    if not is_hermitian(rho):
        raise ValueError(f"{name} is not Hermitian within tolerance")
    tr = np.trace(rho)
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if min_eig < DENSITY_EIG_FLOOR:
        raise ValueError(f"{name} has negative eigenvalue {min_eig}")
    return np.array(rho, dtype=np.complex128)


@dataclass
class HamiltonianSpec:
    """Hermitian generator split into static and rotating parts.

    Each rotating term is a pair ``(A, omega)`` contributing
    ``A exp(i omega t) + A^dag exp(-i omega t)``, so ``evaluate(t)`` is
    Hermitian for every t.  Static terms must each be Hermitian.
    """

    dim: int
    static_terms: tuple = ()
    rotating_terms: tuple = ()

    def __post_init__(self):
        statics = []
        for term in self.static_terms:
            term = as_operator(term, "static Hamiltonian term")
            if term.shape[0] != self.dim:
                raise ValueError("static term dimension mismatch")
            if not is_hermitian(term):
                raise ValueError("static Hamiltonian term is not Hermitian")
            statics.append(_frozen(term))
        rotating = []
        for amp, omega in self.rotating_terms:
            amp = as_operator(amp, "rotating Hamiltonian amplitude")
            if amp.shape[0] != self.dim:
                raise ValueError("rotating term dimension mismatch")
            rotating.append((_frozen(amp), float(omega)))
        self.static_terms = tuple(statics)
        self.rotating_terms = tuple(rotating)
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for term in self.static_terms:
            total += term
        self._static_sum = _frozen(total)

    @property
    def static_sum(self) -> np.ndarray:
        return self._static_sum

    @property
    def is_static(self) -> bool:
        return not self.rotating_terms

    def evaluate(self, t: float) -> np.ndarray:
        """H(t), Hermitian for all t."""
        h = np.array(self._static_sum)
        for amp, omega in self.rotating_terms:
            phase = np.exp(1j * omega * t)
            h += phase * amp + np.conj(phase) * amp.conj().T
        return h


@dataclass
class NoiseChannel:
    """Averaged amplitude noise along a Hermitian direction.

    Contributes -(eta^2 / 2) [h_s, [h_s, rho]] to the master equation,
    the white-noise average of a stochastic Hamiltonian perturbation
    eta * h_s * xi(t).
    """

    h_s: np.ndarray
    eta: float

    def __post_init__(self):
        h_s = as_operator(self.h_s, "noise direction")
        if not is_hermitian(h_s):
            raise ValueError("noise direction must be Hermitian")
        self.h_s = _frozen(h_s)
        self.eta = float(self.eta)
        if self.eta < 0:
            raise ValueError("noise intensity must be >= 0")


@dataclass
class OpenSystemModel:
    """Hamiltonian, dissipation channels, noise, target and controls.

    ``lindblad_ops`` carry their rates as prefactors (e.g. sqrt(gamma/2)).
    ``populations`` maps labels to projectors recorded along trajectories;
    ``named_states`` maps labels to kets or density matrices usable as
    initial states; ``reduced_space`` lists the labels (target first) that
    span the reduced space used for stationarity verification.
    """

    hamiltonian: HamiltonianSpec
    target: np.ndarray
    lindblad_ops: tuple = ()
    noise: tuple = ()
    controls: tuple = ()
    control_gain: float = 1.0
    control_cap: float | None = None
    populations: dict = field(default_factory=dict)
    named_states: dict = field(default_factory=dict)
    reduced_space: tuple = ()

    def __post_init__(self):
        dim = self.hamiltonian.dim
        self.target = _frozen(validate_density_matrix(self.target, "target state"))
        if self.target.shape[0] != dim:
            raise ValueError("target dimension mismatch")
        ops = []
        for op in self.lindblad_ops:
            op = as_operator(op, "Lindblad operator")
            if op.shape[0] != dim:
                raise ValueError("Lindblad operator dimension mismatch")
            ops.append(_frozen(op))
        self.lindblad_ops = tuple(ops)
        for channel in self.noise:
            if channel.h_s.shape[0] != dim:
                raise ValueError("noise channel dimension mismatch")
        self.noise = tuple(self.noise)
        ctrls = []
        for op in self.controls:
            op = as_operator(op, "control Hamiltonian")
            if op.shape[0] != dim:
                raise ValueError("control Hamiltonian dimension mismatch")
            if not is_hermitian(op):
                raise ValueError("control Hamiltonian must be Hermitian")
            ctrls.append(_frozen(op))
        self.controls = tuple(ctrls)
        self.control_gain = float(self.control_gain)
        if self.control_gain < 0:
            raise ValueError("control gain must be >= 0")
        if self.control_cap is not None:
            self.control_cap = float(self.control_cap)
            if self.control_cap <= 0:
                raise ValueError("control cap must be > 0")
        if not self.populations:
            self.populations = {"S": np.array(self.target)}

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim


@dataclass
class TrajectoryRecord:
    """Time series recorded along one propagated trajectory."""

    times: np.ndarray
    v: np.ndarray
    vdot: np.ndarray
    controls: np.ndarray            # shape (n_records, n_controls)
    populations: dict               # label -> array over records
    states: tuple                   # density matrix at each recorded step
    final_state: np.ndarray
    dt: float
    max_trace_drift: float


def dissipator(lindblad_ops, rho) -> np.ndarray:
    """Lindblad dissipator sum_k L_k rho L_k^dag - (1/2){L_k^dag L_k, rho}."""
    rho = as_operator(rho, "state")
    out = np.zeros_like(rho)
    for op in lindblad_ops:
        op = as_operator(op, "Lindblad operator")
        if op.shape != rho.shape:
            raise ValueError("Lindblad operator dimension mismatch")
        op_dag = op.conj().T
        quad = op_dag @ op
        out += op @ rho @ op_dag - 0.5 * (quad @ rho + rho @ quad)
    return out


def noise_superoperator(channels, rho) -> np.ndarray:
    """Sum over channels of -(eta^2 / 2) [h_s, [h_s, rho]]."""
    rho = as_operator(rho, "state")
    out = np.zeros_like(rho)
    for channel in channels:
        h_s = channel.h_s
        if h_s.shape != rho.shape:
            raise ValueError("noise channel dimension mismatch")
        inner = h_s @ rho - rho @ h_s
        out -= 0.5 * channel.eta**2 * (h_s @ inner - inner @ h_s)
    return out


def master_rhs(model: OpenSystemModel, t: float, rho, control_values) -> np.ndarray:
    """Full master-equation right-hand side at time t.

    ``control_values`` supplies one real amplitude per control Hamiltonian.
    """
    rho = as_operator(rho, "state")
    control_values = np.asarray(control_values, dtype=float).reshape(-1)
    if control_values.size != len(model.controls):
        raise ValueError(
            f"expected {len(model.controls)} control values, "
            f"got {control_values.size}"
        )
    h = model.hamiltonian.evaluate(t)
    for f_n, h_n in zip(control_values, model.controls):
        h = h + f_n * h_n
    out = -1j * (h @ rho - rho @ h)
    out += noise_superoperator(model.noise, rho)
    out += dissipator(model.lindblad_ops, rho)
    return out


class _CompiledRHS:
    """Precomputed arrays for fast repeated right-hand-side evaluation.

    Noise channels enter as Hermitian pseudo-jump operators eta * h_s,
    which reproduces the double commutator exactly.
    """

    def __init__(self, model: OpenSystemModel):
        dim = model.dim
        self.h_static = np.array(model.hamiltonian.static_sum)
        self.rotating = [
            (np.array(amp), np.array(amp.conj().T), omega)
            for amp, omega in model.hamiltonian.rotating_terms
        ]
        jump_ops = list(model.lindblad_ops)
        jump_ops += [ch.eta * ch.h_s for ch in model.noise if ch.eta > 0]
        if jump_ops:
            self.l_stack = np.stack(jump_ops)
            self.l_dag_stack = self.l_stack.conj().transpose(0, 2, 1)
            self.half_quad = 0.5 * sum(
                ld @ l for l, ld in zip(self.l_stack, self.l_dag_stack)
            )
        else:
            self.l_stack = None
            self.half_quad = None
        self.ctrl_stack = np.stack(model.controls) if model.controls else None
        self.n_controls = len(model.controls)
        self.dim = dim

    def hamiltonian_at(self, t: float, controls) -> np.ndarray:
        h = self.h_static
        if self.rotating:
            h = h.copy()
            for amp, amp_dag, omega in self.rotating:
                phase = complex(np.cos(omega * t), np.sin(omega * t))
                h += phase * amp + phase.conjugate() * amp_dag
        if self.ctrl_stack is not None and controls is not None:
            h = h + np.tensordot(controls, self.ctrl_stack, axes=1)
        return h

    def __call__(self, t: float, rho: np.ndarray, controls) -> np.ndarray:
        h = self.hamiltonian_at(t, controls)
        out = -1j * (h @ rho - rho @ h)
        if self.l_stack is not None:
            sandwich = (self.l_stack @ rho) @ self.l_dag_stack
            out += sandwich.sum(axis=0)
            out -= self.half_quad @ rho + rho @ self.half_quad
        return out


def propagate(
    model: OpenSystemModel,
    rho0,
    t_final: float,
    dt: float,
    controller=None,
    record_stride: int = 1,
) -> TrajectoryRecord:
    """Propagate ``rho0`` with classic RK4 and record observables.

    Parameters
    ----------
    controller:
        Optional callable ``controller(t, rho) -> array of f_n``; evaluated
        at every RK stage so state feedback is part of the vector field.
    record_stride:
        Record every this many steps (step 0 and the final step are always
        recorded).

    The step count is ``round(t_final / dt)`` and the actual step is
    ``t_final / n_steps``, which keeps the recorded grid uniform and lands
    exactly on ``t_final``.  Raises :class:`PropagationError` when the
    state develops eigenvalues below -1e-6 or non-finite entries at a
    recorded step; both signal a step size too large for the model.
    """
    if t_final <= 0:
        raise ValueError("t_final must be > 0")
    if dt <= 0 or dt > t_final:
        raise ValueError("dt must satisfy 0 < dt <= t_final")
    record_stride = int(record_stride)
    if record_stride < 1:
        raise ValueError("record_stride must be a positive integer")

    rho = validate_density_matrix(rho0, "initial state")
    if rho.shape[0] != model.dim:
        raise ValueError("initial state dimension mismatch")

    n_steps = max(1, int(round(t_final / dt)))
    step = t_final / n_steps
    rhs = _CompiledRHS(model)
    target = np.array(model.target)
    pop_labels = list(model.populations)
    pop_ops = [np.array(model.populations[k]) for k in pop_labels]
    zeros = np.zeros(rhs.n_controls)

    def controls_at(t, state):
        if controller is None:
            return zeros
        return np.asarray(controller(t, state), dtype=float).reshape(-1)

    times, v_series, vdot_series, f_series, states = [], [], [], [], []
    pop_series = [[] for _ in pop_labels]

    def record(t, state):
        if not np.isfinite(state).all():
            raise PropagationError(f"non-finite state at t = {t:g}")
        min_eig = float(np.linalg.eigvalsh(state).min())
        if min_eig < POSITIVITY_ABORT:
            raise PropagationError(
                f"positivity violated at t = {t:g} (min eigenvalue {min_eig:.3e}); "
                "dt is too large for this model"
            )
        f_now = controls_at(t, state)
        deriv = rhs(t, state, f_now)
        times.append(t)
        v_series.append(float(np.einsum("ij,ji->", state, target).real))
        vdot_series.append(float(np.einsum("ij,ji->", deriv, target).real))
        f_series.append(np.array(f_now))
        states.append(np.array(state))
        for values, op in zip(pop_series, pop_ops):
            values.append(float(np.einsum("ij,ji->", op, state).real))

    max_drift = 0.0
    record(0.0, rho)
    for i in range(1, n_steps + 1):
        t0 = (i - 1) * step
        k1 = rhs(t0, rho, controls_at(t0, rho))
        r = rho + (0.5 * step) * k1
        k2 = rhs(t0 + 0.5 * step, r, controls_at(t0 + 0.5 * step, r))
        r = rho + (0.5 * step) * k2
        k3 = rhs(t0 + 0.5 * step, r, controls_at(t0 + 0.5 * step, r))
        r = rho + step * k3
        k4 = rhs(t0 + step, r, controls_at(t0 + step, r))
        rho = rho + (step / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        rho = 0.5 * (rho + rho.conj().T)
        tr = float(np.trace(rho).real)
        drift = abs(tr - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > TRACE_DRIFT_WARN:
            logger.warning(
                "trace drift %.3e at step %d exceeds %.1e; dt may be too large",
                drift, i, TRACE_DRIFT_WARN,
            )
        rho = rho / tr
        if i % record_stride == 0 or i == n_steps:
            record(i * step, rho)

    return TrajectoryRecord(
        times=np.array(times),
        v=np.array(v_series),
        vdot=np.array(vdot_series),
        controls=np.array(f_series).reshape(len(times), rhs.n_controls),
        populations={
            label: np.array(series)
            for label, series in zip(pop_labels, pop_series)
        },
        states=tuple(states),
        final_state=rho,
        dt=step,
        max_trace_drift=max_drift,
    )
