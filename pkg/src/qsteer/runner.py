"""Experiment configuration, execution and CSV artifacts.

Configs are flat key-value text with dotted parameter paths::

    # three-level atom, accelerated run
    model = lambda_full
    model.gamma1 = 0.8
    model.theta = 0.7853981633974483
    initial_state = g1
    controls_enabled = true
    t_final = 10
    dt = 0.001
    record_stride = 10
    sweep.model.gamma1 = 0.5, 1.0, 2.0

Floats are serialized to CSV in scientific notation with 17 significant
digits, so identical configs produce byte-identical artifacts and files
diff cleanly across runs.  Sweep cells are independent and may run in a
process pool; rows are emitted in lexicographic axis order regardless of
execution order, so parallelism never changes output bytes.
"""

from __future__ import annotations

import dataclasses
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .control import LyapunovController, StationarityReport, verify_stationarity
from .engine import OpenSystemModel, TrajectoryRecord, propagate, validate_density_matrix
from .models import (
    LambdaParams,
    TwoAtomParams,
    build_lambda_effective,
    build_lambda_full,
    build_two_atom_effective,
    build_two_atom_full,
)


class ConfigError(ValueError):
    """Malformed configuration or unknown parameter path."""


MODEL_BUILDERS = {
    "lambda_full": (LambdaParams, build_lambda_full),
    "lambda_effective": (LambdaParams, build_lambda_effective),
    "two_atom_full": (TwoAtomParams, build_two_atom_full),
    "two_atom_effective": (TwoAtomParams, build_two_atom_effective),
}

# Model families for full-vs-effective comparison runs.
MODEL_FAMILIES = {
    "lambda_full": ("lambda_full", "lambda_effective"),
    "lambda_effective": ("lambda_full", "lambda_effective"),
    "two_atom_full": ("two_atom_full", "two_atom_effective"),
    "two_atom_effective": ("two_atom_full", "two_atom_effective"),
}

_SCALAR_FIELDS = ("t_final", "dt", "record_stride")

DEFAULT_INITIAL_STATE = {
    "lambda_full": "g1",
    "lambda_effective": "g1",
    "two_atom_full": "psi1",
    "two_atom_effective": "psi1",
}


@dataclass
class ExperimentConfig:
    model: str
    params: dict = field(default_factory=dict)
    initial_state: str | None = None
    controls_enabled: bool = False
    t_final: float = 10.0
    dt: float = 1e-3
    record_stride: int = 10
    sweep: tuple = ()            # ((path, (values...)), ...)
    output_dir: str | None = None

    def __post_init__(self):
        if self.model not in MODEL_BUILDERS:
            raise ConfigError(
                f"unknown model {self.model!r}; expected one of "
                f"{sorted(MODEL_BUILDERS)}"
            )
        params_cls = MODEL_BUILDERS[self.model][0]
        valid = {f.name for f in dataclasses.fields(params_cls)}
        for key, value in self.params.items():
            if key not in valid:
                raise ConfigError(
                    f"unknown parameter model.{key} for {self.model}; "
                    f"valid: {sorted(valid)}"
                )
            if not np.isfinite(value):
                raise ConfigError(f"model.{key} must be finite, got {value!r}")
        for path, values in self.sweep:
            self._check_path(path)
            if len(values) == 0:
                raise ConfigError(f"sweep axis {path} has no values")
            if not all(np.isfinite(v) for v in values):
                raise ConfigError(f"sweep axis {path} has non-finite values")
        if len(self.sweep) > 3:
            raise ConfigError("at most 3 sweep axes are supported")
        if self.t_final <= 0 or self.dt <= 0:
            raise ConfigError("t_final and dt must be > 0")
        if self.record_stride < 1:
            raise ConfigError("record_stride must be a positive integer")

    def _check_path(self, path: str):
        if path in _SCALAR_FIELDS:
            return
        if path.startswith("model."):
            params_cls = MODEL_BUILDERS[self.model][0]
            name = path[len("model."):]
            if name in {f.name for f in dataclasses.fields(params_cls)}:
                return
        raise ConfigError(
            f"sweep path {path!r} does not exist on model {self.model}"
        )


def _parse_scalar(key: str, raw: str):
    raw = raw.strip()
    if key == "controls_enabled":
        if raw.lower() in ("true", "false"):
            return raw.lower() == "true"
        raise ConfigError(f"{key} must be true or false, got {raw!r}")
    if key in ("model", "initial_state", "output_dir"):
        return raw
    if key == "record_stride":
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from exc
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = {raw!r} as a number") from exc


def parse_config_text(text: str) -> ExperimentConfig:
    seen = set()
    top: dict = {}
    params: dict = {}
    sweep: list = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        if key.startswith("sweep."):
            path = key[len("sweep."):]
            try:
                values = tuple(float(v) for v in raw.split(","))
            except ValueError as exc:
                raise ConfigError(
                    f"line {lineno}: sweep values must be comma-separated numbers"
                ) from exc
            sweep.append((path, values))
        elif key.startswith("model."):
            name = key[len("model."):]
            if name == "n_max":
                try:
                    params[name] = int(raw)
                except ValueError as exc:
                    raise ConfigError(
                        f"line {lineno}: model.n_max must be an integer"
                    ) from exc
            else:
                params[name] = _parse_scalar(name, raw)
        elif key in (
            "model", "initial_state", "controls_enabled",
            "t_final", "dt", "record_stride", "output_dir",
        ):
            top[key] = _parse_scalar(key, raw)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if "model" not in top:
        raise ConfigError("config is missing the 'model' key")
    return ExperimentConfig(params=params, sweep=tuple(sweep), **top)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text())


def build_model(config: ExperimentConfig) -> OpenSystemModel:
    params_cls, builder = MODEL_BUILDERS[config.model]
    try:
        params = params_cls(**config.params)
        return builder(params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def resolve_initial_state(model: OpenSystemModel, spec: str | None, model_name: str):
    """Resolve an initial-state label into a density matrix.

    Accepts a named ket or density from the model catalog, or a diagonal
    mixture ``mixture:label:weight,label:weight,...``.
    """
    if spec is None:
        spec = DEFAULT_INITIAL_STATE[model_name]
    if spec.startswith("mixture:"):
        rho = np.zeros((model.dim, model.dim), dtype=np.complex128)
        total = 0.0
        for piece in spec[len("mixture:"):].split(","):
            try:
                label, weight_raw = piece.split(":")
                weight = float(weight_raw)
            except ValueError as exc:
                raise ConfigError(
                    f"bad mixture component {piece!r}; expected label:weight"
                ) from exc
            rho += weight * _label_density(model, label.strip())
            total += weight
        if abs(total - 1.0) > 1e-10:
            raise ConfigError(f"mixture weights sum to {total}, expected 1")
        return validate_density_matrix(rho, "initial state")
    return _label_density(model, spec)


def _label_density(model: OpenSystemModel, label: str) -> np.ndarray:
    if label not in model.named_states:
        raise ConfigError(
            f"unknown initial state {label!r}; "
            f"available: {sorted(model.named_states)}"
        )
    state = model.named_states[label]
    if state.ndim == 1:
        return np.outer(state, state.conj())
    return np.array(state, dtype=np.complex128)


def apply_overrides(config: ExperimentConfig, overrides: dict) -> ExperimentConfig:
    """New config with dotted-path overrides applied (used by sweeps)."""
    params = dict(config.params)
    changes: dict = {}
    for path, value in overrides.items():
        if path in _SCALAR_FIELDS:
            changes[path] = int(value) if path == "record_stride" else float(value)
        elif path.startswith("model."):
            params[path[len("model."):]] = float(value)
        else:
            raise ConfigError(f"unknown override path {path!r}")
    return dataclasses.replace(
        config, params=params, sweep=(), **changes
    )


# --------------------------------------------------------------------------
# CSV helpers
# --------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _write_csv(path: Path, header: list, rows: list):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) if isinstance(x, float) else str(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def write_trajectory_csv(path: Path, record: TrajectoryRecord):
    n_controls = record.controls.shape[1]
    header = ["t", "V", "Vdot"]
    header += [f"f_{n + 1}" for n in range(n_controls)]
    header += [f"P_{label}" for label in record.populations]
    pops = list(record.populations.values())
    rows = []
    for i in range(len(record.times)):
        row = [float(record.times[i]), float(record.v[i]), float(record.vdot[i])]
        row += [float(record.controls[i, n]) for n in range(n_controls)]
        row += [float(series[i]) for series in pops]
        rows.append(row)
    _write_csv(path, header, rows)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _run_trajectory(config: ExperimentConfig) -> TrajectoryRecord:
    model = build_model(config)
    rho0 = resolve_initial_state(model, config.initial_state, config.model)
    controller = None
    if config.controls_enabled and model.controls:
        controller = LyapunovController(model)
    return propagate(
        model, rho0, config.t_final, config.dt,
        controller=controller, record_stride=config.record_stride,
    )


def run_simulate(config: ExperimentConfig, out_dir) -> tuple[TrajectoryRecord, Path]:
    """Propagate one trajectory and write ``trajectory.csv``."""
    if config.sweep:
        raise ConfigError("simulate does not accept a sweep section")
    record = _run_trajectory(config)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "trajectory.csv"
    write_trajectory_csv(path, record)
    return record, path


@dataclass(frozen=True)
class CellMetrics:
    fidelity: float        # F_S at t_final
    max_v: float
    max_vdot: float
    max_controls: tuple


@dataclass
class SweepResult:
    axes: tuple                  # ((path, values), ...)
    cells: list                  # CellMetrics in lexicographic axis order

    @property
    def shape(self) -> tuple:
        return tuple(len(values) for _, values in self.axes)

    def fidelity_grid(self) -> np.ndarray:
        return np.array([c.fidelity for c in self.cells]).reshape(self.shape)

    def max_v_grid(self) -> np.ndarray:
        return np.array([c.max_v for c in self.cells]).reshape(self.shape)


def _sweep_cell(args) -> CellMetrics:
    config, overrides = args
    record = _run_trajectory(apply_overrides(config, overrides))
    return CellMetrics(
        fidelity=float(record.v[-1]),
        max_v=float(record.v.max()),
        max_vdot=float(record.vdot.max()),
        max_controls=tuple(
            float(np.abs(record.controls[:, n]).max())
            for n in range(record.controls.shape[1])
        ),
    )


def run_sweep(config: ExperimentConfig, out_dir, jobs: int = 1) -> tuple[SweepResult, Path]:
    """Run every grid cell independently and write ``sweep.csv``."""
    if not config.sweep:
        raise ConfigError("sweep requires at least one sweep axis")
    paths = [path for path, _ in config.sweep]
    value_lists = [values for _, values in config.sweep]
    tasks = []
    for combo in itertools.product(*value_lists):
        overrides = dict(zip(paths, combo))
        tasks.append((config, overrides))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_sweep_cell, tasks))
    else:
        cells = [_sweep_cell(task) for task in tasks]

    result = SweepResult(axes=tuple(config.sweep), cells=cells)
    n_controls = max((len(c.max_controls) for c in cells), default=0)
    header = list(paths) + ["F_S", "max_V", "max_Vdot"]
    header += [f"max_f_{n + 1}" for n in range(n_controls)]
    rows = []
    for (combo, cell) in zip(itertools.product(*value_lists), cells):
        row = [float(v) for v in combo]
        row += [cell.fidelity, cell.max_v, cell.max_vdot]
        row += [cell.max_controls[n] for n in range(n_controls)]
        rows.append(row)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "sweep.csv"
    _write_csv(path, header, rows)
    return result, path


def _verification_inputs(model: OpenSystemModel):
    labels = model.reduced_space
    if not labels:
        raise ConfigError("model declares no reduced space for verification")
    kets = [model.named_states[label] for label in labels]
    return kets[0], kets[1:], labels


def verification_rows(report: StationarityReport, labels) -> list:
    rows = [("H0 annihilates target", report.h_residual,
             report.h_annihilates_target)]
    for k, residual in enumerate(report.lindblad_residuals, start=1):
        rows.append((f"L_{k} annihilates target", residual,
                     residual <= report.threshold))
    best = max(report.reach_residuals, default=0.0)
    rows.append(("some L_k^dag drives target", best, report.target_reachable))
    for label, residual in zip(labels[1:], report.complement_residuals):
        rows.append((f"H0 drives {label}", residual,
                     residual > report.threshold))
    return rows


def run_verify(config: ExperimentConfig, out_dir=None) -> StationarityReport:
    """Verify the stationary-state conditions; optionally write verify.csv."""
    model = build_model(config)
    target, complement, labels = _verification_inputs(model)
    report = verify_stationarity(model, target, complement)
    rows = verification_rows(report, labels)
    width = max(len(r[0]) for r in rows)
    print(f"{'condition':<{width}}  residual      status")
    for name, residual, ok in rows:
        print(f"{name:<{width}}  {residual:.6e}  {'pass' if ok else 'FAIL'}")
    print(f"overall: {'pass' if report.passed else 'FAIL'}")
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_csv(
            out_dir / "verify.csv",
            ["condition", "residual", "passed"],
            [(name, residual, str(ok).lower()) for name, residual, ok in rows],
        )
    return report


def run_noise_scan(config: ExperimentConfig, eta_values, out_dir) -> Path:
    """Cross-product of noise intensities with the config's single sweep
    axis; writes ``noise.csv`` with columns eta, gamma, F_S."""
    if len(config.sweep) != 1:
        raise ConfigError("noise-scan requires exactly one sweep axis")
    model = build_model(config)
    if not model.noise:
        raise ConfigError(f"model {config.model} defines no noise channels")
    eta_values = tuple(float(v) for v in eta_values)
    if not eta_values:
        raise ConfigError("no noise intensities given")
    path_name, gammas = config.sweep[0]
    rows = []
    for eta in eta_values:
        for gamma in gammas:
            overrides = {path_name: gamma, "model.eta": eta}
            record = _run_trajectory(apply_overrides(config, overrides))
            rows.append([eta, float(gamma), float(record.v[-1])])
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "noise.csv"
    _write_csv(path, ["eta", "gamma", "F_S"], rows)
    return path


def run_compare(config: ExperimentConfig, out_dir) -> dict:
    """Run the full and effective pictures of the configured family and
    write both trajectories plus a per-label max-deviation summary."""
    full_name, eff_name = MODEL_FAMILIES[config.model]
    records = {}
    for name, model_name in (("full", full_name), ("effective", eff_name)):
        sub = dataclasses.replace(config, model=model_name, sweep=())
        records[name] = _run_trajectory(sub)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(out_dir / "trajectory_full.csv", records["full"])
    write_trajectory_csv(out_dir / "trajectory_effective.csv", records["effective"])

    common = [
        label for label in records["full"].populations
        if label in records["effective"].populations
    ]
    deviations = {}
    for label in common:
        a = records["full"].populations[label]
        b = records["effective"].populations[label]
        deviations[label] = float(np.abs(a - b).max())
    overall = max(deviations.values(), default=0.0)
    rows = [[label, deviations[label]] for label in common]
    rows.append(["overall", overall])
    _write_csv(out_dir / "summary.csv", ["label", "max_abs_deviation"], rows)
    return {"deviations": deviations, "overall": overall, "records": records}
