"""Config parsing, CSV artifacts, sweeps, CLI exit codes."""

import math

import numpy as np
import pytest

from qsteer.cli import main
from qsteer.runner import (
    ConfigError,
    apply_overrides,
    build_model,
    load_config,
    parse_config_text,
    resolve_initial_state,
    run_compare,
    run_noise_scan,
    run_simulate,
    run_sweep,
    run_verify,
)

QUARTER_PI = repr(math.pi / 4)

LAMBDA_BASE = f"""
# three-level atom, matched angles
model = lambda_full
model.theta = {QUARTER_PI}
model.gamma1 = 0.8
initial_state = g1
controls_enabled = false
t_final = 2.0
dt = 0.001
record_stride = 10
"""


def write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestConfigParsing:
    def test_roundtrip(self):
        config = parse_config_text(LAMBDA_BASE)
        assert config.model == "lambda_full"
        assert config.params["theta"] == pytest.approx(math.pi / 4)
        assert config.initial_state == "g1"
        assert config.t_final == 2.0
        assert config.record_stride == 10
        assert not config.controls_enabled

    def test_sweep_axes_preserve_order(self):
        config = parse_config_text(
            LAMBDA_BASE + "sweep.t_final = 1, 2\nsweep.model.gamma1 = 0.5, 1.0\n"
        )
        assert [path for path, _ in config.sweep] == ["t_final", "model.gamma1"]

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text(LAMBDA_BASE + "tfinal = 3\n")

    def test_unknown_model_param_rejected(self):
        with pytest.raises(ConfigError, match="unknown parameter"):
            parse_config_text(LAMBDA_BASE + "model.kappa = 0.5\n")

    def test_unknown_sweep_path_rejected(self):
        with pytest.raises(ConfigError, match="does not exist"):
            parse_config_text(LAMBDA_BASE + "sweep.model.kappa = 0.1, 0.2\n")

    def test_bad_number_rejected(self):
        with pytest.raises(ConfigError, match="cannot parse"):
            parse_config_text(LAMBDA_BASE + "model.mu1 = fast\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text(LAMBDA_BASE + "t_final = 3\n")

    def test_missing_model_rejected(self):
        with pytest.raises(ConfigError, match="missing"):
            parse_config_text("t_final = 2\n")

    def test_unknown_initial_state_rejected(self):
        config = parse_config_text(LAMBDA_BASE.replace("g1", "g7"))
        model = build_model(config)
        with pytest.raises(ConfigError, match="unknown initial state"):
            resolve_initial_state(model, config.initial_state, config.model)

    def test_mixture_initial_state(self):
        config = parse_config_text(LAMBDA_BASE)
        model = build_model(config)
        rho = resolve_initial_state(model, "mixture:g1:0.5,g2:0.5", config.model)
        expected = resolve_initial_state(model, "ground_mixture", config.model)
        assert np.abs(rho - expected).max() <= 1e-12

    def test_mixture_weights_must_sum_to_one(self):
        config = parse_config_text(LAMBDA_BASE)
        model = build_model(config)
        with pytest.raises(ConfigError, match="sum"):
            resolve_initial_state(model, "mixture:g1:0.6,g2:0.6", config.model)


class TestSimulate:
    def test_deterministic_bytes(self, tmp_path):
        config = parse_config_text(LAMBDA_BASE)
        _, path_a = run_simulate(config, tmp_path / "a")
        _, path_b = run_simulate(config, tmp_path / "b")
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_header_and_rows(self, tmp_path):
        config = parse_config_text(LAMBDA_BASE)
        record, path = run_simulate(config, tmp_path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,V,Vdot,f_1,f_2,P_S,P_T,P_e"
        assert len(lines) == 1 + len(record.times)
        first = [float(x) for x in lines[1].split(",")]
        assert first[0] == 0.0

    def test_stationary_start_keeps_v_at_one(self, tmp_path):
        config = parse_config_text(LAMBDA_BASE.replace("g1", "S"))
        record, _ = run_simulate(config, tmp_path)
        assert np.abs(record.v - 1.0).max() <= 1e-8

    def test_rejects_sweep_section(self, tmp_path):
        config = parse_config_text(LAMBDA_BASE + "sweep.model.gamma1 = 1, 2\n")
        with pytest.raises(ConfigError, match="sweep"):
            run_simulate(config, tmp_path)

    def test_control_fields_smooth_peaked_then_vanishing(self, tmp_path):
        # accelerated run: fields rise smoothly to an early peak and
        # decay toward zero as V approaches 1
        text = LAMBDA_BASE.replace("controls_enabled = false", "controls_enabled = true")
        text = text.replace("t_final = 2.0", "t_final = 10.0")
        record, _ = run_simulate(parse_config_text(text), tmp_path)
        f1 = record.controls[:, 0]
        peak = np.abs(f1).max()
        peak_time = record.times[np.abs(f1).argmax()]
        assert peak_time <= 0.3 * record.times[-1]
        assert abs(f1[-1]) <= 0.05 * peak
        assert np.abs(np.diff(f1)).max() <= 0.15 * peak


class TestSweep:
    def test_single_point_sweep_matches_simulate(self, tmp_path):
        scalar = parse_config_text(LAMBDA_BASE)
        record, _ = run_simulate(scalar, tmp_path / "scalar")
        swept = parse_config_text(LAMBDA_BASE + "sweep.model.gamma1 = 0.8\n")
        result, _ = run_sweep(swept, tmp_path / "swept")
        assert result.cells[0].fidelity == pytest.approx(
            float(record.v[-1]), abs=1e-12
        )

    def test_rows_lexicographic_and_jobs_invariant(self, tmp_path):
        text = LAMBDA_BASE + "sweep.model.gamma1 = 1.0, 0.5\nsweep.t_final = 1, 2\n"
        config = parse_config_text(text)
        _, serial = run_sweep(config, tmp_path / "serial", jobs=1)
        _, parallel = run_sweep(config, tmp_path / "parallel", jobs=2)
        assert serial.read_bytes() == parallel.read_bytes()
        rows = [line.split(",") for line in serial.read_text().splitlines()[1:]]
        gammas = [float(r[0]) for r in rows]
        times = [float(r[1]) for r in rows]
        assert gammas == [1.0, 1.0, 0.5, 0.5]
        assert times == [1.0, 2.0, 1.0, 2.0]

    def test_sweep_cell_equals_independent_run(self, tmp_path):
        text = LAMBDA_BASE + "sweep.model.gamma1 = 0.5, 1.2\n"
        config = parse_config_text(text)
        result, _ = run_sweep(config, tmp_path / "grid")
        for value, cell in zip((0.5, 1.2), result.cells):
            scalar = apply_overrides(config, {"model.gamma1": value})
            record, _ = run_simulate(scalar, tmp_path / f"cell{value}")
            assert cell.fidelity == pytest.approx(float(record.v[-1]), abs=1e-12)

    def test_requires_axis(self, tmp_path):
        with pytest.raises(ConfigError, match="sweep"):
            run_sweep(parse_config_text(LAMBDA_BASE), tmp_path)


class TestVerifyCommand:
    def test_matched_angles_pass(self, tmp_path, capsys):
        report = run_verify(parse_config_text(LAMBDA_BASE), tmp_path)
        assert report.passed
        out = capsys.readouterr().out
        assert "overall: pass" in out
        lines = (tmp_path / "verify.csv").read_text().splitlines()
        assert lines[0] == "condition,residual,passed"
        assert all(line.endswith("true") for line in lines[1:])

    def test_mismatched_angles_fail(self):
        text = LAMBDA_BASE + "model.phi = 1.1\n"
        report = run_verify(parse_config_text(text))
        assert not report.passed

    def test_two_atom_effective_passes(self):
        report = run_verify(parse_config_text("model = two_atom_effective\n"))
        assert report.passed


class TestNoiseScan:
    def test_grid_values_and_monotonicity(self, tmp_path):
        text = LAMBDA_BASE.replace("t_final = 2.0", "t_final = 8.0")
        config = parse_config_text(text + "sweep.model.gamma1 = 0.5\n")
        path = run_noise_scan(config, [0.0, 0.1, 0.2], tmp_path)
        lines = path.read_text().splitlines()
        assert lines[0] == "eta,gamma,F_S"
        rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
        assert len(rows) == 3
        fidelities = {row[0]: row[2] for row in rows}
        # eta = 0 equals the noise-free run
        clean, _ = run_simulate(
            apply_overrides(config, {"model.gamma1": 0.5}), tmp_path / "clean"
        )
        assert fidelities[0.0] == pytest.approx(float(clean.v[-1]), abs=1e-10)
        # dephasing never helps this target
        assert fidelities[0.2] <= fidelities[0.1] <= fidelities[0.0]

    def test_requires_single_axis(self, tmp_path):
        with pytest.raises(ConfigError, match="exactly one"):
            run_noise_scan(parse_config_text(LAMBDA_BASE), [0.1], tmp_path)

    def test_requires_noise_channels(self, tmp_path):
        config = parse_config_text(
            "model = two_atom_effective\nsweep.model.gamma1 = 0.5\n"
        )
        with pytest.raises(ConfigError, match="noise"):
            run_noise_scan(config, [0.1], tmp_path)


class TestCompare:
    def test_lambda_family_equivalence(self, tmp_path):
        result = run_compare(parse_config_text(LAMBDA_BASE), tmp_path)
        assert result["overall"] <= 1e-8
        assert (tmp_path / "trajectory_full.csv").is_file()
        assert (tmp_path / "trajectory_effective.csv").is_file()
        lines = (tmp_path / "summary.csv").read_text().splitlines()
        assert lines[0] == "label,max_abs_deviation"
        assert lines[-1].startswith("overall,")


class TestCLI:
    def test_simulate_exit_zero(self, tmp_path, capsys):
        config = write_config(tmp_path, LAMBDA_BASE)
        code = main(["simulate", "--config", str(config), "--out", str(tmp_path / "o")])
        assert code == 0
        assert (tmp_path / "o" / "trajectory.csv").is_file()

    def test_missing_config_file_is_config_error(self, tmp_path, capsys):
        code = main(["simulate", "--config", str(tmp_path / "nope.cfg"),
                     "--out", str(tmp_path)])
        assert code == 2
        assert "configuration error" in capsys.readouterr().err

    def test_bad_config_exit_two(self, tmp_path, capsys):
        config = write_config(tmp_path, LAMBDA_BASE + "model.zeta = 1\n")
        code = main(["simulate", "--config", str(config), "--out", str(tmp_path)])
        assert code == 2

    def test_numerical_abort_exit_three(self, tmp_path, capsys):
        text = LAMBDA_BASE.replace("dt = 0.001", "dt = 3.0")
        text = text.replace("t_final = 2.0", "t_final = 300.0")
        text = text.replace("model.gamma1 = 0.8", "model.gamma1 = 2.0")
        config = write_config(tmp_path, text)
        code = main(["simulate", "--config", str(config), "--out", str(tmp_path)])
        assert code == 3
        assert "propagation aborted" in capsys.readouterr().err

    def test_verify_exit_codes(self, tmp_path, capsys):
        good = write_config(tmp_path, LAMBDA_BASE, "good.cfg")
        assert main(["verify", "--config", str(good)]) == 0
        bad = write_config(tmp_path, LAMBDA_BASE + "model.phi = 1.1\n", "bad.cfg")
        assert main(["verify", "--config", str(bad)]) == 1

    def test_noise_scan_cli(self, tmp_path, capsys):
        config = write_config(
            tmp_path, LAMBDA_BASE + "sweep.model.gamma1 = 0.5\n", "noise.cfg"
        )
        code = main([
            "noise-scan", "--config", str(config),
            "--etas", "0,0.1", "--out", str(tmp_path / "noise"),
        ])
        assert code == 0
        assert (tmp_path / "noise" / "noise.csv").is_file()

    def test_compare_zeno_cli(self, tmp_path, capsys):
        config = write_config(tmp_path, LAMBDA_BASE, "cmp.cfg")
        code = main(["compare-zeno", "--config", str(config),
                     "--out", str(tmp_path / "cmp")])
        assert code == 0
        assert (tmp_path / "cmp" / "summary.csv").is_file()
