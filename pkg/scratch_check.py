"""Scratch exploration (removed before completion)."""
import time

import numpy as np

from qsteer import (
    LambdaParams, LyapunovController, build_lambda_effective, build_lambda_full,
    evolution_speed, lyapunov_v, master_rhs, propagate, verify_stationarity,
)

# 1. stationarity of the Lambda model
p = LambdaParams(gamma1=1.0)
m = build_lambda_full(p)
rep = verify_stationarity(m, m.named_states["S"], [m.named_states["T"], m.named_states["e"]])
print("lambda full verify:", rep.passed, rep.h_residual)

rhs_at_target = master_rhs(m, 0.0, m.target, [0.0, 0.0])
print("rhs at target:", np.abs(rhs_at_target).max())

# 2. A1 candidate search: gamma = 1, t_f = 10, no controls
t0 = time.time()
for label in ("g1", "g2", "T", "ground_mixture"):
    state = m.named_states[label]
    rho0 = np.outer(state, state.conj()) if state.ndim == 1 else state
    rec = propagate(m, rho0, t_final=10.0, dt=1e-3, record_stride=10)
    print(f"A1 candidate {label:15s} P_S(10) = {rec.populations['S'][-1]:.4f}")
print("elapsed", time.time() - t0)

# 3. A2: gamma = 0.5, uncontrolled max Vdot and controlled max Vdot_a
p2 = LambdaParams(gamma1=0.5, mu1=0.8, mu2=0.6)
m2 = build_lambda_full(p2)
for label in ("g1", "g2", "T", "ground_mixture"):
    state = m2.named_states[label]
    rho0 = np.outer(state, state.conj()) if state.ndim == 1 else state
    rec_free = propagate(m2, rho0, t_final=10.0, dt=1e-3, record_stride=10)
    rec_ctl = propagate(m2, rho0, t_final=10.0, dt=1e-3,
                        controller=LyapunovController(m2), record_stride=10)
    print(f"A2 {label:15s} max Vdot = {rec_free.vdot.max():.4f}  "
          f"max Vdot_a = {rec_ctl.vdot.max():.4f}  "
          f"F_free(10)={rec_free.v[-1]:.4f} F_ctl(10)={rec_ctl.v[-1]:.4f}")

# 4. full vs effective equivalence
p3 = LambdaParams(gamma1=0.8)
mf = build_lambda_full(p3)
me = build_lambda_effective(p3)
rho0f = np.outer(mf.named_states["g1"], mf.named_states["g1"].conj())
rho0e = np.outer(me.named_states["g1"], me.named_states["g1"].conj())
rf = propagate(mf, rho0f, 5.0, 1e-3, controller=LyapunovController(mf), record_stride=10)
re_ = propagate(me, rho0e, 5.0, 1e-3, controller=LyapunovController(me), record_stride=10)
print("full-vs-eff max |dP_S| =", np.abs(rf.populations["S"] - re_.populations["S"]).max())
print("max trace drift:", rf.max_trace_drift)
