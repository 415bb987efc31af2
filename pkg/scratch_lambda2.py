"""Scratch: Lambda criteria at theta = phi = pi/4 (removed before completion)."""
import math
import time

import numpy as np

from qsteer import LambdaParams, LyapunovController, build_lambda_full, propagate

QUARTER = math.pi / 4


def run(gamma, t_final, label, controls, eta=0.0, theta=QUARTER, mu=(0.8, 0.6)):
    p = LambdaParams(gamma1=gamma, theta=theta, mu1=mu[0], mu2=mu[1], eta=eta)
    m = build_lambda_full(p)
    state = m.named_states[label]
    rho0 = np.outer(state, state.conj()) if state.ndim == 1 else state
    ctl = LyapunovController(m) if controls else None
    return propagate(m, rho0, t_final, 1e-3, controller=ctl, record_stride=10)


t0 = time.time()
# A1 at pi/4: all four candidates, gamma = 1
for label in ("g1", "g2", "T", "ground_mixture"):
    rec = run(1.0, 10.0, label, controls=False)
    print(f"A1 pi/4 {label:15s} P_S(10) = {rec.populations['S'][-1]:.4f}")

# A2 at pi/4: gamma = 0.5
for label in ("g1", "g2"):
    rf = run(0.5, 10.0, label, controls=False)
    rc = run(0.5, 10.0, label, controls=True)
    print(f"A2 pi/4 {label}: max Vdot = {rf.vdot.max():.4f} max Vdot_a = {rc.vdot.max():.4f}")

# A3: T_a = 5, several gammas, controls on, from g1
for gamma in (0.5, 0.8, 1.0, 1.5, 2.0):
    rc = run(gamma, 5.0, "g1", controls=True)
    print(f"A3 gamma={gamma}: F_S(5) = {rc.v[-1]:.4f}")

# A4: noise deviation, traditional (T=20, no controls) and accelerated (T=10, controls)
for gamma in (0.5, 1.0, 2.0):
    f0t = run(gamma, 20.0, "g1", controls=False, eta=0.0).v[-1]
    f1t = run(gamma, 20.0, "g1", controls=False, eta=0.1).v[-1]
    f0a = run(gamma, 10.0, "g1", controls=True, eta=0.0).v[-1]
    f1a = run(gamma, 10.0, "g1", controls=True, eta=0.1).v[-1]
    print(f"A4 gamma={gamma}: trad drop = {f0t - f1t:.4f} ({f0t:.4f}->{f1t:.4f})  "
          f"accel drop = {f0a - f1a:.4f} ({f0a:.4f}->{f1a:.4f})")

# control field shape at gamma = 0.8 (controls on, from g1)
rc = run(0.8, 10.0, "g1", controls=True)
fmax = np.abs(rc.controls).max(axis=0)
t_at_max = rc.times[np.abs(rc.controls[:, 0]).argmax()]
print("field maxima:", fmax, "argmax t:", t_at_max, "final |f|:", np.abs(rc.controls[-1]))
print("elapsed", time.time() - t0)
