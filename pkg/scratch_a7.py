"""Scratch: A7 optimal-parameter points (removed before completion)."""
import time

import numpy as np

from qsteer import (
    TwoAtomParams, LyapunovController, build_two_atom_effective,
    build_two_atom_full, propagate,
)


def run_eff(g1, delta, mw, t_final=20.0, dt=0.01):
    m = build_two_atom_effective(TwoAtomParams(gamma1=g1, delta=delta, omega_mw=mw))
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, t_final, dt, controller=LyapunovController(m), record_stride=10)
    return r.v[-1], r.v.max()


t0 = time.time()
print("paper argmax points, effective model, mu=(1,1.5), t=20")
for g1, delta, mw in [(0.5, 0.0, 0.25), (1.0, 0.6, 0.15), (2.0, 0.5, 0.2)]:
    final, peak = run_eff(g1, delta, mw)
    print(f"  g1={g1} d={delta} mw={mw}: F(20)={final:.4f} maxF={peak:.4f}")

print("neighborhood scan gamma1=0.5")
for delta in (0.0, 0.1, 0.2):
    row = []
    for mw in (0.15, 0.2, 0.25, 0.3):
        final, _ = run_eff(0.5, delta, mw)
        row.append(f"{final:.4f}")
    print(f"  d={delta}: {row}")

print("neighborhood scan gamma1=1.0")
for delta in (0.45, 0.55, 0.6, 0.65):
    row = []
    for mw in (0.1, 0.15, 0.2):
        final, _ = run_eff(1.0, delta, mw)
        row.append(f"{final:.4f}")
    print(f"  d={delta}: {row}")

print("neighborhood scan gamma1=2.0")
for delta in (0.4, 0.5, 0.6):
    row = []
    for mw in (0.15, 0.2, 0.25):
        final, _ = run_eff(2.0, delta, mw)
        row.append(f"{final:.4f}")
    print(f"  d={delta}: {row}")

# full-model spot check at one argmax for cross-validation
m = build_two_atom_full(TwoAtomParams(gamma1=0.5, delta=0.0, omega_mw=0.25))
rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
r = propagate(m, rho0, 20.0, 4e-3, controller=LyapunovController(m), record_stride=10)
print(f"full-model spot g1=0.5 d=0 mw=0.25: F(20)={r.v[-1]:.4f}")
print("elapsed", time.time() - t0)
