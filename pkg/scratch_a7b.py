"""Scratch: A7 with t=30 (removed before completion)."""
import time

import numpy as np

from qsteer import (
    TwoAtomParams, LyapunovController, build_two_atom_effective,
    build_two_atom_full, propagate,
)


def run(g1, delta, mw, t_final, effective, dt=None):
    params = TwoAtomParams(gamma1=g1, delta=delta, omega_mw=mw)
    m = build_two_atom_effective(params) if effective else build_two_atom_full(params)
    if dt is None:
        dt = 0.01 if effective else 4e-3
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, t_final, dt, controller=LyapunovController(m), record_stride=10)
    return r.v[-1]


t0 = time.time()
points = [(0.5, 0.0, 0.25), (1.0, 0.6, 0.15), (2.0, 0.5, 0.2)]
print("effective, t=30:")
for g1, d, mw in points:
    print(f"  g1={g1} ({d},{mw}): F(30)={run(g1, d, mw, 30.0, True):.4f}")
print("full, t=30:")
for g1, d, mw in points:
    print(f"  g1={g1} ({d},{mw}): F(30)={run(g1, d, mw, 30.0, False):.4f}")

print("effective t=30 neighborhoods:")
for g1, deltas, mws in [
    (1.0, (0.5, 0.55, 0.6, 0.65, 0.7), (0.1, 0.15, 0.2)),
    (2.0, (0.4, 0.45, 0.5, 0.55, 0.6), (0.15, 0.2, 0.25)),
]:
    print(f" gamma1={g1}")
    for d in deltas:
        row = [f"{run(g1, d, mw, 30.0, True):.4f}" for mw in mws]
        print(f"  d={d}: {row}")
print("elapsed", time.time() - t0)
