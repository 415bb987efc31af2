"""Scratch: A7 landscape mapping (removed before completion)."""
import time

import numpy as np

from qsteer import (
    TwoAtomParams, LyapunovController, build_two_atom_effective,
    build_two_atom_full, propagate,
)


def run(g1, delta, mw, t_final=30.0, effective=True, controls=True):
    params = TwoAtomParams(gamma1=g1, delta=delta, omega_mw=mw)
    m = build_two_atom_effective(params) if effective else build_two_atom_full(params)
    dt = 0.01 if effective else 4e-3
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    ctl = LyapunovController(m) if controls else None
    r = propagate(m, rho0, t_final, dt, controller=ctl, record_stride=20)
    return r.v[-1]


t0 = time.time()
print("effective accelerated t=30, broad grid")
for g1 in (1.0, 2.0):
    print(f" gamma1={g1}")
    for d in (0.0, 0.2, 0.4, 0.6, 0.8):
        row = [f"{run(g1, d, mw):.4f}" for mw in (0.1, 0.2, 0.3, 0.4, 0.5)]
        print(f"  d={d}: {row}")

print("effective TRADITIONAL t=30, broad grid")
for g1 in (0.5, 1.0, 2.0):
    print(f" gamma1={g1}")
    for d in (0.0, 0.2, 0.4, 0.6, 0.8):
        row = [f"{run(g1, d, mw, controls=False):.4f}" for mw in (0.1, 0.2, 0.3, 0.4, 0.5)]
        print(f"  d={d}: {row}")
print("elapsed", time.time() - t0)
