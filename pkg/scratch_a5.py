"""Scratch: A5/A6 gamma grids (removed before completion)."""
import time

import numpy as np

from qsteer import (
    TwoAtomParams, LyapunovController, build_two_atom_effective,
    build_two_atom_full, propagate,
)

t0 = time.time()
print("A5 traditional, full model, t<=30, dt=4e-3")
best = (None, -1.0)
for g1 in (0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0):
    m = build_two_atom_full(TwoAtomParams(gamma1=g1))
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, 30.0, 4e-3, record_stride=5)
    mx = r.populations["S"].max()
    if mx > best[1]:
        best = (g1, mx)
    print(f"  gamma1={g1:<5} maxP_S={mx:.4f}")
print("A5 best:", best, f"{time.time()-t0:.0f}s")

print("A5 effective-model comparison")
for g1 in (0.5, 1.0, 2.0):
    m = build_two_atom_effective(TwoAtomParams(gamma1=g1))
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, 30.0, 4e-3, record_stride=5)
    print(f"  gamma1={g1:<5} maxP_S={r.populations['S'].max():.4f}")

print("A6 accelerated, full model, mu=(1,1.5), t<=20")
for g1 in (0.5, 1.0, 2.0):
    m = build_two_atom_full(TwoAtomParams(gamma1=g1))
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, 20.0, 4e-3, controller=LyapunovController(m), record_stride=5)
    print(f"  gamma1={g1:<5} maxP_S={r.populations['S'].max():.4f} F(20)={r.v[-1]:.4f}")
print("elapsed", time.time() - t0)
