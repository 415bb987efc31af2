"""Scratch: control magnitudes and capped landscape (removed before completion)."""
import math
import time

import numpy as np

from qsteer import TwoAtomParams, LyapunovController, build_two_atom_effective, propagate


def run(g1, delta, mw, cap=None, t_final=30.0):
    p = TwoAtomParams(gamma1=g1, delta=delta, omega_mw=mw, control_cap=cap)
    m = build_two_atom_effective(p)
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, t_final, 0.01, controller=LyapunovController(m), record_stride=10)
    return r.v[-1], np.abs(r.controls).max(axis=0)


t0 = time.time()
print("max |f_n| along trajectories (uncapped):")
for g1, d, mw in [(1.0, 0.6, 0.15), (1.0, 0.4, 0.3), (2.0, 0.5, 0.2), (2.0, 0.4, 0.3), (0.5, 0.0, 0.25)]:
    f, fmax = run(g1, d, mw)
    print(f"  g1={g1} ({d},{mw}): F={f:.4f} max|f|={fmax}")

cap = 1 / math.sqrt(2)
print(f"capped at {cap:.3f}:")
for g1 in (1.0, 2.0):
    for d in (0.2, 0.4, 0.6):
        row = [f"{run(g1, d, mw, cap=cap)[0]:.4f}" for mw in (0.1, 0.15, 0.2, 0.3)]
        print(f"  g1={g1} d={d}: {row}")
print("elapsed", time.time() - t0)
