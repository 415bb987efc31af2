"""Scratch: A7 full-model landscape (removed before completion)."""
import time

import numpy as np

from qsteer import TwoAtomParams, LyapunovController, build_two_atom_full, propagate


def run(g1, delta, mw, t_final=30.0):
    m = build_two_atom_full(TwoAtomParams(gamma1=g1, delta=delta, omega_mw=mw))
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, t_final, 4e-3,
                  controller=LyapunovController(m), record_stride=50)
    return r.v[-1]


t0 = time.time()
print("FULL accelerated t=30")
for g1 in (0.5, 1.0, 2.0):
    print(f" gamma1={g1}")
    for d in (0.0, 0.2, 0.4, 0.6):
        row = [f"{run(g1, d, mw):.4f}" for mw in (0.1, 0.15, 0.2, 0.3)]
        print(f"  d={d}: {row}  [{time.time()-t0:.0f}s]")
