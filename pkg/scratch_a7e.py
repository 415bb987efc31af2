"""Scratch: traditional long-time landscape (removed before completion)."""
import time

import numpy as np

from qsteer import TwoAtomParams, build_two_atom_effective, propagate


def run(g1, delta, mw, t_final=100.0):
    m = build_two_atom_effective(TwoAtomParams(gamma1=g1, delta=delta, omega_mw=mw))
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, t_final, 0.01, record_stride=100)
    return r.v[-1]


t0 = time.time()
print("effective TRADITIONAL t=100")
for g1 in (0.5, 1.0, 2.0):
    print(f" gamma1={g1}")
    for d in (0.0, 0.2, 0.4, 0.6, 0.8):
        row = [f"{run(g1, d, mw):.4f}" for mw in (0.1, 0.15, 0.2, 0.3)]
        print(f"  d={d}: {row}  [{time.time()-t0:.0f}s]")
