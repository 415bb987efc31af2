"""Scratch: truncation + step-halving (removed before completion)."""
import time

import numpy as np

from qsteer import TwoAtomParams, build_two_atom_full, propagate

t0 = time.time()
vals = {}
for n_max in (1, 2):
    m = build_two_atom_full(TwoAtomParams(n_max=n_max))
    rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
    r = propagate(m, rho0, 30.0, 4e-3, record_stride=50)
    vals[n_max] = r.populations["S"][-1]
    print(f"n_max={n_max} dim={m.dim}: P_S(30)={vals[n_max]:.6f}  [{time.time()-t0:.0f}s]")
print("truncation shift:", abs(vals[2] - vals[1]))

# step halving on the two-atom full model, short horizon
m = build_two_atom_full(TwoAtomParams())
rho0 = np.outer(m.named_states["psi1"], m.named_states["psi1"].conj())
a = propagate(m, rho0, 2.0, 1e-3, record_stride=2000).populations["S"][-1]
b = propagate(m, rho0, 2.0, 5e-4, record_stride=4000).populations["S"][-1]
print(f"step halving two-atom: {abs(a - b):.2e}")
print("elapsed", time.time() - t0)
