"""Scratch: two-atom checks (removed before completion)."""
import time

import numpy as np

from qsteer import (
    TwoAtomParams, LyapunovController, build_two_atom_effective,
    build_two_atom_full, propagate, verify_stationarity,
)

p = TwoAtomParams()
mf = build_two_atom_full(p)
me = build_two_atom_effective(p)
print("dims:", mf.dim, me.dim)

rep = verify_stationarity(
    me, me.named_states["S"],
    [me.named_states[k] for k in ("T", "psi3", "psi4", "D")],
)
print("effective verify:", rep.passed)
repf = verify_stationarity(
    mf, mf.named_states["S"],
    [mf.named_states[k] for k in ("T", "psi3", "psi4", "D")],
)
print("full verify:", repf.passed, "H residual:", repf.h_residual)

# timing + dt accuracy for one full trajectory
rho0 = np.outer(mf.named_states["psi1"], mf.named_states["psi1"].conj())
t0 = time.time()
r1 = propagate(mf, rho0, 30.0, 1e-3, record_stride=20)
t1 = time.time()
print(f"full t=30 dt=1e-3: {t1 - t0:.1f}s  P_S(30)={r1.populations['S'][-1]:.6f} "
      f"maxP_S={r1.populations['S'].max():.6f} drift={r1.max_trace_drift:.2e}")
r2 = propagate(mf, rho0, 30.0, 4e-3, record_stride=5)
t2 = time.time()
print(f"full t=30 dt=4e-3: {t2 - t1:.1f}s  P_S(30)={r2.populations['S'][-1]:.6f} "
      f"maxP_S={r2.populations['S'].max():.6f}")

# effective comparison
rho0e = np.outer(me.named_states["psi1"], me.named_states["psi1"].conj())
re_ = propagate(me, rho0e, 30.0, 4e-3, record_stride=5)
t3 = time.time()
dev = np.abs(re_.populations["S"] - r2.populations["S"]).max()
print(f"eff t=30 dt=4e-3: {t3 - t2:.1f}s  max |dP_S| full-vs-eff = {dev:.4f}")

# lambda = 20 comparison (Zeno improvement)
p20 = TwoAtomParams(lambda_c=20.0)
mf20 = build_two_atom_full(p20)
r20 = propagate(mf20, rho0, 30.0, 1e-3, record_stride=20)
t4 = time.time()
re20 = propagate(me, rho0e, 30.0, 1e-3, record_stride=20)
dev20 = np.abs(re20.populations["S"] - r20.populations["S"]).max()
print(f"lambda=20 full: {t4 - t3:.1f}s  max |dP_S| = {dev20:.4f}")
print("elapsed total", time.time() - t0)
