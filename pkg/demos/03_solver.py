"""Spectral torsion solver on ring domains, checked against two exact solutions."""

import numpy as np

from ringserrin.domains import elliptic_core
from ringserrin.model import inner_radius, model_u
from ringserrin.solver import RingDomain, solve

R = 0.5
f = solve(RingDomain.annulus(inner_radius(R)), (64, 48))
print(f"Annulus with R = {R}: method={f.info.method}, sup error vs closed form "
      f"{np.abs(f.U - model_u(R, f.r)).max():.1e}")
print(f"  outer |grad u| = {f.normal_derivative_outer.mean():.12f} (1 - R^2 = {1 - R * R})")

e = elliptic_core(0.6, 1.06)
f = solve(e.domain(), (96, 64))
print(f"\nElliptic-core domain (exact non-radial solution): method={f.info.method}, "
      f"iterations={f.info.iterations}, sup error {np.abs(f.U - e.u(f.x, f.y)).max():.1e}")
print(f"  boundary NWSS: inner {f.nwss('inner'):.6f}, outer {f.nwss('outer'):.6f}")
print(f"  u_max {f.u_max:.10f} (exact {e.u_max:.10f}), area {f.integrate(np.ones_like(f.U)):.10f}")

dom = RingDomain(0.4, [0.0, 0.0, 0.02], outer_sin=[0.0, 0.0, 0.0, 0.01])
for res in ((32, 24), (64, 40), (96, 64)):
    g = solve(dom, res)
    print(f"Fourier-perturbed ring at {res}: u_max = {g.u_max:.12f}")
