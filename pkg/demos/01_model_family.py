"""The radial model family: inner radius, boundary NWSS, and recovering R from a measured NWSS."""

from ringserrin.model import (SQRT2, expected_core_radius, invert_tau_inner, model_table, tau_inner,
                              tau_outer)

print("Each core radius R fixes an annulus r_i(R) < |x| < 1 with torsion potential")
print("u_R = (1 - r^2)/2 + R^2 log r, maximal on the circle |x| = R.\n")
print(f"{'R':>5} {'r_i':>12} {'u_max':>10} {'tau_i':>10} {'tau_o':>10}")
for m in model_table([0.1, 0.3, 0.5, 0.7, 0.9]):
    print(f"{m.R:5.2f} {m.r_inner:12.4e} {m.u_max:10.6f} {m.tau_inner:10.6g} {m.tau_outer:10.6f}")

print(f"\nAs R grows the outer NWSS increases from 1 toward sqrt(2) = {SQRT2:.6f}; the inner one decreases toward it from above.")
print(f"tau_o(0) = {tau_outer(0.0)}, tau_i(1) = {tau_inner(1.0)}")

tau = 1.9
R = invert_tau_inner(tau)
print(f"\nA boundary with NWSS {tau} is an inner boundary (above sqrt(2)); its expected core radius is {R:.10f}")
print(f"expected_core_radius picks the branch automatically: {expected_core_radius(tau):.10f}")
