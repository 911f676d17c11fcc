"""Non-radial constant-gradient ring domains, continued from the first bifurcation point."""

from ringserrin.continuation import certify_branch_point, continue_branch, fd_linearization
from ringserrin import spectrum as spc

lam2 = spc.find_bifurcation_point(2).lam
print("Finite-difference linearization of the shooting residual vs the closed form at lambda_2:")
print(fd_linearization(lam2, 2))
print(spc.matrix(lam2, 2))

br = continue_branch(k=2, n_steps=3, ds=1e-2)
print(f"\nBranch from lambda_2 = {br.lam_k:.12f} (null vector {br.null.z}):")
for p in br.sorted_points():
    c = certify_branch_point(p)
    a2 = p.v.coefficient(2)
    print(f"  s={p.s:+.2f} lambda={p.lam:.10f} cos(2 theta) coefficients ({a2[0]:+.5f}, {a2[1]:+.5f}) "
          f"residual={p.residual_sup:.1e} certified={c.passed} max set={c.max_set_kind}")
print("\nlambda(s) - lambda_2 grows like s^2, and s -> -s is the rotation by pi/2.")
