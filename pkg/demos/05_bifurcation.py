"""Spectrum of the linearized problem and the bifurcation radii lambda_k."""

from ringserrin import spectrum as spc

print("mu_1(lambda, k) on a few inner radii (k = 1 always gives -2):")
for lam in (0.1, 0.3, 0.5, 0.7):
    print(f"  lambda={lam:.1f}: " + "  ".join(f"k={k}:{spc.mu1(lam, k):+8.4f}" for k in range(1, 6)))

print("\nBifurcation radii: mu_1(lambda_k, k) = 0 with transversal crossing.")
for k in range(2, 11):
    bp = spc.find_bifurcation_point(k)
    zc = spc.verify_zero_condition(bp.lam, k)
    print(f"  k={k:2d} lambda_k={bp.lam:.12f} R={bp.R:.6f} dmu1/dlambda={bp.dmu1:+.4f} "
          f"cond4 margin={zc.cond4_margin:+.4f} cond5 margin={zc.cond5_margin:+.4f}")
print("\nAt k=2 the sufficient condition cond5 is negative while cond4 (the actual")
print("transversality condition) stays positive, so the crossing is still transversal.")
