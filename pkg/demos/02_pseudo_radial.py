"""The pseudo-radial function: reading the model radius back off a potential value."""

import numpy as np

from ringserrin.model import model_grad_abs, model_u, umax
from ringserrin.pseudo_radial import Branch, W, expansion_check, psi

R = 0.5
print(f"On the model with R = {R}, u_R is increasing for r < R and decreasing for r > R.")
print("psi inverts each monotone piece, so W_R(u) = |grad u_R|^2 at the point where u_R = u.\n")
for r in (0.3, 0.45, 0.55, 0.8):
    b = Branch.MINUS if r < R else Branch.PLUS
    u = model_u(R, r)
    print(f"r = {r:4.2f}: u = {u:.10f}, psi(u) = {psi(R, b, u):.12f}, "
          f"W_R(u) = {W(R, b, u):.12f}, |grad u_R|^2 = {model_grad_abs(R, r) ** 2:.12f}")

print(f"\nNear the maximum, W_R ~ 4 q -+ 8/(3R) q^1.5 with q = u_max - u (u_max = {umax(R):.6f}):")
for b in (Branch.PLUS, Branch.MINUS):
    fit = expansion_check(R, b)
    print(f"  {b.value:5s}: a0 = {fit.a0:.6f}, a1 = {fit.a1:+.5f} (expected {fit.a1_expected:+.5f})")

u = np.linspace(0.0, umax(R), 5)
print("\nVectorized evaluation on the outer branch:", np.round(psi(R, Branch.PLUS, u), 6))
