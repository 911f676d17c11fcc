"""Geometric checks on models (where they are equalities) and on perturbed domains (strict)."""

from ringserrin import checks as ck
from ringserrin.domains import perturbed_domains
from ringserrin.model import inner_radius
from ringserrin.solver import RingDomain, solve


def show(name, f):
    out = ck.run_suite(f, full=True)
    print(f"\n{name}: max set is {out['max_set']['kind']}")
    for reg in out["regions"]:
        print(f"  region {reg['side']:5s} tau={reg['tau']:.6f} R={reg['R']:.6f} "
              f"Pohozaev class={reg['pohozaev_class']}")
        for c in reg["checks"]:
            status = "n/a " if not c["applicable"] else ("pass" if c["passed"] else "FAIL")
            print(f"    {c['name']:24s} {status} worst={c['worst']:+.2e}")
    p = out["pinch"]
    print(f"  expected core radii R_o={p['R_outer']:.6f} R_i={p['R_inner']:.6f} gap={p['gap']:+.2e}")


show("model annulus R=0.6", solve(RingDomain.annulus(inner_radius(0.6)), (96, 64)))
for nd in perturbed_domains()[2:]:
    show(nd.name, solve(nd.domain, (96, 64)))
print("\nU_monotone and divergence_inequality are reported as n/a: they need region NWSS <= 1,")
print("which no ring region attains.")
