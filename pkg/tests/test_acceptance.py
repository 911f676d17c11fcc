"""Acceptance criteria; each test prints one PASS/FAIL line with the measured values."""

import math
import time

import numpy as np
import pytest

from ringserrin import checks as ck
from ringserrin import continuation as ct
from ringserrin import spectrum as spc
from ringserrin.domains import perturbed_domains
from ringserrin.model import (SQRT2, inner_radius, invert_tau_inner, invert_tau_outer,
                              model_u, tau_inner, tau_outer, umax)
from ringserrin.pseudo_radial import Branch, expansion_check, psi
from ringserrin.solver import RingDomain, solve

MODEL_RES = {0.3: (96, 192), 0.5: (96, 64), 0.7: (96, 64), 0.9: (96, 64)}
PERTURBED_RES = (96, 64)


def report(capsys, n, ok, runtime, limit, text):
    ok = bool(ok) and runtime < limit
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n:2d} ({runtime:.2f} s / {limit:g} s): {text}")
    return ok


def model_field(R):
    return solve(RingDomain.annulus(inner_radius(R)), MODEL_RES[R])


def perturbed_fields():
    return [(nd.name, solve(nd.domain, PERTURBED_RES)) for nd in perturbed_domains()]


def U_closed_form(R, side, t):
    p = psi(R, Branch.PLUS if side == "outer" else Branch.MINUS, t)
    return 2 * math.pi * abs(p * p - R * R) / (umax(R) - t)


def test_criterion_01_model_calibration(capsys):
    t0 = time.perf_counter()
    Rs = [round(0.1 * i, 12) for i in range(1, 10)]
    res = max(abs(1 - inner_radius(R) ** 2 + 2 * R * R * math.log(inner_radius(R))) for R in Rs)
    rt_o = max(abs(invert_tau_outer(tau_outer(R)) - R) for R in Rs)
    rt_i = max(abs(invert_tau_inner(tau_inner(R)) - R) for R in Rs)
    exact = tau_outer(0.0) == 1.0 and tau_inner(1.0) == SQRT2
    ok = res < 1e-12 and rt_o < 1e-10 and rt_i < 1e-10 and exact
    assert report(capsys, 1, ok, time.perf_counter() - t0, 1.0,
                  f"r_i residual {res:.1e}, tau_o round trip {rt_o:.1e}, tau_i round trip {rt_i:.1e}, "
                  f"endpoint values exact={exact}")


def test_criterion_02_solver_exactness(capsys):
    t0 = time.perf_counter()
    R = 0.5
    ri = inner_radius(R)
    f = solve(RingDomain.annulus(ri), (64, 48))
    err_u = float(np.abs(f.U - model_u(R, f.r)).max())
    err_o = float(np.abs(f.normal_derivative_outer - (1 - R * R)).max())
    err_i = float(np.abs(f.normal_derivative_inner - (R * R - ri * ri) / ri).max())
    ok = max(err_u, err_o, err_i) < 1e-8
    assert report(capsys, 2, ok, time.perf_counter() - t0, 5.0,
                  f"u error {err_u:.1e}, outer derivative error {err_o:.1e}, inner derivative error {err_i:.1e}")


def test_criterion_03_gradient_estimate(capsys):
    t0 = time.perf_counter()
    model_diff, rigid = 0.0, True
    for R in MODEL_RES:
        for rv in ck.regions(model_field(R)):
            rep = ck.check_gradient_estimate(rv)
            model_diff = max(model_diff, rep.details["max_abs_diff"])
            rigid &= rep.details["rigid"]
    pert_worst, strict, n_dom = -math.inf, True, 0
    for name, f in perturbed_fields():
        n_dom += 1
        for rv in ck.regions(f):
            rep = ck.check_gradient_estimate(rv)
            pert_worst = max(pert_worst, rep.worst)
            strict &= rep.details["strict"] and rep.passed
    ok = model_diff < 1e-6 and rigid and pert_worst <= 1e-6 and strict and n_dom >= 3
    assert report(capsys, 3, ok, time.perf_counter() - t0, 30.0,
                  f"models max|W - W_R| {model_diff:.1e} rigid={rigid}; {n_dom} perturbed domains "
                  f"max(W - W_R) {pert_worst:.1e} strict interior={strict}")


def test_criterion_04_pohozaev(capsys):
    t0 = time.perf_counter()
    model_res, agree = 0.0, True
    for R in MODEL_RES:
        for rv in ck.regions(model_field(R)):
            model_res = max(model_res, ck.check_pohozaev(rv).worst)
            agree &= ck.classify_region_by_pohozaev(rv) == rv.side.value
    pert_res = 0.0
    for name, f in perturbed_fields():
        for rv in ck.regions(f):
            pert_res = max(pert_res, ck.check_pohozaev(rv).worst)
    ok = model_res < 1e-6 and pert_res < 1e-4 and agree
    assert report(capsys, 4, ok, time.perf_counter() - t0, 30.0,
                  f"relative residual models {model_res:.1e}, perturbed {pert_res:.1e}; "
                  f"classification agrees with side={agree}")


def test_criterion_05_curvature_length_pinch(capsys):
    t0 = time.perf_counter()
    sat = 0.0
    for R in MODEL_RES:
        f = model_field(R)
        for rv in ck.regions(f):
            sat = max(sat, abs(ck.check_boundary_curvature_bound(rv).worst),
                      abs(ck.check_sigma_curvature_bound(rv).worst),
                      max(abs(m) for m in ck.check_length_bounds(rv).details["margins"].values()))
        p = ck.check_pinch(f)
        sat = max(sat, abs(p.slack_lower), abs(p.slack_upper), abs(p.gap))
    holds, slack, gaps, curve_gaps = True, [], [], []
    for name, f in perturbed_fields():
        for rv in ck.regions(f):
            for rep in (ck.check_boundary_curvature_bound(rv), ck.check_sigma_curvature_bound(rv),
                        ck.check_length_bounds(rv)):
                if rep.applicable:
                    holds &= rep.passed
                    slack.append(-rep.worst)
        p = ck.check_pinch(f)
        if p.applicable:
            holds &= p.passed
            curve_gaps.append(p.gap)
        gaps.append(f"{name}:{p.gap:+.3e}{'' if p.applicable else ' (max set is points)'}")
    ok = sat < 1e-5 and holds and curve_gaps and min(curve_gaps) > 0
    assert report(capsys, 5, ok, time.perf_counter() - t0, 60.0,
                  f"model saturation {sat:.1e}; perturbed bounds hold={holds} min slack {min(slack):.1e}; "
                  f"R_o - R_i: {', '.join(gaps)}")


def test_criterion_06_spectrum_identities(capsys):
    t0 = time.perf_counter()
    k1 = max(max(abs(spc.eigenvalues(lam, 1)[0] + 2), abs(spc.eigenvalues(lam, 1)[1]))
             for lam in np.linspace(0.01, 0.99, 50))
    small = {k: spc.mu1(1e-6, k) - (k - 1) for k in range(2, 7)}
    disc = 0.0
    for lam in np.linspace(0.01, 0.99, 100):
        for k in range(100):
            t = spc.trace_det(lam, k)
            disc = max(disc, abs(t.disc - (t.T * t.T - 4 * t.D)) / max(1.0, t.T * t.T))
    worst_small = max(abs(v) for v in small.values())
    ok = k1 < 1e-12 and worst_small < 1e-2 and disc < 1e-10
    assert report(capsys, 6, ok, time.perf_counter() - t0, 1.0,
                  f"k=1 eigenvalue error {k1:.1e}; mu1(1e-6,k) - (k-1) = "
                  f"{', '.join(f'{v:+.4f}' for v in small.values())} (k=2..6, tolerance 1e-2); "
                  f"discriminant mismatch {disc:.1e}")


def test_criterion_07_bifurcation_points(capsys):
    t0 = time.perf_counter()
    pts = [spc.find_bifurcation_point(k) for k in range(2, 11)]
    zcs = [spc.verify_zero_condition(p.lam, p.k) for p in pts]
    mu = max(abs(p.mu1) for p in pts)
    incr = all(b.lam > a.lam for a, b in zip(pts, pts[1:]))
    dmu = max(p.dmu1 for p in pts)
    c3 = max(abs(z.cond3_residual) for z in zcs)
    c5 = {p.k: z.cond5_margin for p, z in zip(pts, zcs)}
    ok = mu < 1e-12 and incr and dmu < 0 and c3 < 1e-8 and min(c5.values()) > 0
    bad = [f"k={k}: {v:+.4e}" for k, v in c5.items() if v <= 0]
    assert report(capsys, 7, ok, time.perf_counter() - t0, 2.0,
                  f"max|mu1(lam_k)| {mu:.1e}, increasing={incr}, max dmu1/dlam {dmu:.3e}, cond3 {c3:.1e}, "
                  f"cond5 margin min {min(c5.values()):+.4e} (nonpositive at {', '.join(bad) or 'none'}); "
                  f"cond4 margin min {min(z.cond4_margin for z in zcs):+.4e}")


def test_criterion_08_keystone(capsys):
    t0 = time.perf_counter()
    l2, l4 = spc.find_bifurcation_point(2).lam, spc.find_bifurcation_point(4).lam
    worst = {}
    for lam, k in ((0.4, 2), (0.5, 2), (0.5, 4), (0.6, 2), (l2, 2), (l4, 4)):
        M = spc.matrix(lam, k)
        F = ct.fd_linearization(lam, k, resolution=(96, 64))
        worst[(round(lam, 5), k)] = float(np.max(np.abs(F - M) / np.abs(M)))
    ok = max(worst.values()) < 1e-4
    assert report(capsys, 8, ok, time.perf_counter() - t0, 180.0,
                  "entrywise relative error " + ", ".join(f"{k}: {v:.1e}" for k, v in worst.items()))


def test_criterion_09_branch(capsys):
    t0 = time.perf_counter()
    br = ct.continue_branch(k=2, n_steps=3, ds=1e-2, group=ct.SymmetryGroup(2))
    certs = [ct.certify_branch_point(p) for p in br.sorted_points()]
    good = [(p, c) for p, c in zip(br.sorted_points(), certs)
            if p.s != 0 and c.passed and p.residual_sup < 1e-8 and p.mode_amplitude != 0
            and max(c.gradient_spread_inner, c.gradient_spread_outer) <= 10 * c.solve_residual]
    npos = sum(p.s > 0 for p, _ in good)
    nneg = sum(p.s < 0 for p, _ in good)
    res = max(p.residual_sup for p in br.points)
    amp = min(abs(p.mode_amplitude) for p in br.points if p.s != 0)
    ok = npos >= 3 and nneg >= 3 and not br.truncated
    assert report(capsys, 9, ok, time.perf_counter() - t0, 300.0,
                  f"certified points s>0: {npos}, s<0: {nneg}; max residual {res:.1e}; "
                  f"min |amplitude| {amp:.2e}; lambda range [{min(p.lam for p in br.points):.6f}, "
                  f"{max(p.lam for p in br.points):.6f}]")


def test_criterion_10_expansions(capsys):
    t0 = time.perf_counter()
    a0, a1 = 0.0, 0.0
    for R in (0.3, 0.5, 0.7, 0.9):
        for b in (Branch.PLUS, Branch.MINUS):
            fit = expansion_check(R, b)
            a0 = max(a0, abs(fit.a0 - 4.0))
            a1 = max(a1, fit.relerr_a1)
    kap = 0.0
    for R in (0.5, 0.7):
        for rv in ck.regions(model_field(R)):
            rep = ck.check_sigma_expansion(rv)
            kap = max(kap, max(abs(d["c"] - d["kappa"]) / abs(d["kappa"]) for d in rep.details["fits"]))
    ok = a0 < 1e-3 and a1 < 0.05 and kap < 0.05
    assert report(capsys, 10, ok, time.perf_counter() - t0, 30.0,
                  f"|a0 - 4| {a0:.1e}, 3/2-power relative error {a1:.1e}, kappa fit relative error {kap:.1e}")


def test_criterion_11_U_monotone(capsys):
    t0 = time.perf_counter()
    oracle, model_inc = 0.0, -math.inf
    for R in (0.5, 0.7, 0.9):
        for rv in ck.regions(model_field(R)):
            ts, U = ck.level_quotients(rv, 40)
            ref = np.array([U_closed_form(R, rv.side.value, t) for t in ts])
            oracle = max(oracle, float(np.abs(U - ref).max() / ref.max()))
            model_inc = max(model_inc, float(np.max(np.diff(U) / U[:-1])))
    pert_inc, taus = -math.inf, []
    for name, f in perturbed_fields():
        for rv in ck.regions(f):
            _, U = ck.level_quotients(rv, 40)
            pert_inc = max(pert_inc, float(np.max(np.diff(U) / U[:-1])))
            taus.append(rv.tau)
    ok = oracle < 1e-6 and model_inc <= 1e-8 and pert_inc <= 1e-6
    assert report(capsys, 11, ok, time.perf_counter() - t0, 30.0,
                  f"closed-form match {oracle:.1e}; largest relative step up: models {model_inc:+.3e}, "
                  f"perturbed {pert_inc:+.3e} (region NWSS range [{min(taus):.3f}, {max(taus):.3f}])")
