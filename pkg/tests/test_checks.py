import dataclasses
import json
import math

import numpy as np
import pytest

from ringserrin import checks as ck
from ringserrin.model import SQRT2, BranchKind, inner_radius, tau_inner, tau_outer, umax
from ringserrin.pseudo_radial import Branch, psi

MODEL_RS = (0.5, 0.7, 0.9)


def U_closed_form(R, side, t):
    p = psi(R, Branch.PLUS if side == "outer" else Branch.MINUS, t)
    return 2 * math.pi * abs(p * p - R * R) / (umax(R) - t)


# --------------------------------------------------------------------- models

@pytest.mark.parametrize("R", MODEL_RS)
def test_model_regions_and_calibration(model_fields, R):
    f = model_fields[R]
    ms = ck.locate_max_set(f)
    assert ms.kind is ck.MaxSetKind.CURVE
    rin, rout = ck.regions(f, ms)
    assert rin.side is ck.Side.INNER and rout.side is ck.Side.OUTER
    assert rin.R == pytest.approx(R, abs=1e-8) and rout.R == pytest.approx(R, abs=1e-10)
    assert rin.tau == pytest.approx(tau_inner(R), rel=1e-10)
    assert rout.tau == pytest.approx(tau_outer(R), rel=1e-12)
    assert rin.branch is BranchKind.INNER and rout.branch is BranchKind.OUTER


@pytest.mark.parametrize("R", MODEL_RS)
def test_model_gradient_estimate_is_rigid(model_fields, R):
    for rv in ck.regions(model_fields[R]):
        rep = ck.check_gradient_estimate(rv)
        assert rep.passed and rep.details["max_abs_diff"] < 1e-6 and rep.details["rigid"]


@pytest.mark.parametrize("R", MODEL_RS)
def test_model_curvature_bounds_saturated(model_fields, R):
    for rv in ck.regions(model_fields[R]):
        b = ck.check_boundary_curvature_bound(rv)
        s = ck.check_sigma_curvature_bound(rv)
        assert b.passed and abs(b.worst) < 1e-5
        assert s.passed and abs(s.worst) < 1e-5


@pytest.mark.parametrize("R", MODEL_RS)
def test_model_pinch_saturated(model_fields, R):
    p = ck.check_pinch(model_fields[R])
    assert p.applicable and p.passed
    assert abs(p.slack_lower) < 1e-5 and abs(p.slack_upper) < 1e-5 and abs(p.gap) < 1e-5


@pytest.mark.parametrize("R", MODEL_RS)
def test_model_length_bounds_saturated(model_fields, R):
    for rv in ck.regions(model_fields[R]):
        rep = ck.check_length_bounds(rv)
        assert rep.passed
        assert set(rep.details["margins"]) == {"gamma_vs_circle", "sigma_vs_core", "sigma_vs_gamma"}
        assert max(abs(v) for v in rep.details["margins"].values()) < 1e-5


@pytest.mark.parametrize("R", MODEL_RS)
def test_model_pohozaev_and_classification(model_fields, R):
    for rv in ck.regions(model_fields[R]):
        rep = ck.check_pohozaev(rv)
        assert rep.worst < 1e-6
        assert rep.details["lhs"] < 0
        assert ck.classify_region_by_pohozaev(rv) == rv.side.value


def test_pohozaev_threshold_is_excluded(model_fields):
    rv = ck.regions(model_fields[0.5])[1]
    with pytest.raises(ck.PohozaevThresholdError):
        ck.classify_region_by_pohozaev(dataclasses.replace(rv, tau=SQRT2))


@pytest.mark.parametrize("R", MODEL_RS)
def test_model_crucial_identity_vanishes(model_fields, R):
    for rv in ck.regions(model_fields[R]):
        rep = ck.check_crucial_identity(rv)
        assert rep.passed and rep.worst < 1e-6


def test_model_sigma_expansion(model_fields):
    for rv in ck.regions(model_fields[0.5]):
        rep = ck.check_sigma_expansion(rv)
        assert rep.passed
        for fit in rep.details["fits"]:
            assert fit["kappa"] == pytest.approx((1 if rv.side is ck.Side.INNER else -1) / 0.5, rel=1e-8)


@pytest.mark.parametrize("R", MODEL_RS)
def test_model_level_quotients_match_closed_form(model_fields, R):
    for rv in ck.regions(model_fields[R]):
        ts, U = ck.level_quotients(rv)
        ref = np.array([U_closed_form(R, rv.side.value, t) for t in ts])
        assert np.abs(U - ref).max() / ref.max() < 1e-6


def test_U_monotonicity_not_implied_on_rings(model_fields):
    # ring regions have NWSS > 1, so the check is reported but not applicable
    for rv in ck.regions(model_fields[0.5]):
        rep = ck.check_U_monotone(rv)
        assert not rep.applicable
        assert rep.details["U"][0] == pytest.approx(U_closed_form(0.5, rv.side.value, 0.0), rel=1e-8)


def test_divergence_quantity_on_models(model_fields):
    R = 0.5
    f = model_fields[R]
    rv = ck.region(f, ck.Side.OUTER)
    rep = ck.check_divergence_inequality(rv)
    assert not rep.applicable
    # attained on the outer circle: (1 - R^2)^2 - 2 u_max
    assert rep.worst == pytest.approx((1 - R * R) ** 2 - 2 * umax(R), rel=1e-9)


def test_region_masks_are_side_consistent(model_fields):
    f = model_fields[0.5]
    rin, rout = ck.regions(f)
    r = f.r
    assert np.all(r[rin.node_mask()] <= 0.5 + 1e-8)
    assert np.all(r[rout.node_mask()] >= 0.5 - 1e-8)


def test_report_serializes(model_fields):
    out = ck.run_suite(model_fields[0.5], full=True)
    json.dumps(out)
    assert out["max_set"]["kind"] == "curve"
    assert all(c["passed"] for r in out["regions"] for c in r["checks"] if c["applicable"])


# ----------------------------------------------------------------- perturbed

def test_max_set_kinds(perturbed_fields):
    kinds = {n: ck.locate_max_set(f).kind for n, (_, f) in perturbed_fields.items()}
    assert kinds["fourier_inner_cos2"] is ck.MaxSetKind.POINTS
    assert kinds["fourier_outer_cos3"] is ck.MaxSetKind.POINTS
    assert kinds["ellipse_core_R0.6"] is ck.MaxSetKind.CURVE
    assert kinds["ellipse_core_R0.7"] is ck.MaxSetKind.CURVE


def test_gradient_estimate_strict_on_perturbed(perturbed_fields):
    for name, (_, f) in perturbed_fields.items():
        for rv in ck.regions(f):
            rep = ck.check_gradient_estimate(rv)
            assert rep.passed, name
            assert rep.details["strict"] and not rep.details["rigid"], name


def test_gradient_estimate_inner_region_of_cos2_perturbation(perturbed_fields):
    _, f = perturbed_fields["fourier_inner_cos2"]
    rv = ck.regions(f)[0]
    samples = ck.gradient_samples(rv)
    interior = (samples["s"] > 0) & (samples["s"] < 1)
    assert np.all(samples["W"][interior] < samples["W_R"][interior])


def test_perturbed_pohozaev(perturbed_fields):
    for name, (_, f) in perturbed_fields.items():
        for rv in ck.regions(f):
            assert ck.check_pohozaev(rv).worst < 1e-4, name


def test_perturbed_curvature_and_length_bounds_have_slack(perturbed_fields):
    for name, (_, f) in perturbed_fields.items():
        for rv in ck.regions(f):
            b = ck.check_boundary_curvature_bound(rv)
            assert b.passed and b.worst < 0, name
            s = ck.check_sigma_curvature_bound(rv)
            if s.applicable:
                assert s.passed and s.worst < 0, name
            ln = ck.check_length_bounds(rv)
            if ln.applicable:
                assert ln.passed, name


def test_ellipse_pinch_and_core_gap(perturbed_fields):
    for name in ("ellipse_core_R0.6", "ellipse_core_R0.7"):
        _, f = perturbed_fields[name]
        p = ck.check_pinch(f)
        assert p.applicable and p.passed
        assert p.gap > 1e-3
        assert p.slack_lower > 0 and p.slack_upper > 0


def test_points_domains_record_gap_without_claim(perturbed_fields):
    _, f = perturbed_fields["fourier_inner_cos2"]
    p = ck.check_pinch(f)
    assert not p.applicable and p.passed is None
    assert math.isfinite(p.gap)


def test_ellipse_crucial_identity_and_expansion(perturbed_fields):
    for name in ("ellipse_core_R0.6", "ellipse_core_R0.7"):
        _, f = perturbed_fields[name]
        for rv in ck.regions(f):
            ci = ck.check_crucial_identity(rv)
            assert ci.worst < 1e-4 and ci.details["sign_ok"], name
            assert ck.check_sigma_expansion(rv).passed, name


def test_check_violation_decreases_under_refinement():
    from ringserrin.domains import elliptic_core
    from ringserrin.solver import solve
    e = elliptic_core(0.6, 1.06)
    dom = e.domain()
    worst = []
    for res in ((48, 32), (64, 40), (96, 64)):
        rv = ck.regions(solve(dom, res))[1]
        worst.append(ck.check_pohozaev(rv).worst)
    assert worst[-1] <= worst[0]
    assert worst[-1] < 1e-10
