import math

import numpy as np
import pytest

from ringserrin import continuation as ct
from ringserrin import spectrum as spc
from ringserrin.model import SQRT2
from ringserrin.solver import ResolutionError

RES = ct.DEFAULT_RESOLUTION
LAM2 = spc.find_bifurcation_point(2).lam


@pytest.fixture(scope="module")
def branch():
    b = ct.continue_branch(k=2, n_steps=3, ds=1e-2)
    assert not b.truncated, b.diagnostics
    return b


@pytest.fixture(scope="module")
def certificates(branch):
    return {p.s: ct.certify_branch_point(p) for p in branch.sorted_points()}


def test_model_residual_vanishes():
    for lam in (0.3, 0.5, 0.8):
        r = ct.shooting_residual(lam, ct.PerturbationVector.zero([0, 2]), RES)
        assert r.sup < 1e-11


def test_residual_linear_for_small_perturbations():
    v = ct.PerturbationVector([0, 2, 4], [0.3, 1.0, -0.4], [0.2, -0.5, 0.7])
    s1 = ct.shooting_residual(0.5, v.scaled(1e-3), RES).sup
    s2 = ct.shooting_residual(0.5, v.scaled(1e-4), RES).sup
    assert s1 / s2 == pytest.approx(10.0, rel=1e-2)


def test_residual_rotation_equivariance():
    v = ct.PerturbationVector([0, 2, 4], [0.01, 0.02, -0.01], [0.0, -0.015, 0.01])
    a = ct.shooting_residual(0.5, v, RES)
    b = ct.shooting_residual(0.5, v.rotated(math.pi / 2), RES)
    shift = a.theta.size // 4
    assert np.abs(np.roll(a.inner, -shift) - b.inner).max() < 1e-10
    assert np.abs(np.roll(a.outer, -shift) - b.outer).max() < 1e-10
    # reflection symmetry of cosine perturbations
    assert np.abs(a.inner - np.roll(a.inner[::-1], 1)).max() < 1e-10


def test_rotation_rejects_non_symmetries():
    with pytest.raises(ValueError):
        ct.PerturbationVector([2], [1.0], [0.0]).rotated(math.pi / 4 + 0.1)


@pytest.mark.parametrize("lam,k", [(0.4, 2), (0.5, 2), (0.5, 4), (0.6, 2)])
def test_fd_linearization_matches_closed_form(lam, k):
    M = spc.matrix(lam, k)
    F = ct.fd_linearization(lam, k)
    assert np.abs(F - M).max() / np.abs(M).max() < 1e-5


def test_fd_linearization_validates_step():
    with pytest.raises(ValueError):
        ct.fd_linearization(0.5, 2, h=1e-1)


def test_fd_eigenvalue_changes_sign_at_lambda2():
    lo = np.linalg.eigvals(ct.fd_linearization(LAM2 - 0.02, 2)).real.min()
    hi = np.linalg.eigvals(ct.fd_linearization(LAM2 + 0.02, 2)).real.min()
    assert lo > 0 > hi


def test_null_vector():
    nv = ct.null_eigenvector(2)
    assert nv.residual < 1e-10
    assert abs(nv.eigenvalue) < 1e-12
    assert np.linalg.norm(nv.z) == pytest.approx(1.0, abs=1e-14)
    assert nv.direction.inner_product(nv.direction, nv.lam) == pytest.approx(1.0, rel=1e-12)
    t = 1e-4
    fp = ct.shooting_residual(nv.lam, nv.direction.scaled(t), RES)
    fm = ct.shooting_residual(nv.lam, nv.direction.scaled(-t), RES)
    dd = max(np.abs(fp.inner - fm.inner).max(), np.abs(fp.outer - fm.outer).max()) / (2 * t)
    assert dd < 1e-4


def test_shooting_residual_resolution_guard():
    v = ct.PerturbationVector([0, 2], [0.0, 0.05], [0.0, 0.0])
    with pytest.raises(ResolutionError):
        ct.shooting_residual(0.3, v, RES, max_solve_residual=1e-30)


def test_branch_points_solve(branch):
    pts = branch.sorted_points()
    assert [p.s for p in pts] == pytest.approx([-0.03, -0.02, -0.01, 0.0, 0.01, 0.02, 0.03])
    for p in pts:
        assert p.residual_sup < 1e-8
        assert p.nwss_inner > SQRT2 > p.nwss_outer


def test_branch_reflection_symmetry(branch):
    # s -> -s is rotation by pi / 2 (frequency-2 branch)
    for s in (0.01, 0.02, 0.03):
        p, m = branch.point(s), branch.point(-s)
        assert p.lam == pytest.approx(m.lam, abs=1e-9)
        rot = p.v.rotated(math.pi / 2)
        assert np.abs(rot.coeffs_inner - m.v.coeffs_inner).max() < 1e-8
        assert np.abs(rot.coeffs_outer - m.v.coeffs_outer).max() < 1e-8


def test_branch_tangent_is_null_vector(branch):
    z = branch.null.direction
    for s in (0.01, -0.01):
        v = branch.point(s).v
        zi, zo = z.coefficient(2)
        vi, vo = v.coefficient(2)
        assert vi / s == pytest.approx(zi, rel=1e-2)
        assert vo / s == pytest.approx(zo, rel=1e-2)
    # lambda(s) - lambda_k = O(s^2)
    d1 = branch.point(0.01).lam - branch.lam_k
    d2 = branch.point(0.02).lam - branch.lam_k
    assert d2 / d1 == pytest.approx(4.0, rel=5e-2)


def test_mode_amplitude_tracks_s(branch):
    for p in branch.sorted_points():
        if p.s != 0.0:
            assert p.mode_amplitude == pytest.approx(p.s, rel=0.2)


def test_branch_certified(certificates):
    for s, c in certificates.items():
        assert c.passed, (s, c.failures)
        assert c.residual_sup < 1e-8


def test_branch_files_round_trip(branch, certificates, tmp_path):
    certs = [certificates[p.s] for p in branch.sorted_points()]
    ct.write_branch_json(branch, tmp_path / "b.json", certs)
    back = ct.read_branch_json(tmp_path / "b.json")
    assert len(back) == len(branch.points)
    for a, b in zip(back, branch.sorted_points()):
        assert a.lam == b.lam and a.s == b.s
        assert np.array_equal(a.v.coeffs_inner, b.v.coeffs_inner)
    ct.write_branch_summary(branch, tmp_path / "b.csv", certs)
    text = (tmp_path / "b.csv").read_text()
    assert "\r" not in text
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(ct.SUMMARY_COLUMNS)
    assert len(lines) == 1 + len(branch.points)


def test_continue_branch_rejects_bad_frequency():
    with pytest.raises(ValueError):
        ct.continue_branch(k=3)
    with pytest.raises(ValueError):
        ct.SymmetryGroup(1)
