import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ringserrin import spectrum as spc
from ringserrin.model import inner_radius

LAMS = np.linspace(0.02, 0.98, 25)


@given(st.floats(0.01, 0.99), st.integers(0, 40))
@settings(max_examples=100, deadline=None)
def test_eigenvalues_match_numpy(lam, k):
    ev = np.sort(np.linalg.eigvals(spc.matrix(lam, k)).real)
    m1, m2 = spc.eigenvalues(lam, k)
    scale = max(1.0, abs(ev).max())
    assert abs(m1 - ev[0]) < 1e-10 * scale and abs(m2 - ev[1]) < 1e-10 * scale


def test_frequency_one_eigenvalues():
    for lam in np.linspace(0.01, 0.99, 50):
        m1, m2 = spc.eigenvalues(lam, 1)
        assert abs(m1 + 2) < 1e-12 and abs(m2) < 1e-12


def test_core_radius_relation():
    for lam in LAMS:
        assert inner_radius(math.sqrt(spc.R2(lam))) == pytest.approx(lam, rel=1e-11)


def test_k_coth_and_csch_limits():
    lam = 0.4
    assert spc.k_coth(lam, 0) == pytest.approx(-1 / math.log(lam))
    w = -3 * math.log(lam)
    assert spc.k_coth(lam, 3) == pytest.approx(3 / math.tanh(w), rel=1e-14)
    assert spc.k_csch(lam, 3) == pytest.approx(3 / math.sinh(w), rel=1e-14)


def test_trace_det_consistent_with_matrix():
    for lam in LAMS:
        for k in range(0, 12):
            Mt = spc.matrix_tilde(lam, k)
            t = spc.trace_det(lam, k)
            assert t.T == pytest.approx(np.trace(Mt), rel=1e-12, abs=1e-12)
            assert t.D == pytest.approx(np.linalg.det(Mt), rel=1e-9, abs=1e-10)


def test_discriminant_sum_of_squares_form():
    worst = 0.0
    for lam in np.linspace(0.01, 0.99, 100):
        for k in range(100):
            t = spc.trace_det(lam, k)
            naive = t.T * t.T - 4 * t.D
            worst = max(worst, abs(t.disc - naive) / max(1.0, t.T * t.T))
            assert t.disc >= 0
    assert worst < 1e-10


def test_symmetric_matrix_same_invariants():
    for lam in (0.2, 0.5, 0.8):
        for k in (0, 2, 5):
            A, S = spc.matrix(lam, k), spc.matrix_symmetric(lam, k)
            assert np.allclose(S, S.T)
            assert np.trace(S) == pytest.approx(np.trace(A))
            assert np.linalg.det(S) == pytest.approx(np.linalg.det(A), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("k", [2, 3, 6, 10])
@pytest.mark.parametrize("lam", [0.2, 0.45, 0.7])
def test_derivatives_against_finite_differences(lam, k):
    h = 1e-6
    T = lambda x: spc.trace_det(x, k).T
    D = lambda x: spc.trace_det(x, k).D
    assert spc.dT_dlam(lam, k) == pytest.approx((T(lam + h) - T(lam - h)) / (2 * h), rel=1e-6)
    assert spc.dD_dlam(lam, k) == pytest.approx((D(lam + h) - D(lam - h)) / (2 * h), rel=1e-6)
    fd = (spc.mu1(lam + h, k) - spc.mu1(lam - h, k)) / (2 * h)
    assert spc.dmu1_dlam(lam, k) == pytest.approx(fd, rel=1e-5)


def test_mu1_small_lambda_trend():
    # mu1(lam, k) = k - 1 - (k + 1) R(lam)^2 + ...; R(lam)^2 ~ 1/(2 |log lam|) decays slowly
    for k in range(2, 7):
        for lam in (1e-6, 1e-20, 1e-60):
            r2 = spc.R2(lam)
            assert spc.mu1(lam, k) == pytest.approx(k - 1 - (k + 1) * r2, abs=5 * r2 * r2 * (k + 1))
        gaps = [abs(spc.mu1(x, k) - (k - 1)) for x in (1e-6, 1e-20, 1e-60)]
        assert gaps[0] > gaps[1] > gaps[2]


def test_bifurcation_points():
    lams = []
    for k in range(2, 11):
        bp = spc.find_bifurcation_point(k)
        assert bp.unique
        assert abs(bp.mu1) < 1e-12
        assert bp.dmu1 < 0
        zc = spc.verify_zero_condition(bp.lam, k)
        assert abs(zc.cond3_residual) < 1e-8
        assert zc.cond4_margin > 0 and zc.passed
        lams.append(bp.lam)
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert spc.find_bifurcation_point(2).lam == pytest.approx(0.227433646714932, abs=1e-12)
    assert 1 - lams[-1] < 1 - lams[0]


def test_cond4_sign_matches_trace_determinant_derivative():
    for k in range(2, 11):
        lam = spc.find_bifurcation_point(k).lam
        lhs = 2 * spc.dT_dlam(lam, k) - spc.dD_dlam(lam, k)
        assert lhs > 0 and spc.cond4_margin(lam, k) > 0


def test_no_bifurcation_for_low_frequencies():
    with pytest.raises(ValueError):
        spc.find_bifurcation_point(1)
    for lam in LAMS:
        assert spc.mu1(lam, 0) < 0


def test_monotone_in_k():
    for lam in (0.1, 0.3, 0.5, 0.8):
        assert spc.verify_monotone_in_k(lam, 30)


def test_asymptotic_ratios():
    # mu/k = slope + O(1/k); Richardson over k and 2k removes the first correction
    for lam in (0.3, 0.6):
        a, b = spc.asymptotic_mu_over_k(lam)
        k = 2000
        e1 = [m / k for m in spc.eigenvalues(lam, k)]
        e2 = [m / (2 * k) for m in spc.eigenvalues(lam, 2 * k)]
        assert 2 * e2[0] - e1[0] == pytest.approx(a, rel=1e-6)
        assert 2 * e2[1] - e1[1] == pytest.approx(b, rel=1e-6)
        assert abs(e2[0] - a) < abs(e1[0] - a)


def test_spectrum_table_rows():
    rows = spc.spectrum_table([0.3, 0.6], [1, 2])
    assert len(rows) == 4
    assert {"lambda", "k", "T", "D", "mu1", "mu2"} <= set(rows[0])


def test_invalid_arguments():
    with pytest.raises(ValueError):
        spc.matrix(1.0, 2)
    with pytest.raises(ValueError):
        spc.matrix(0.5, -1)
