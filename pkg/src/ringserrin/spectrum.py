"""Closed-form spectrum of the linearized constant-gradient map on model annuli.

Perturbing the annulus ``lam < |x| < 1`` to ``lam + v1(theta) < |x| < 1 - v2(theta)``
and measuring the deviation of the inward normal derivatives from the model
constants gives a linear operator ``L_lam``.  On the Fourier mode ``cos(k theta)``
it acts, in the orthonormal basis ``e1 = (Y / sqrt(lam), 0)``, ``e2 = (0, Y)`` with
``Y = cos(k theta) / sqrt(pi)`` and inner product
``<w, z>_lam = lam int w1 z1 + int w2 z2``, as the 2x2 matrix returned by
:func:`matrix`.  Here ``k`` is the Fourier frequency (the Laplace-Beltrami
eigenvalue on the circle is ``k**2``) and ``R = R(lam)`` is the core radius of the
model with inner radius ``lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .model import lambda_to_core_radius


def _check(lam: float, k: int) -> None:
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    if k < 0 or int(k) != k:
        raise ValueError(f"frequency must be a nonnegative integer, got {k!r}")


def R2(lam: float) -> float:
    return lambda_to_core_radius(lam) ** 2


def k_coth(lam: float, k: int) -> float:
    """``k coth(omega)`` with ``e**omega = lam**-k``; the ``k = 0`` value is the limit ``-1/log(lam)``."""
    if k == 0:
        return -1.0 / math.log(lam)
    x = 2.0 * k * math.log(lam)
    return k * (1.0 + math.exp(x)) / -math.expm1(x)


def k_csch(lam: float, k: int) -> float:
    """``k / sinh(omega)``; the ``k = 0`` value is ``-1/log(lam)``."""
    if k == 0:
        return -1.0 / math.log(lam)
    x = 2.0 * k * math.log(lam)
    return 2.0 * k * math.exp(0.5 * x) / -math.expm1(x)


def matrix_tilde(lam: float, k: int) -> np.ndarray:
    """``M~ = M + 2 I`` (the part without the ``-2`` shift)."""
    _check(lam, k)
    r2 = R2(lam)
    kc, ks = k_coth(lam, k), k_csch(lam, k)
    sl = math.sqrt(lam)
    ci = (r2 - lam * lam) / lam
    co = 1.0 - r2
    return np.array([
        [ci / lam * (kc - 1.0), -ks * co / sl],
        [-ks * ci / sl, co * (kc + 1.0)],
    ])


def matrix(lam: float, k: int) -> np.ndarray:
    """Matrix ``M_{lam,k}`` of the linearization on frequency ``k``."""
    return matrix_tilde(lam, k) - 2.0 * np.eye(2)


def matrix_symmetric(lam: float, k: int) -> np.ndarray:
    """Symmetric matrix with the same trace and determinant as ``M_{lam,k}``."""
    M = matrix(lam, k)
    off = -math.copysign(1.0, k_csch(lam, k)) * math.sqrt(M[0, 1] * M[1, 0])
    if k == 0:
        off = math.sqrt(M[0, 1] * M[1, 0])
    return np.array([[M[0, 0], off], [off, M[1, 1]]])


@dataclass(frozen=True)
class TD:
    T: float
    D: float
    disc: float   # T**2 - 4 D from the sum-of-squares form


def trace_det(lam: float, k: int) -> TD:
    """Trace and determinant of ``M~`` and the discriminant in its positive form."""
    _check(lam, k)
    r2 = R2(lam)
    kc, ks = k_coth(lam, k), k_csch(lam, k)
    lam2 = lam * lam
    # T = 2 + R^2/lam^2 ((1 - lam^2) k coth - (1 + lam^2)), with the bracket over a common denominator
    if k == 0:
        T = r2 * (1.0 / lam2 - 1.0) * kc + 2.0 - r2 - r2 / lam2
    else:
        x = 2.0 * k * math.log(lam)
        qk = math.exp(x)
        num = k * (1.0 - lam2) * (1.0 + qk) - (1.0 + lam2) * -math.expm1(x)
        T = 2.0 + r2 / lam2 * num / -math.expm1(x)
    D = (r2 / lam2 - 1.0) * (1.0 - r2) * (k * k - 1.0)
    ci, co = r2 / lam - lam, 1.0 - r2
    # (M~_11 - M~_22)**2 + 4 M~_12 M~_21, a sum of squares
    disc = (kc * (ci / lam - co) - (ci / lam + co)) ** 2 + 4.0 * ks * ks * ci * co / lam
    return TD(T, D, disc)


def discriminant_naive(lam: float, k: int) -> float:
    t = trace_det(lam, k)
    return t.T * t.T - 4.0 * t.D


def eigenvalues(lam: float, k: int) -> tuple[float, float]:
    """``(mu_1, mu_2)`` with ``mu_1 <= mu_2``, evaluated without cancellation."""
    t = trace_det(lam, k)
    sq = math.sqrt(t.disc)
    if t.T >= 0.0:
        hi = 0.5 * (t.T + sq)
        lo = t.D / hi if hi != 0.0 else 0.0
    else:
        lo = 0.5 * (t.T - sq)
        hi = t.D / lo
    return lo - 2.0, hi - 2.0


def mu1(lam: float, k: int) -> float:
    return eigenvalues(lam, k)[0]


def dT_dlam(lam: float, k: int) -> float:
    """Total derivative of the trace (the core radius moves with ``lam``)."""
    r2 = R2(lam)
    kc, ks = k_coth(lam, k), k_csch(lam, k)
    lam2 = lam * lam
    om = 1.0 - lam2
    return r2 / (lam**3 * om) * (om * om * ks * ks + 2.0 * (r2 - lam2 - 1.0) * om * kc
                                 + 2.0 * (1.0 - r2 - r2 * lam2 + lam2 * lam2))


def dD_dlam(lam: float, k: int) -> float:
    r2 = R2(lam)
    lam2 = lam * lam
    return (-2.0 * r2 * (k * k - 1.0) / (lam**3 * (1.0 - lam2))
            * ((r2 - lam2) ** 2 + (1.0 - r2) ** 2))


def dmu1_dlam(lam: float, k: int) -> float:
    t = trace_det(lam, k)
    dT, dD = dT_dlam(lam, k), dD_dlam(lam, k)
    sq = math.sqrt(t.disc)
    return 0.5 * (dT - (t.T * dT - 2.0 * dD) / sq)


@dataclass(frozen=True)
class BifurcationPoint:
    k: int
    lam: float
    R: float
    mu1: float
    dmu1: float
    unique: bool


def find_bifurcation_point(k: int, *, lo: float = 1e-6, hi: float = 1.0 - 1e-9, scan_step: float = 1e-3) -> BifurcationPoint:
    """The unique ``lam_k`` in (0, 1) with ``mu_1(lam_k, k) = 0`` (``k >= 2``)."""
    if k < 2:
        raise ValueError("no bifurcation for frequencies 0 and 1")
    grid = np.arange(scan_step, 1.0, scan_step)
    vals = np.array([mu1(x, k) for x in grid])
    changes = int(np.sum(np.signbit(vals[1:]) != np.signbit(vals[:-1])))
    lam = brentq(lambda x: mu1(x, k), lo, hi, xtol=1e-16, rtol=8.9e-16, maxiter=200)
    for _ in range(3):
        d = dmu1_dlam(lam, k)
        step = mu1(lam, k) / d
        if not (lo < lam - step < hi):
            break
        lam -= step
    return BifurcationPoint(k, lam, math.sqrt(R2(lam)), mu1(lam, k), dmu1_dlam(lam, k), changes == 1)


def cond3_residual(lam: float, k: int) -> float:
    """Residual of ``2R^2(1-lam^2) k coth = (R^2-lam^2)(1-R^2) k^2 + (R^2+lam^2)(1+R^2)``."""
    r2 = R2(lam)
    lam2 = lam * lam
    lhs = 2.0 * r2 * (1.0 - lam2) * k_coth(lam, k)
    rhs = (r2 - lam2) * (1.0 - r2) * k * k + (r2 + lam2) * (1.0 + r2)
    return lhs - rhs


def cond5_margin(lam: float, k: int) -> float:
    """``2R^2(1-lam^2) k coth + lam^2 - 3R^4 - 3R^2 lam^2 - 3R^2``; positive at ``lam_k``."""
    r2 = R2(lam)
    lam2 = lam * lam
    return 2.0 * r2 * (1.0 - lam2) * k_coth(lam, k) + lam2 - 3.0 * r2 * r2 - 3.0 * r2 * lam2 - 3.0 * r2


def cond4_margin(lam: float, k: int) -> float:
    """``2 k**2 cond5 + 3R^4 + R^2 lam^2 + R^2 - lam^2``; at ``lam_k`` its sign is that of ``2T' - D'``."""
    r2 = R2(lam)
    lam2 = lam * lam
    return 2.0 * k * k * cond5_margin(lam, k) + 3.0 * r2 * r2 + r2 * lam2 + r2 - lam2


def coth_estimate_margin(lam: float, k: int) -> float:
    """``k coth - (R^2 + lam^2) / (lam^2 (1 - R^2))``; positive at ``lam_k``."""
    r2 = R2(lam)
    return k_coth(lam, k) - (r2 + lam * lam) / (lam * lam * (1.0 - r2))


@dataclass(frozen=True)
class ZeroCondition:
    cond3_residual: float
    cond4_margin: float
    cond5_margin: float
    coth_margin: float
    dmu1: float

    @property
    def passed(self) -> bool:
        """Zero condition satisfied with transversal crossing (``cond4 > 0``, ``dmu1/dlam < 0``)."""
        return abs(self.cond3_residual) < 1e-8 and self.cond4_margin > 0.0 and self.dmu1 < 0.0


def verify_zero_condition(lam: float, k: int) -> ZeroCondition:
    return ZeroCondition(cond3_residual(lam, k), cond4_margin(lam, k), cond5_margin(lam, k),
                         coth_estimate_margin(lam, k), dmu1_dlam(lam, k))


def asymptotic_slopes(lam: float) -> tuple[float, float]:
    """Limits of ``T/k`` and ``D/T**2`` as ``k -> infinity``."""
    r2 = R2(lam)
    lam2 = lam * lam
    return r2 * (1.0 - lam2) / lam2, lam2 * (r2 - lam2) * (1.0 - r2) / (r2 * r2 * (1.0 - lam2) ** 2)


def asymptotic_mu_over_k(lam: float) -> tuple[float, float]:
    """Limits of ``mu_1 / k`` and ``mu_2 / k`` as ``k -> infinity``."""
    a, b = asymptotic_slopes(lam)
    s = math.sqrt(1.0 - 4.0 * b)
    return 0.5 * a * (1.0 - s), 0.5 * a * (1.0 + s)


def verify_monotone_in_k(lam: float, kmax: int = 20) -> bool:
    """``mu_1(lam, k)`` nondecreasing in ``k`` on ``2 <= k <= kmax``."""
    vals = [mu1(lam, k) for k in range(2, kmax + 1)]
    return all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def spectrum_table(lams, ks) -> list[dict]:
    rows = []
    for lam in lams:
        for k in ks:
            m1, m2 = eigenvalues(lam, k)
            t = trace_det(lam, k)
            rows.append({"lambda": lam, "k": k, "R": math.sqrt(R2(lam)), "mu1": m1, "mu2": m2,
                         "T": t.T, "D": t.D})
    return rows
