"""Pseudo-radial branches psi_+ / psi_- of the model solution and the comparison function W_R.

The model value ``u = u_R(psi)`` is inverted on the outer branch (``R <= psi <= 1``)
or the inner branch (``r_i <= psi <= R``).  Internally the unknown is
``t = log(psi / R)`` which satisfies

    expm1(2t) - 2t = 2 (u_max - u) / R**2,

so values close to ``u_max`` are resolved without cancellation.
``W_R(u) = ((psi**2 - R**2) / psi)**2`` is the squared model gradient at level ``u``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import log_inner_radius, umax


class Branch(enum.Enum):
    PLUS = "plus"    # outer part of the model annulus
    MINUS = "minus"  # inner part


def _phi(t):
    """``expm1(2t) - 2t`` (equal to ``2 (u_max - u) / R**2``) with a series near 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    x = 2.0 * t
    small = np.abs(x) < 0.1
    xs = x[small]
    acc = np.zeros_like(xs)
    fact = [1.0]
    for n in range(1, 22):
        fact.append(fact[-1] * n)
    for n in range(21, 1, -1):
        acc = acc * xs + 1.0 / fact[n]
    out[small] = acc * xs * xs
    xl = x[~small]
    out[~small] = np.expm1(xl) - xl
    return out


def _g(t):
    """Signed root ``sign(t) sqrt(2 phi(t))``: increasing, ~ 2t near 0."""
    return np.sign(t) * np.sqrt(2.0 * np.maximum(_phi(t), 0.0))


def _dg(t):
    gt = _g(t)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        d = 2.0 * np.expm1(2.0 * t) / gt
    return np.where(np.abs(t) < 1e-9, 2.0 + 2.0 * t, d)


def _branch_range(R: float, branch: Branch) -> tuple[float, float]:
    if branch is Branch.PLUS:
        return 0.0, -float(np.log(R))
    return log_inner_radius(R) - float(np.log(R)), 0.0


def solve_t(R: float, branch: Branch, q, *, newton_steps: int = 5):
    """Solve for ``t = log(psi / R)`` given ``q = u_max - u`` on a branch, vectorized.

    Bisection down to a bracket of width 1e-6, then Newton steps kept inside it.
    """
    q = np.asarray(q, dtype=float)
    # phi(t) = 2 q / R**2 and |g| = sqrt(2 phi) = 2 sqrt(q) / R
    target = 2.0 * np.sqrt(q) / R
    lo, hi = _branch_range(R, branch)
    if branch is Branch.MINUS:
        target = -target
    a = np.full(q.shape, lo)
    b = np.full(q.shape, hi)
    for _ in range(int(np.ceil(np.log2((hi - lo) / 1e-6))) + 1):
        m = 0.5 * (a + b)
        below = _g(m) < target
        a = np.where(below, m, a)
        b = np.where(below, b, m)
    t = 0.5 * (a + b)
    for _ in range(newton_steps):
        t = np.clip(t - (_g(t) - target) / _dg(t), a, b)
    return t


def _prepare(R: float, u, branch: Branch):
    u = np.asarray(u, dtype=float)
    um = umax(R)
    if np.any(u < -1e-14) or np.any(u > um + 1e-14):
        raise ValueError("u must lie in [0, u_max(R)]")
    if R == 0.0 and branch is Branch.MINUS:
        raise ValueError("the disk solution has no inner branch")
    return u, um


def psi(R: float, branch: Branch, u):
    """Pseudo-radius ``psi_pm(u)``; scalar in, scalar out."""
    u, um = _prepare(R, u, branch)
    if R == 0.0:
        out = np.sqrt(np.clip(1.0 - 2.0 * u, 0.0, None))
    else:
        t = solve_t(R, branch, np.clip(um - u, 0.0, None))
        # keep roundoff in R exp(t) inside the branch interval
        lo, hi = (R, 1.0) if branch is Branch.PLUS else (0.0, R)
        out = np.clip(R * np.exp(t), lo, hi)
    return out[()] if out.ndim == 0 else out


def psi_dot(R: float, branch: Branch, u):
    """``d psi / du = -psi / (psi**2 - R**2)``."""
    p = np.asarray(psi(R, branch, u))
    return -p / (p * p - R * R)


def psi_ddot(R: float, branch: Branch, u):
    """``d**2 psi / du**2 = 2 psi_dot**3 + psi_dot**2 / psi``."""
    p = np.asarray(psi(R, branch, u))
    pd = -p / (p * p - R * R)
    return 2.0 * pd**3 + pd * pd / p


def W(R: float, branch: Branch, u):
    """Squared model gradient at level ``u``: ``((psi**2 - R**2) / psi)**2``."""
    u, um = _prepare(R, u, branch)
    if R == 0.0:
        out = np.clip(1.0 - 2.0 * u, 0.0, None)
    else:
        t = solve_t(R, branch, np.clip(um - u, 0.0, None))
        out = R * R * np.expm1(2.0 * t) ** 2 * np.exp(-2.0 * t)
    return out[()] if out.ndim == 0 else out


def residual(R: float, branch: Branch, u, p):
    """``|2u - (1 - psi**2 + 2 R**2 log psi)|`` for a candidate pseudo-radius."""
    u = np.asarray(u, dtype=float)
    p = np.asarray(p, dtype=float)
    rhs = 1.0 - p * p + (2.0 * R * R * np.log(p) if R > 0 else 0.0)
    return np.abs(2.0 * u - rhs)


@dataclass(frozen=True)
class ExpansionFit:
    a0: float
    a1: float
    a1_expected: float
    relerr_a1: float


def expansion_check(R: float, branch: Branch, delta: float = 1e-4, n: int = 60) -> ExpansionFit:
    """Fit ``W_R ~ a0 q + a1 q**1.5 (+ a2 q**2)`` with ``q = u_max - u`` on ``(0, delta]``.

    The expected coefficients are ``a0 = 4`` and ``a1 = -+ 8 / (3R)`` (minus on the
    outer branch).  The ``q**2`` column only absorbs the next order term.
    """
    if R <= 0.0:
        raise ValueError("expansion needs R > 0")
    um = umax(R)
    delta = min(delta, 0.5 * um)
    q = delta * np.linspace(1.0 / n, 1.0, n)
    w = np.asarray(W(R, branch, um - q))
    A = np.column_stack([q, q**1.5, q**2])
    coef, *_ = np.linalg.lstsq(A / q[:, None], w / q, rcond=None)
    a1_exp = (-1.0 if branch is Branch.PLUS else 1.0) * 8.0 / (3.0 * R)
    return ExpansionFit(float(coef[0]), float(coef[1]), a1_exp, abs(coef[1] - a1_exp) / abs(a1_exp))
