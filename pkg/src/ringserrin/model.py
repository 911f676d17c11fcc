"""Radial model solutions of the torsion problem on annuli and their calibration maps.

For a core radius ``R`` in ``[0, 1)`` the model solution

    u_R(r) = (1 - r**2) / 2 + R**2 * log(r),     r_i(R) < r < 1,

solves ``-Laplace(u) = 2`` with zero boundary values on both circles, attains its
maximum on the circle ``|x| = R`` and has constant gradient on each boundary
component.  ``R = 0`` is the disk solution ``(1 - r**2) / 2``.

The normalized wall shear stress (NWSS) of a boundary component is
``max |grad u| / sqrt(2 * u_max)``; on the models it is ``tau_outer(R)`` on the
outer circle and ``tau_inner(R)`` on the inner one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .io import parse_float, read_csv, write_csv

SQRT2 = math.sqrt(2.0)

# Clamp used when inverting the NWSS maps near the ends of [0, 1].
R_CLAMP = 1e-8


class BranchKind(enum.Enum):
    OUTER = "outer"
    INNER = "inner"
    CRITICAL = "critical"


def classify(tau: float, tol: float = 1e-12) -> BranchKind:
    """Outer below sqrt(2), inner above, critical within ``tol`` of it."""
    if abs(tau - SQRT2) <= tol:
        return BranchKind.CRITICAL
    return BranchKind.OUTER if tau < SQRT2 else BranchKind.INNER


def _check_R(R: float) -> float:
    R = float(R)
    if not (0.0 <= R < 1.0):
        raise ValueError(f"core radius must lie in [0, 1), got {R!r}")
    return R


def _one_minus_sq(R: float) -> float:
    return (1.0 - R) * (1.0 + R)


def two_umax(R: float) -> float:
    """``2 * u_max(R) = 1 - R**2 + 2 R**2 log R``, accurate up to ``R -> 1``."""
    R = float(R)
    if R == 0.0:
        return 1.0
    eps = _one_minus_sq(R)
    if eps < 1e-3:
        # (1 - e) log(1 - e) + e = sum_{n>=2} e**n / (n (n - 1))
        return sum(eps**n / (n * (n - 1)) for n in range(2, 14))
    return eps + R * R * 2.0 * math.log(R)


def umax(R: float) -> float:
    """Maximum ``u_R(R)`` of the model solution."""
    return 0.5 * two_umax(_check_R(R))


def log_inner_radius(R: float) -> float:
    """``log r_i(R)``; stays finite where ``r_i`` itself underflows."""
    R = _check_R(R)
    if R == 0.0:
        return -math.inf
    R2 = R * R

    # 1 - rho**2 + 2 R**2 log rho = 0 with x = log rho, divided by x so the
    # trivial root near x = 0 (R -> 1) does not spoil the conditioning.
    def g(x: float) -> float:
        return -math.expm1(2.0 * x) / x + 2.0 * R2

    hi = math.log(R)
    lo = -1.0 / R2
    return brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)


def inner_radius(R: float) -> float:
    """Smallest positive root of ``1 - rho**2 + 2 R**2 log rho`` (0 for ``R = 0``).

    Underflows to 0.0 in double precision for ``R`` below about 0.0367.
    """
    x = log_inner_radius(R)
    return 0.0 if x == -math.inf else math.exp(x)


def model_u(R: float, r):
    """Evaluate ``u_R`` at radii ``r``."""
    r = np.asarray(r, dtype=float)
    if R == 0.0:
        return 0.5 * (1.0 - r * r)
    return 0.5 * (1.0 - r * r) + R * R * np.log(r)


def model_grad_abs(R: float, r):
    """``|u_R'(r)| = |r**2 - R**2| / r``."""
    r = np.asarray(r, dtype=float)
    return np.abs(r * r - R * R) / r


def tau_outer(R: float) -> float:
    """NWSS of the outer circle, increasing from 1 at ``R = 0`` towards sqrt(2)."""
    R = _check_R(R)
    if R == 0.0:
        return 1.0
    return _one_minus_sq(R) / math.sqrt(two_umax(R))


def log_tau_inner(R: float) -> float:
    R = float(R)
    if R == 1.0:
        return 0.5 * math.log(2.0)
    R = _check_R(R)
    if R == 0.0:
        return math.inf
    x = log_inner_radius(R)
    # (R**2 - r_i**2) / r_i = (R**2 / r_i) (1 - r_i**2 / R**2)
    num = 2.0 * math.log(R) - x + math.log(-math.expm1(2.0 * (x - math.log(R))))
    return num - 0.5 * math.log(two_umax(R))


def tau_inner(R: float) -> float:
    """NWSS of the inner circle, decreasing from +inf at ``R = 0`` to sqrt(2) at 1."""
    if float(R) == 1.0:
        return SQRT2
    lt = log_tau_inner(R)
    return math.inf if lt > 709.0 else math.exp(lt)


def invert_tau_outer(tau: float) -> float:
    """Core radius ``R`` with ``tau_outer(R) = tau`` for ``tau`` in ``[1, sqrt(2))``."""
    tau = float(tau)
    if tau < 1.0 or tau >= SQRT2:
        raise ValueError(f"outer NWSS must lie in [1, sqrt(2)), got {tau!r}")
    if tau == 1.0:
        return 0.0
    hi = 1.0 - R_CLAMP
    if tau >= tau_outer(hi):
        return hi
    return brentq(lambda R: tau_outer(R) - tau, 0.0, hi, xtol=1e-16, rtol=8.9e-16, maxiter=200)


def invert_tau_inner(tau: float) -> float:
    """Core radius ``R`` with ``tau_inner(R) = tau`` for ``tau >= sqrt(2)``."""
    tau = float(tau)
    if not tau >= SQRT2:
        raise ValueError(f"inner NWSS must be at least sqrt(2), got {tau!r}")
    if tau == SQRT2:
        return 1.0
    lt = math.log(tau)
    lo, hi = R_CLAMP, 1.0 - R_CLAMP
    if lt <= log_tau_inner(hi):
        return hi
    if lt >= log_tau_inner(lo):
        return lo
    return brentq(lambda R: log_tau_inner(R) - lt, lo, hi, xtol=1e-16, rtol=8.9e-16, maxiter=200)


def expected_core_radius(tau: float, tol: float = 1e-12) -> float:
    """Core radius ``R(N)`` of the model matched to a region with NWSS ``tau``.

    Values in ``[1 - tol, 1)`` are treated as 1 (the disk solution); anything
    smaller violates the lower bound ``tau >= 1`` and raises.
    """
    tau = float(tau)
    if tau < 1.0 - tol:
        raise ValueError(f"NWSS {tau!r} is below 1; the expected core radius requires tau >= 1")
    if tau < SQRT2:
        return invert_tau_outer(max(tau, 1.0))
    return invert_tau_inner(tau)


def lambda_to_core_radius(lam: float) -> float:
    """Core radius of the model whose inner radius is ``lam``: R**2 = (1 - lam**2) / (-2 log lam)."""
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise ValueError(f"inner radius must lie in (0, 1), got {lam!r}")
    if lam < 0.5:
        return math.sqrt((1.0 - lam * lam) / (-2.0 * math.log(lam)))
    e = 1.0 - lam
    return math.sqrt(e * (2.0 - e) / (-2.0 * math.log1p(-e)))


@dataclass(frozen=True)
class ModelSolution:
    R: float
    r_inner: float
    u_max: float
    c_inner: Optional[float]
    c_outer: float
    tau_inner: Optional[float]
    tau_outer: float

    @property
    def is_disk(self) -> bool:
        return self.R == 0.0


def model_solution(R: float) -> ModelSolution:
    """Bundle the calibration data of ``u_R``; the disk case has no inner quantities."""
    R = _check_R(R)
    if R == 0.0:
        return ModelSolution(0.0, 0.0, 0.5, None, 1.0, None, 1.0)
    ri = inner_radius(R)
    return ModelSolution(
        R=R,
        r_inner=ri,
        u_max=umax(R),
        c_inner=(R * R - ri * ri) / ri if ri > 0 else math.inf,
        c_outer=_one_minus_sq(R),
        tau_inner=tau_inner(R),
        tau_outer=tau_outer(R),
    )


TABLE_COLUMNS = ("R", "r_i", "u_max", "c_i", "c_o", "tau_i", "tau_o")


def model_table(grid) -> list[ModelSolution]:
    """Model solutions for an increasing grid of core radii in ``[0, 1)``."""
    grid = [float(R) for R in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("core-radius grid must be strictly increasing")
    return [model_solution(R) for R in grid]


def write_model_table(rows, path) -> None:
    write_csv(path, TABLE_COLUMNS, ((m.R, m.r_inner, m.u_max, m.c_inner, m.c_outer, m.tau_inner, m.tau_outer)
                                    for m in rows))


def read_model_table(path) -> list[ModelSolution]:
    header, rows = read_csv(path)
    if tuple(header) != TABLE_COLUMNS:
        raise ValueError(f"{path}: unexpected header {header}")
    return [ModelSolution(*(parse_float(c) for c in row)) for row in rows]
