"""Spectral solver for ``-Laplace(u) = 2`` on perturbed annuli with zero boundary values.

Domains are star-shaped ring domains ``a(theta) < |x| < b(theta)`` with
``a = lam + v1`` and ``b = 1 - v2`` given by finite Fourier series.  The map
``r = a(theta) + s h(theta)``, ``h = b - a``, sends the rectangle
``[0, 1] x [0, 2 pi)`` onto the domain; the equation is collocated on
Chebyshev-Lobatto nodes in ``s`` times equispaced nodes in ``theta``.

Exact annuli decouple into one small radial solve per Fourier mode.  On other
domains the coupled system is solved by GMRES preconditioned with that annulus
solver (or assembled densely for small grids).
"""

from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.optimize import brentq
from scipy.sparse.linalg import LinearOperator, gmres

from . import spectral as sp

log = logging.getLogger(__name__)


class DomainError(ValueError):
    """Raised for ring domains that are not admissible (nonpositive or crossing radii)."""


class ResolutionError(ValueError):
    pass


def _coeffs(x) -> np.ndarray:
    a = np.atleast_1d(np.asarray(x, dtype=float)).copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RingDomain:
    """``lam + v1(theta) < |x| < 1 - v2(theta)``; ``v1, v2`` as cosine/sine coefficient lists.

    Coefficient ``j`` multiplies ``cos(j theta)`` or ``sin(j theta)``.
    """

    lam: float
    inner_cos: np.ndarray = field(default_factory=lambda: np.zeros(1))
    inner_sin: np.ndarray = field(default_factory=lambda: np.zeros(1))
    outer_cos: np.ndarray = field(default_factory=lambda: np.zeros(1))
    outer_sin: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        for name in ("inner_cos", "inner_sin", "outer_cos", "outer_sin"):
            object.__setattr__(self, name, _coeffs(getattr(self, name)))
        if not (0.0 < self.lam < 1.0):
            raise DomainError(f"base inner radius must lie in (0, 1), got {self.lam!r}")
        th = np.linspace(0.0, 2.0 * np.pi, 2048, endpoint=False)
        a, b = self.inner(th), self.outer(th)
        if a.min() <= 0.0:
            raise DomainError("inner boundary radius must stay positive")
        if (b - a).min() <= 0.0:
            raise DomainError("inner and outer boundaries cross")

    @classmethod
    def annulus(cls, lam: float) -> "RingDomain":
        return cls(lam)

    def inner(self, theta, deriv: int = 0):
        base = self.lam if deriv == 0 else 0.0
        return base + sp.cos_sin_eval(self.inner_cos, self.inner_sin, theta, deriv)

    def outer(self, theta, deriv: int = 0):
        base = 1.0 if deriv == 0 else 0.0
        return base - sp.cos_sin_eval(self.outer_cos, self.outer_sin, theta, deriv)

    @property
    def max_frequency(self) -> int:
        return max(self.inner_cos.size, self.inner_sin.size, self.outer_cos.size, self.outer_sin.size) - 1

    @property
    def is_annulus(self) -> bool:
        """True when both boundaries are centred circles."""
        return all(not np.any(c[1:]) for c in (self.inner_cos, self.inner_sin, self.outer_cos, self.outer_sin))


def boundary_curvature(rho, rho1, rho2):
    """Signed curvature of the polar curve ``r = rho(theta)`` (positive for circles)."""
    return (rho * rho + 2.0 * rho1 * rho1 - rho * rho2) / (rho * rho + rho1 * rho1) ** 1.5


def _check_resolution(n_theta: int, n_r: int) -> None:
    if n_theta < 16 or n_theta % 2:
        raise ResolutionError(f"n_theta must be even and at least 16, got {n_theta}")
    if n_r < 12:
        raise ResolutionError(f"n_r must be at least 12, got {n_r}")


class _Grid:
    """Nodes and metric coefficients of the boundary-fitted map."""

    def __init__(self, domain: RingDomain, n_theta: int, n_r: int):
        _check_resolution(n_theta, n_r)
        self.domain = domain
        self.n_theta, self.n_r = n_theta, n_r
        self.theta = sp.fourier_nodes(n_theta)
        self.s, self.Ds = sp.cheb(n_r)
        self.Dss = self.Ds @ self.Ds
        th = self.theta
        a, a1, a2 = (domain.inner(th, d) for d in range(3))
        b, b1, b2 = (domain.outer(th, d) for d in range(3))
        h, h1, h2 = b - a, b1 - a1, b2 - a2
        self.a, self.a1, self.a2 = a, a1, a2
        self.b, self.b1, self.b2 = b, b1, b2
        self.h, self.h1 = h, h1
        S = self.s[:, None]
        self.r = a + S * h
        p = a1 + S * h1                      # d r / d theta at fixed s
        self.sigma = -p / h                  # d s / d theta at fixed r
        sig_s = -h1 / h
        sig_t = -(a2 + S * h2) / h + p * h1 / (h * h)
        r2 = self.r * self.r
        self.c_ss = 1.0 / (h * h) + self.sigma**2 / r2
        self.c_s = 1.0 / (self.r * h) + (sig_t + self.sigma * sig_s) / r2
        self.c_tt = 1.0 / r2
        self.c_st = 2.0 * self.sigma / r2

    def apply(self, U):
        """Collocated operator: Laplacian in the interior, identity on boundary rows."""
        Us = self.Ds @ U
        Ut = sp.fourier_diff(U, 1, axis=1)
        out = (self.c_ss * (self.Dss @ U) + self.c_s * Us
               + self.c_tt * sp.fourier_diff(U, 2, axis=1) + self.c_st * sp.fourier_diff(Us, 1, axis=1))
        out[0] = U[0]
        out[-1] = U[-1]
        return out

    def dense(self):
        nr, nt = self.n_r, self.n_theta
        It, Ir = np.eye(nt), np.eye(nr)
        Dt, Dtt = sp.fourier_diff_matrix(nt, 1), sp.fourier_diff_matrix(nt, 2)
        # row-major flattening: index = j * nt + m
        A = (self.c_ss.reshape(-1, 1) * np.kron(self.Dss, It)
             + self.c_s.reshape(-1, 1) * np.kron(self.Ds, It)
             + self.c_tt.reshape(-1, 1) * np.kron(Ir, Dtt)
             + self.c_st.reshape(-1, 1) * np.kron(self.Ds, Dt))
        A[:nt] = 0.0
        A[-nt:] = 0.0
        idx = np.r_[np.arange(nt), np.arange((nr - 1) * nt, nr * nt)]
        A[idx, idx] = 1.0
        return A

    def rhs(self):
        F = np.full((self.n_r, self.n_theta), -2.0)
        F[0] = 0.0
        F[-1] = 0.0
        return F


class _AnnulusSolver:
    """Exact inverse of the collocated operator on the annulus ``a0 < r < a0 + h0``."""

    def __init__(self, a0: float, h0: float, n_theta: int, n_r: int):
        s, Ds = sp.cheb(n_r)
        Dss = Ds @ Ds
        r = a0 + s * h0
        base = Dss / h0**2 + (1.0 / (r * h0))[:, None] * Ds
        m = sp.fourier_wavenumbers(n_theta)
        self.n_theta = n_theta
        inv = np.empty((m.size, n_r, n_r))
        for k, mk in enumerate(m):
            A = base - np.diag(mk * mk / (r * r))
            A[0] = 0.0
            A[-1] = 0.0
            A[0, 0] = A[-1, -1] = 1.0
            inv[k] = lu_solve(lu_factor(A), np.eye(n_r))
        self.inv = inv

    def __call__(self, F):
        Fh = np.fft.rfft(F, axis=1)
        Uh = np.einsum("mij,jm->im", self.inv, Fh)
        return np.fft.irfft(Uh, n=self.n_theta, axis=1)


@dataclass
class SolveInfo:
    method: str
    iterations: int
    residual: float           # max |Laplace(u) + 2| over interior collocation nodes
    precond_residual: float   # relative norm of the preconditioned residual


class Field:
    """Discrete solution on a ring domain with derived traces, gradients and quadrature."""

    def __init__(self, grid: _Grid, U: np.ndarray, info: SolveInfo):
        self.grid = grid
        self.domain = grid.domain
        self.U = U
        self.info = info

    # basic geometry -------------------------------------------------------
    @property
    def theta(self):
        return self.grid.theta

    @property
    def s(self):
        return self.grid.s

    @property
    def n_theta(self) -> int:
        return self.grid.n_theta

    @property
    def n_r(self) -> int:
        return self.grid.n_r

    @property
    def resolution(self) -> tuple[int, int]:
        return self.grid.n_theta, self.grid.n_r

    @property
    def r(self):
        return self.grid.r

    @property
    def x(self):
        return self.grid.r * np.cos(self.theta)

    @property
    def y(self):
        return self.grid.r * np.sin(self.theta)

    # derivatives ----------------------------------------------------------
    @cached_property
    def U_s(self):
        return self.grid.Ds @ self.U

    @cached_property
    def U_t(self):
        return sp.fourier_diff(self.U, 1, axis=1)

    @cached_property
    def grad_polar(self):
        """``(u_r, u_theta / r)`` at every node."""
        g = self.grid
        ur = self.U_s / g.h
        ut = (self.U_t + g.sigma * self.U_s) / g.r
        return ur, ut

    @cached_property
    def W(self):
        """``|grad u|**2`` at every node."""
        ur, ut = self.grad_polar
        return ur * ur + ut * ut

    # boundary data --------------------------------------------------------
    def boundary_radius(self, which: str, theta=None, deriv: int = 0):
        th = self.theta if theta is None else theta
        return self.domain.inner(th, deriv) if which == "inner" else self.domain.outer(th, deriv)

    @cached_property
    def normal_derivative_inner(self):
        """Inward normal derivative (equal to ``|grad u|``) on the inner boundary nodes."""
        g = self.grid
        return self.U_s[0] * np.hypot(g.a, g.a1) / (g.h * g.a)

    @cached_property
    def normal_derivative_outer(self):
        g = self.grid
        return -self.U_s[-1] * np.hypot(g.b, g.b1) / (g.h * g.b)

    def normal_derivative(self, which: str):
        return self.normal_derivative_inner if which == "inner" else self.normal_derivative_outer

    def boundary_curvature(self, which: str, theta=None):
        """Curvature w.r.t. the normal exterior to the domain (unit circle -> 1, inner circle -> -1/r)."""
        rho, r1, r2 = (self.boundary_radius(which, theta, d) for d in range(3))
        k = boundary_curvature(rho, r1, r2)
        return k if which == "outer" else -k

    def boundary_length(self, which: str) -> float:
        rho, r1 = (self.boundary_radius(which, None, d) for d in range(2))
        return float(np.mean(np.hypot(rho, r1)) * 2.0 * np.pi)

    def boundary_max_gradient(self, which: str) -> tuple[float, float]:
        """``(theta, max |grad u|)`` on a boundary component via trigonometric interpolation."""
        return sp.periodic_argmax(self.normal_derivative(which))

    # interpolation along radial lines --------------------------------------
    @cached_property
    def _coef(self):
        return sp.cheb_coeffs(self.U)

    @cached_property
    def _coef_s(self):
        return sp.cheb_deriv_coeffs(self._coef)

    @cached_property
    def _coef_t(self):
        return sp.cheb_coeffs(self.U_t)

    def line_values(self, s):
        """``u`` at ``(s[..., m], theta_m)``."""
        return sp.cheb_eval_columns(self._coef, s)

    def line_gradient_sq(self, s):
        """``|grad u|**2`` at ``(s[..., m], theta_m)``."""
        g = self.grid
        s = np.asarray(s, dtype=float)
        Us = sp.cheb_eval_columns(self._coef_s, s)
        Ut = sp.cheb_eval_columns(self._coef_t, s)
        r = g.a + s * g.h
        sig = -(g.a1 + s * g.h1) / g.h
        ur = Us / g.h
        ut = (Ut + sig * Us) / r
        return ur * ur + ut * ut

    def line_radius(self, s):
        g = self.grid
        return g.a + np.asarray(s) * g.h

    # evaluation at arbitrary points ----------------------------------------
    @cached_property
    def _coef2d(self):
        n = self.n_theta
        c = np.fft.rfft(self.U, axis=1) / n
        w = np.full(c.shape[1], 2.0)
        w[0] = 1.0
        if n % 2 == 0:
            w[-1] = 1.0
        c = sp.cheb_coeffs(c * w)
        return c, sp.cheb_deriv_coeffs(c)

    def _to_map(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        r = np.hypot(x, y)
        th = np.arctan2(y, x) % (2.0 * np.pi)
        a, b = self.domain.inner(th.ravel()), self.domain.outer(th.ravel())
        s = (r.ravel() - a) / (b - a)
        return s, th.ravel(), r.ravel()

    def evaluate(self, x, y):
        """``u`` at arbitrary points of the closed domain."""
        s, th, _ = self._to_map(x, y)
        c, _ = self._coef2d
        T = np.polynomial.chebyshev.chebvander(1.0 - 2.0 * s, self.n_r - 1)
        E = np.exp(1j * np.multiply.outer(th, np.arange(c.shape[1])))
        return np.real(np.sum((T @ c) * E, axis=1)).reshape(np.shape(x))

    def gradient(self, x, y):
        """``(u_x, u_y)`` at arbitrary points."""
        s, th, r = self._to_map(x, y)
        c, cs = self._coef2d
        m = np.arange(c.shape[1])
        T = np.polynomial.chebyshev.chebvander(1.0 - 2.0 * s, self.n_r - 1)
        E = np.exp(1j * np.multiply.outer(th, m))
        Us = np.real(np.sum((T @ cs) * E, axis=1))
        Ut = np.real(np.sum((T @ (c * (1j * m))) * E, axis=1))
        a1, b1 = self.domain.inner(th, 1), self.domain.outer(th, 1)
        a, b = self.domain.inner(th), self.domain.outer(th)
        h = b - a
        ur = Us / h
        ut = (Ut - (a1 + s * (b1 - a1)) / h * Us) / r
        ct, st = np.cos(th), np.sin(th)
        shape = np.shape(x)
        return (ur * ct - ut * st).reshape(shape), (ur * st + ut * ct).reshape(shape)

    # maximum ---------------------------------------------------------------
    @cached_property
    def ridge(self):
        """Per-line maximizer ``s*(theta_m)`` and the line maximum ``u(s*, theta_m)``."""
        cs = self._coef_s
        s_nodes = self.s
        s_star = np.empty(self.n_theta)
        for m in range(self.n_theta):
            j = int(np.argmax(self.U[:, m]))
            lo, hi = s_nodes[max(j - 1, 0)], s_nodes[min(j + 1, self.n_r - 1)]
            c = cs[:, m]
            f = lambda t: np.polynomial.chebyshev.chebval(1.0 - 2.0 * t, c)
            flo, fhi = f(lo), f(hi)
            if flo * fhi < 0:
                s_star[m] = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            else:
                s_star[m] = s_nodes[j]
        vals = self.line_values(s_star)
        return s_star, vals

    @cached_property
    def u_max(self) -> float:
        """Maximum of ``u`` (trigonometric refinement of the line maxima)."""
        _, vals = self.ridge
        if np.ptp(vals) <= 1e-15 * max(vals.max(), 1.0):
            return float(vals.max())
        return max(float(vals.max()), sp.periodic_argmax(vals)[1])

    def nwss(self, which: str) -> float:
        """Normalized wall shear stress ``max |grad u| / sqrt(2 u_max)`` of a boundary component."""
        return self.boundary_max_gradient(which)[1] / math.sqrt(2.0 * self.u_max)

    def level_crossings(self, level, side: str, s_limit=None):
        """``s`` per line where ``u = level`` between the boundary and ``s_limit`` (default: ridge).

        Lines whose maximum is below ``level`` get NaN.
        """
        s_star, vals = self.ridge
        s_lim = s_star if s_limit is None else s_limit
        level = np.broadcast_to(np.asarray(level, dtype=float), (self.n_theta,))
        out = np.full(self.n_theta, np.nan)
        coef = self._coef
        for m in range(self.n_theta):
            c = coef[:, m]
            f = lambda t: np.polynomial.chebyshev.chebval(1.0 - 2.0 * t, c) - level[m]
            end = 0.0 if side == "inner" else 1.0
            fe, fl = f(end), f(s_lim[m])
            if abs(fe) <= 1e-13 * abs(fl):
                out[m] = end    # level equals the boundary value up to roundoff
                continue
            if fe * fl > 0:
                continue
            lo, hi = sorted((end, s_lim[m]))
            out[m] = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        return out

    # quadrature -------------------------------------------------------------
    def integrate(self, values) -> float:
        """Area integral of nodal values over the whole domain."""
        w = sp.clenshaw_curtis(self.n_r)
        g = self.grid
        return float(np.sum(w[:, None] * values * g.r * g.h) * 2.0 * np.pi / self.n_theta)

    def integrate_lines(self, func, s0, s1, n_gauss: Optional[int] = None) -> float:
        """Area integral of ``func(s, field)`` over ``s0(theta) <= s <= s1(theta)``."""
        n_gauss = n_gauss or self.n_r + 8
        xg, wg = np.polynomial.legendre.leggauss(n_gauss)
        s0 = np.broadcast_to(np.asarray(s0, dtype=float), (self.n_theta,))
        s1 = np.broadcast_to(np.asarray(s1, dtype=float), (self.n_theta,))
        half = 0.5 * (s1 - s0)
        S = s0 + half * (xg[:, None] + 1.0)
        vals = func(S)
        r = self.line_radius(S)
        inner = np.sum(wg[:, None] * vals * r, axis=0) * half * self.grid.h
        return float(np.sum(inner) * 2.0 * np.pi / self.n_theta)


def solve(domain: RingDomain, resolution=(64, 48), *, method: str = "auto",
          rtol: float = 1e-14, maxiter: int = 400) -> Field:
    """Solve ``-Laplace(u) = 2``, ``u = 0`` on the boundary.

    ``method``: ``"auto"`` (block solve on annuli, otherwise GMRES), ``"gmres"`` or
    ``"dense"`` (assembled LU, for small grids).
    """
    n_theta, n_r = (int(v) for v in resolution)
    grid = _Grid(domain, n_theta, n_r)
    F = grid.rhs()
    a0, h0 = float(np.mean(grid.a)), float(np.mean(grid.h))
    pre = _AnnulusSolver(a0, h0, n_theta, n_r)
    exact_annulus = np.ptp(grid.a) == 0.0 and np.ptp(grid.h) == 0.0
    its = 0
    pres = 0.0
    if method == "auto":
        method = "block" if exact_annulus else "gmres"
    if method == "block":
        if not exact_annulus:
            raise ValueError("block solve needs an exact annulus")
        U = pre(F)
    elif method == "dense":
        U = np.linalg.solve(grid.dense(), F.ravel()).reshape(n_r, n_theta)
    elif method == "gmres":
        shape = (n_r, n_theta)
        N = n_r * n_theta
        op = LinearOperator((N, N), matvec=lambda x: pre(grid.apply(x.reshape(shape))).ravel(), dtype=float)
        b = pre(F).ravel()
        count = [0]

        def cb(_):
            count[0] += 1

        x, status = gmres(op, b, x0=b.copy(), rtol=rtol, atol=0.0, restart=min(N, 60), maxiter=maxiter,
                          callback=cb, callback_type="pr_norm")
        U = x.reshape(shape)
        its = count[0]
        pres = float(np.linalg.norm(op.matvec(x) - b) / np.linalg.norm(b))
        if status != 0 and pres > 1e3 * rtol:
            warnings.warn(f"GMRES stopped with status {status}, preconditioned residual {pres:.2e}",
                          RuntimeWarning, stacklevel=2)
    else:
        raise ValueError(f"unknown method {method!r}")
    LU = grid.apply(U)
    res = float(np.abs(LU[1:-1] + 2.0).max())
    return Field(grid, U, SolveInfo(method, its, res, pres))
