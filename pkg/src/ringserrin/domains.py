"""Prescribed test domains, including ring domains whose maximum set is a given ellipse.

For an ellipse ``E`` with semi-axes ``a >= b`` and Schwarz function ``S`` (so that
``conj(z) = S(z)`` on ``E``), the function

    q(z) = |z|**2 / 2 - Re G(z) + const,        G' = S,

satisfies ``Laplace(q) = 2`` and vanishes together with its gradient on ``E``.
Then ``u = u_max - q`` solves ``-Laplace(u) = 2`` on the ring ``{q < u_max}`` and
attains its maximum exactly on ``E``.  The foci of ``E`` must lie in the hole so
that ``G`` is single valued on the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import spectral as sp
from .model import inner_radius, umax
from .solver import DomainError, RingDomain


def _sqrt_branch(z, c2):
    # branch of sqrt(z**2 - c**2) behaving like z at infinity, cut on [-c, c]
    return z * np.sqrt(1.0 - c2 / (z * z))


@dataclass(frozen=True)
class EllipticCore:
    a: float
    b: float
    u_max: float

    @property
    def c2(self) -> float:
        return self.a * self.a - self.b * self.b

    def _G(self, z):
        a, b, c2 = self.a, self.b, self.c2
        w = _sqrt_branch(z, c2)
        return ((a * a + b * b) * z * z / 2.0 - a * b * z * w + a * b * c2 * np.log(z + w)) / c2

    def q(self, x, y):
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        q0 = 0.5 * self.a**2 - np.real(self._G(np.complex128(self.a)))
        return 0.5 * np.abs(z) ** 2 - np.real(self._G(z)) - q0

    def u(self, x, y):
        return self.u_max - self.q(x, y)

    def sigma_radius(self, theta):
        """Polar radius of the maximum curve (the ellipse)."""
        return self.a * self.b / np.hypot(self.b * np.cos(theta), self.a * np.sin(theta))

    def zero_level(self, theta, side: str):
        """Polar radius of ``{u = 0}`` on the ray at angle ``theta``."""
        ct, st = math.cos(theta), math.sin(theta)
        f = lambda r: self.q(r * ct, r * st) - self.u_max
        rs = float(self.sigma_radius(theta))
        if side == "inner":
            lo = math.sqrt(self.c2) * 1.02
            if f(lo) <= 0.0:
                raise DomainError("the foci of the maximum ellipse are not inside the hole")
            return brentq(f, lo, rs, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        hi = 2.0 * rs
        while f(hi) <= 0.0:
            hi *= 1.5
        return brentq(f, rs, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    def domain(self, n_modes: int = 48) -> RingDomain:
        """Fourier representation of the two zero-level curves (truncation checked to 1e-13)."""
        n = 4 * n_modes
        th = sp.fourier_nodes(n)
        ri = np.array([self.zero_level(t, "inner") for t in th])
        ro = np.array([self.zero_level(t, "outer") for t in th])
        ic, is_ = sp.trig_fit_cos_sin(ri, n_modes)
        oc, os_ = sp.trig_fit_cos_sin(ro, n_modes)
        lam = ic[0]
        ic = ic.copy()
        ic[0] = 0.0
        dom = RingDomain(lam, ic, is_, 1.0 * np.r_[1.0 - oc[0], -oc[1:]], -os_)
        tc = th + np.pi / n
        err = max(abs(dom.inner(t) - self.zero_level(t, "inner")) for t in tc[::7])
        err = max(err, max(abs(dom.outer(t) - self.zero_level(t, "outer")) for t in tc[::7]))
        if err > 1e-13:
            raise DomainError(f"boundary Fourier truncation error {err:.1e}; raise n_modes")
        return dom


def elliptic_core(R: float, aspect: float, u_max: float | None = None) -> EllipticCore:
    """Ellipse with ``a b = R**2`` and ``a / b = aspect``; ``u_max`` defaults to the model value."""
    a = R * math.sqrt(aspect)
    b = R / math.sqrt(aspect)
    return EllipticCore(a, b, umax(R) if u_max is None else u_max)


@dataclass(frozen=True)
class NamedDomain:
    name: str
    domain: RingDomain
    exact: Callable | None = None


def perturbed_domains(n_modes: int = 48) -> list[NamedDomain]:
    """The prescribed non-radial test domains used by the checks and the acceptance suite.

    Two Fourier perturbations of annuli (their maximum set is a finite set of
    points) and two elliptic-core domains (maximum set is a non-circular curve).
    """
    out = [
        NamedDomain("fourier_inner_cos2", RingDomain(0.3, [0.0, 0.0, 0.02])),
        NamedDomain("fourier_outer_cos3", RingDomain(inner_radius(0.6), outer_cos=[0.0, 0.0, 0.0, 0.015])),
    ]
    for name, R, asp in (("ellipse_core_R0.6", 0.6, 1.06), ("ellipse_core_R0.7", 0.7, 1.1)):
        e = elliptic_core(R, asp)
        out.append(NamedDomain(name, e.domain(n_modes), e.u))
    return out
