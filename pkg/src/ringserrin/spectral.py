"""Chebyshev (radial) and Fourier (angular) building blocks on ``s in [0, 1]``, ``theta in [0, 2 pi)``."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar


@lru_cache(maxsize=None)
def cheb(n: int):
    """Lobatto nodes ``s_j = (1 - cos(pi j / (n-1))) / 2`` and the d/ds matrix.

    ``s_0 = 0`` is the inner end.  Built from the classical ``x in [-1, 1]`` matrix
    with ``x = 1 - 2s``.
    """
    N = n - 1
    x = np.cos(np.pi * np.arange(n) / N)
    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n)
    X = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (X + np.eye(n))
    D -= np.diag(D.sum(axis=1))
    s = 0.5 * (1.0 - x)
    Ds = -2.0 * D
    s.setflags(write=False)
    Ds.setflags(write=False)
    return s, Ds


@lru_cache(maxsize=None)
def clenshaw_curtis(n: int):
    """Quadrature weights on ``[0, 1]`` for the Lobatto nodes of :func:`cheb`."""
    N = n - 1
    theta = np.pi * np.arange(n) / N
    w = np.zeros(n)
    v = np.ones(N - 1)
    inner = np.arange(1, N)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N * N - 1)
        for k in range(1, N // 2):
            v -= 2.0 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
        v -= np.cos(N * theta[inner]) / (N * N - 1)
    else:
        w[0] = w[N] = 1.0 / (N * N)
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
    w[inner] = 2.0 * v / N
    w *= 0.5
    w.setflags(write=False)
    return w


@lru_cache(maxsize=None)
def cheb_vandermonde_inv(n: int):
    """Matrix mapping nodal values to Chebyshev coefficients in ``x = 1 - 2s``."""
    x = np.cos(np.pi * np.arange(n) / (n - 1))
    V = np.polynomial.chebyshev.chebvander(x, n - 1)
    Vi = np.linalg.inv(V)
    Vi.setflags(write=False)
    return Vi


def cheb_coeffs(values):
    """Chebyshev coefficients of each column of ``values`` (nodes along axis 0)."""
    values = np.asarray(values)
    return cheb_vandermonde_inv(values.shape[0]) @ values


def cheb_deriv_coeffs(coef):
    """Coefficients of d/ds for series in ``x = 1 - 2s`` (zero-padded to the input length)."""
    d = -2.0 * np.polynomial.chebyshev.chebder(coef, axis=0)
    return np.concatenate([d, np.zeros_like(coef[:1])], axis=0)


def cheb_eval_columns(coef, s):
    """Evaluate column ``m`` of ``coef`` at ``s[..., m]`` (Clenshaw, vectorized)."""
    coef = np.asarray(coef)
    x = 1.0 - 2.0 * np.asarray(s, dtype=float)
    b1 = np.zeros(np.broadcast_shapes(x.shape, coef.shape[1:]))
    b2 = np.zeros_like(b1)
    for k in range(coef.shape[0] - 1, 0, -1):
        b1, b2 = coef[k] + 2.0 * x * b1 - b2, b1
    return coef[0] + x * b1 - b2


def fourier_nodes(n: int):
    return 2.0 * np.pi * np.arange(n) / n


def fourier_wavenumbers(n: int):
    m = np.arange(n // 2 + 1, dtype=float)
    return m


def fourier_diff(values, order: int = 1, axis: int = -1):
    """Spectral derivative along a periodic axis sampled at equispaced nodes."""
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    vh = np.fft.rfft(values, axis=axis)
    m = fourier_wavenumbers(n)
    fac = (1j * m) ** order
    if n % 2 == 0 and order % 2 == 1:
        fac[-1] = 0.0
    shape = [1] * values.ndim
    shape[axis] = m.size
    return np.fft.irfft(vh * fac.reshape(shape), n=n, axis=axis)


@lru_cache(maxsize=None)
def fourier_diff_matrix(n: int, order: int):
    M = fourier_diff(np.eye(n), order=order, axis=0)
    M.setflags(write=False)
    return M


def trig_eval(values, theta, deriv: int = 0):
    """Evaluate the trigonometric interpolant of periodic samples at ``theta``."""
    values = np.asarray(values, dtype=float)
    n = values.size
    c = np.fft.rfft(values) / n
    m = fourier_wavenumbers(n)
    w = np.full(m.size, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    th = np.asarray(theta, dtype=float)
    ph = np.exp(1j * np.multiply.outer(th, m))
    fac = (1j * m) ** deriv
    if deriv % 2 == 1 and n % 2 == 0:
        fac[-1] = 0.0
    return np.real(ph @ (w * fac * c))


def periodic_argmax(values, refine: int = 16):
    """Location and value of the maximum of the trigonometric interpolant."""
    values = np.asarray(values, dtype=float)
    n = values.size
    fine = np.fft.irfft(np.fft.rfft(values), n=refine * n) * refine
    j = int(np.argmax(fine))
    h = 2.0 * np.pi / (refine * n)
    t0 = j * h
    res = minimize_scalar(lambda t: -trig_eval(values, t), bounds=(t0 - 2 * h, t0 + 2 * h),
                          method="bounded", options={"xatol": 1e-13})
    t = float(res.x) % (2.0 * np.pi)
    val = float(trig_eval(values, t))
    if fine[j] > val:
        t, val = t0, float(fine[j])
    return t, val


def trig_fit_cos_sin(values, n_modes: int):
    """Cosine/sine coefficients (frequencies 0..n_modes-1) of periodic samples."""
    values = np.asarray(values, dtype=float)
    n = values.size
    c = np.fft.rfft(values) / n
    k = min(n_modes, c.size)
    cos = 2.0 * c.real[:k]
    sin = -2.0 * c.imag[:k]
    cos[0] *= 0.5
    sin[0] = 0.0
    if n % 2 == 0 and k == c.size:
        cos[-1] *= 0.5
        sin[-1] = 0.0
    return cos, sin


def cos_sin_eval(cos, sin, theta, deriv: int = 0):
    """Evaluate ``sum_j cos_j cos(j theta) + sin_j sin(j theta)`` or a derivative."""
    th = np.asarray(theta, dtype=float)
    cos = np.asarray(cos, dtype=float)
    sin = np.asarray(sin, dtype=float)
    out = np.zeros_like(th)
    for j in range(max(cos.size, sin.size)):
        a = cos[j] if j < cos.size else 0.0
        b = sin[j] if j < sin.size else 0.0
        if a == 0.0 and b == 0.0:
            continue
        c, s = np.cos(j * th), np.sin(j * th)
        # d^p/dtheta^p of (a cos + b sin) cycles through (a, b) -> (b j, -a j)
        for _ in range(deriv):
            a, b = b * j, -a * j
        out = out + a * c + b * s
    return out
