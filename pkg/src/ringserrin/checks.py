"""Numerical checks of the comparison estimates for torsion functions on ring domains.

A region ``N`` is a component of ``Omega \\ MAX(u)``.  When the maximum set is a
closed curve ``Sigma`` there are two regions (inside and outside ``Sigma``); when it
is a finite set of points the only region is the whole domain.  Each region is
compared with the model solution whose core radius ``R(N)`` is the expected core
radius of its normalized wall shear stress ``tau(N)``, after rescaling ``u`` so that
both maxima agree.

Every check returns a :class:`CheckReport`.  A check whose hypotheses are not met
by the data is reported with ``applicable=False``; its measured quantities are
still recorded but ``passed`` is ``None``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import spectral as sp
from .model import SQRT2, BranchKind, classify, expected_core_radius, inner_radius, umax
from .pseudo_radial import Branch, W as W_model, psi as psi_model
from .solver import Field, boundary_curvature

TWO_PI = 2.0 * math.pi


class MaxSetKind(enum.Enum):
    CURVE = "curve"
    POINTS = "points"


class Side(enum.Enum):
    INNER = "inner"   # between the inner boundary and Sigma
    OUTER = "outer"   # between Sigma and the outer boundary
    WHOLE = "whole"   # the whole domain minus a finite maximum set


class PohozaevThresholdError(ValueError):
    """The NWSS of the region is too close to sqrt(2) to classify it."""


@dataclass
class MaxSet:
    kind: MaxSetKind
    u_max: float
    eps_loc: float
    s_ridge: np.ndarray        # per-line maximizer
    ridge_values: np.ndarray   # per-line maximum
    fraction: float            # share of lines reaching u_max - eps_loc
    samples: np.ndarray        # (k, 2) points of the ridge within eps_loc of u_max

    def sigma_radius(self, field: Field) -> np.ndarray:
        return field.line_radius(self.s_ridge)


def locate_max_set(field: Field, eps_loc: Optional[float] = None) -> MaxSet:
    """Detect ``MAX(u)`` from the per-line maxima.

    The set is a curve when every radial line reaches ``u_max - eps_loc``
    (default ``1e-8 u_max``); otherwise it is treated as a finite set of points.
    """
    u_max = field.u_max
    eps_loc = 1e-8 * u_max if eps_loc is None else eps_loc
    s_star, vals = field.ridge
    hit = vals >= u_max - eps_loc
    frac = float(np.mean(hit))
    if 0.1 < frac < 0.9:
        warnings.warn(f"maximum set detection ambiguous: {frac:.0%} of lines reach the top level",
                      RuntimeWarning, stacklevel=2)
    r = field.line_radius(s_star)
    pts = np.column_stack([r * np.cos(field.theta), r * np.sin(field.theta)])[hit]
    kind = MaxSetKind.CURVE if frac == 1.0 else MaxSetKind.POINTS
    return MaxSet(kind, u_max, eps_loc, s_star, vals, frac, pts)


def _psi_branch(kind: BranchKind) -> Branch:
    if kind is BranchKind.CRITICAL:
        raise ValueError("region NWSS equals sqrt(2); no model branch is selected")
    return Branch.PLUS if kind is BranchKind.OUTER else Branch.MINUS


@dataclass
class RegionView:
    field: Field
    side: Side
    max_set: MaxSet
    components: tuple[str, ...]
    tau: float
    R: float
    branch: BranchKind
    scale: float        # lengths multiply by ``scale``, u by ``scale**2``

    @property
    def psi_branch(self) -> Branch:
        return _psi_branch(self.branch)

    @property
    def s_range(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-line extent ``[s0, s1]`` of the region."""
        n = self.field.n_theta
        if self.side is Side.INNER:
            return np.zeros(n), self.max_set.s_ridge
        if self.side is Side.OUTER:
            return self.max_set.s_ridge, np.ones(n)
        return np.zeros(n), np.ones(n)

    def node_mask(self) -> np.ndarray:
        s = self.field.s[:, None]
        s0, s1 = self.s_range
        return (s >= s0[None, :]) & (s <= s1[None, :])

    @property
    def r_inner_model(self) -> float:
        return inner_radius(self.R)

    @property
    def has_sigma(self) -> bool:
        return self.max_set.kind is MaxSetKind.CURVE and self.side is not Side.WHOLE


def _region(field: Field, ms: MaxSet, side: Side, comps: tuple[str, ...]) -> RegionView:
    tau = max(field.nwss(c) for c in comps)
    R = expected_core_radius(tau)
    scale = math.sqrt(umax(R) / ms.u_max) if R < 1.0 else float("nan")
    return RegionView(field, side, ms, comps, tau, R, classify(tau, 1e-12), scale)


def regions(field: Field, max_set: Optional[MaxSet] = None) -> list[RegionView]:
    """Components of ``Omega \\ MAX(u)`` with their matched model data."""
    ms = locate_max_set(field) if max_set is None else max_set
    if ms.kind is MaxSetKind.CURVE:
        return [_region(field, ms, Side.INNER, ("inner",)), _region(field, ms, Side.OUTER, ("outer",))]
    return [_region(field, ms, Side.WHOLE, ("inner", "outer"))]


def region(field: Field, side: Side, max_set: Optional[MaxSet] = None) -> RegionView:
    for rv in regions(field, max_set):
        if rv.side is side:
            return rv
    raise ValueError(f"no {side.value} region: maximum set is not a curve")


@dataclass
class CheckReport:
    name: str
    side: str
    applicable: bool
    passed: Optional[bool]
    worst: float              # largest value of (lhs - rhs); <= tol means the inequality holds
    tol: float
    details: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        def conv(v):
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            if isinstance(v, np.bool_):
                return bool(v)
            if isinstance(v, np.ndarray):
                return [conv(x) for x in v.tolist()]
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            if isinstance(v, float) and not math.isfinite(v):
                return str(v)
            return v

        return conv({"name": self.name, "side": self.side, "applicable": self.applicable,
                     "passed": self.passed, "worst": self.worst, "tol": self.tol,
                     "details": self.details, "note": self.note})


def _na(name: str, rv: RegionView, note: str, **details) -> CheckReport:
    return CheckReport(name, rv.side.value, False, None, float("nan"), float("nan"), details, note)


def _normalized_u(rv: RegionView, u):
    um = umax(rv.R)
    return np.clip(rv.scale**2 * np.asarray(u), 0.0, um)


# --------------------------------------------------------------------------
# gradient estimate

def check_gradient_estimate(rv: RegionView, tol: float = 1e-6, rigidity_tol: float = 1e-6) -> CheckReport:
    """``|grad u|**2 <= W_R(u)`` on the region after normalization.

    ``details['rigid']`` is set when the two sides agree to ``rigidity_tol`` at
    every node (the model case); ``details['strict']`` when the inequality is
    strict at every interior node.
    """
    if rv.branch is BranchKind.CRITICAL:
        return _na("gradient_estimate", rv, "region NWSS equals sqrt(2)")
    f = rv.field
    mask = rv.node_mask()
    un = _normalized_u(rv, f.U[mask])
    Wn = rv.scale**2 * f.W[mask]
    WR = W_model(rv.R, rv.psi_branch, un)
    diff = Wn - WR
    interior = mask.copy()
    interior[0] = interior[-1] = False
    d_int = (rv.scale**2 * f.W[interior]) - W_model(rv.R, rv.psi_branch, _normalized_u(rv, f.U[interior]))
    worst = float(diff.max())
    return CheckReport(
        "gradient_estimate", rv.side.value, True, worst <= tol, worst, tol,
        {"max_abs_diff": float(np.abs(diff).max()), "rigid": bool(np.abs(diff).max() < rigidity_tol),
         "strict": bool(d_int.max() < 0.0), "max_interior_diff": float(d_int.max()),
         "R": rv.R, "tau": rv.tau, "branch": rv.branch.value, "nodes": int(mask.sum())})


def gradient_samples(rv: RegionView) -> dict:
    """Per-node data behind the gradient estimate: position, normalized ``u``, ``W`` and ``W_R``."""
    f = rv.field
    mask = rv.node_mask()
    TH, S = np.meshgrid(f.theta, f.s)
    un = _normalized_u(rv, f.U[mask])
    return {"theta": TH[mask], "s": S[mask], "x": f.x[mask], "y": f.y[mask], "u": un,
            "W": rv.scale**2 * f.W[mask], "W_R": W_model(rv.R, rv.psi_branch, un)}


# --------------------------------------------------------------------------
# curvature bounds

def _gradient_argmax(f: Field, comps, rel_tol: float = 1e-9):
    """Boundary points where ``|grad u|`` attains its maximum over the given components."""
    best = max(f.boundary_max_gradient(c)[1] for c in comps)
    pts = []
    for c in comps:
        t, v = f.boundary_max_gradient(c)
        if v >= best * (1.0 - rel_tol):
            pts.append((c, t))
        g = f.normal_derivative(c)
        for t_node in f.theta[g >= best * (1.0 - rel_tol)]:
            pts.append((c, float(t_node)))
    return best, pts


def check_boundary_curvature_bound(rv: RegionView, tol: float = 1e-6) -> CheckReport:
    """At maximizers of ``|grad u|`` on the boundary: ``kappa <= 1`` (outer) or ``<= -1/r_i(R)`` (inner)."""
    if rv.branch is BranchKind.CRITICAL:
        return _na("boundary_curvature_bound", rv, "region NWSS equals sqrt(2)")
    f = rv.field
    _, pts = _gradient_argmax(f, rv.components)
    bound = 1.0 if rv.branch is BranchKind.OUTER else -1.0 / inner_radius(rv.R)
    kap = np.array([float(f.boundary_curvature(c, np.array([t]))[0]) for c, t in pts]) / rv.scale
    worst = float((kap - bound).max())
    return CheckReport("boundary_curvature_bound", rv.side.value, True, worst <= tol, worst, tol,
                       {"bound": bound, "kappa_at_argmax": kap, "slack": float(-worst),
                        "components": [c for c, _ in pts]})


def _sigma_curve(rv: RegionView):
    f = rv.field
    rho = rv.max_set.sigma_radius(f)
    r1 = sp.fourier_diff(rho, 1)
    r2 = sp.fourier_diff(rho, 2)
    return rho, r1, r2


def sigma_curvature_polar(f: Field, ms: MaxSet) -> np.ndarray:
    """Curvature of ``Sigma`` w.r.t. the normal pointing away from the hole."""
    rho = ms.sigma_radius(f)
    return boundary_curvature(rho, sp.fourier_diff(rho, 1), sp.fourier_diff(rho, 2))


def sigma_length(f: Field, ms: MaxSet) -> float:
    rho = ms.sigma_radius(f)
    return float(np.mean(np.hypot(rho, sp.fourier_diff(rho, 1))) * TWO_PI)


def check_sigma_curvature_bound(rv: RegionView, tol: float = 1e-6) -> CheckReport:
    """On ``Sigma``, w.r.t. the normal exterior to ``N``: ``kappa <= -1/R`` if tau < sqrt(2), else ``<= 1/R``."""
    if not rv.has_sigma:
        return _na("sigma_curvature_bound", rv, "maximum set is not a closed curve")
    kp = sigma_curvature_polar(rv.field, rv.max_set)
    kap = (kp if rv.side is Side.INNER else -kp) / rv.scale
    bound = (-1.0 if rv.tau < SQRT2 else 1.0) / rv.R
    worst = float((kap - bound).max())
    return CheckReport("sigma_curvature_bound", rv.side.value, True, worst <= tol, worst, tol,
                       {"bound": bound, "kappa_min": float(kap.min()), "kappa_max": float(kap.max()),
                        "slack": float(-worst)})


@dataclass
class PinchReport:
    applicable: bool
    passed: Optional[bool]
    R_outer: float
    R_inner: float
    lower: float
    upper: float
    kappa_scaled_min: float
    kappa_scaled_max: float
    slack_lower: float
    slack_upper: float
    gap: float

    def to_dict(self) -> dict:
        return {k: (v if not isinstance(v, np.floating) else float(v)) for k, v in self.__dict__.items()}


def core_radii(f: Field) -> tuple[float, float]:
    """Expected core radii ``(R(Gamma_o), R(Gamma_i))`` from the two boundary NWSS values."""
    return expected_core_radius(f.nwss("outer")), expected_core_radius(f.nwss("inner"))


def check_pinch(f: Field, max_set: Optional[MaxSet] = None, tol: float = 1e-6) -> PinchReport:
    """``sqrt(u_max(R_o))/R_o <= kappa sqrt(u_max) <= sqrt(u_max(R_i))/R_i`` along ``Sigma``.

    ``kappa`` is taken w.r.t. the normal pointing away from the hole.  The gap
    ``R_o - R_i`` is recorded in every case; the pinch itself needs a curve.
    """
    ms = locate_max_set(f) if max_set is None else max_set
    Ro, Ri = core_radii(f)
    lo = math.sqrt(umax(Ro)) / Ro
    hi = math.sqrt(umax(Ri)) / Ri
    if ms.kind is not MaxSetKind.CURVE:
        nan = float("nan")
        return PinchReport(False, None, Ro, Ri, lo, hi, nan, nan, nan, nan, Ro - Ri)
    k = sigma_curvature_polar(f, ms) * math.sqrt(ms.u_max)
    s_lo, s_hi = float((k - lo).min()), float((hi - k).min())
    return PinchReport(True, s_lo >= -tol and s_hi >= -tol and Ro >= Ri - tol, Ro, Ri, lo, hi,
                       float(k.min()), float(k.max()), s_lo, s_hi, Ro - Ri)


# --------------------------------------------------------------------------
# Pohozaev identity

def _x_dot_nu_dtheta(f: Field, comp: str, outward_from_region: bool = True):
    """``<x, nu> d sigma / d theta`` on a boundary component with ``nu`` exterior to the domain."""
    rho = f.boundary_radius(comp)
    return rho * rho if comp == "outer" else -rho * rho


def pohozaev_terms(rv: RegionView) -> tuple[float, float]:
    """``(8 int_N (u - u_max), oint_{Gamma_N} (|grad u|**2 - 4 u_max) <x, nu>)``."""
    f = rv.field
    um = rv.max_set.u_max
    if rv.side is Side.WHOLE:
        lhs = 8.0 * f.integrate(f.U - um)
    else:
        s0, s1 = rv.s_range
        lhs = 8.0 * f.integrate_lines(lambda S: f.line_values(S) - um, s0, s1)
    rhs = 0.0
    for c in rv.components:
        g = f.normal_derivative(c)
        rhs += float(np.mean((g * g - 4.0 * um) * _x_dot_nu_dtheta(f, c)) * TWO_PI)
    return lhs, rhs


def check_pohozaev(rv: RegionView, tol: float = 1e-6) -> CheckReport:
    """Relative residual of ``8 int_N (u - u_max) = oint_{Gamma_N} (|grad u|**2 - 4 u_max) <x, nu>``."""
    lhs, rhs = pohozaev_terms(rv)
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return CheckReport("pohozaev", rv.side.value, True, rel <= tol, rel, tol,
                       {"lhs": lhs, "rhs": rhs, "relative_residual": rel})


def gradient_is_constant(f: Field, comp: str, rel_tol: float = 1e-8) -> bool:
    g = f.normal_derivative(comp)
    return bool(np.ptp(g) <= rel_tol * g.max())


def classify_region_by_pohozaev(rv: RegionView, threshold_tol: float = 1e-9,
                                gradient_tol: float = 1e-8) -> Optional[str]:
    """Side predicted by the Pohozaev identity for a region with constant boundary gradient.

    With ``|grad u| = c`` on a connected ``Gamma_N`` the identity gives
    ``c**2 - 4 u_max = 8 int_N (u - u_max) / oint <x, nu>``, whose sign decides
    ``tau < sqrt(2)`` (outer) or ``tau > sqrt(2)`` (inner).  Returns ``None`` when
    the hypotheses do not hold.
    """
    if len(rv.components) != 1 or not gradient_is_constant(rv.field, rv.components[0], gradient_tol):
        return None
    if abs(rv.tau - SQRT2) <= threshold_tol:
        raise PohozaevThresholdError(f"NWSS {rv.tau!r} is within {threshold_tol} of sqrt(2)")
    f = rv.field
    lhs = 8.0 * (f.integrate(f.U - rv.max_set.u_max) if rv.side is Side.WHOLE else
                 f.integrate_lines(lambda S: f.line_values(S) - rv.max_set.u_max, *rv.s_range))
    geo = float(np.mean(_x_dot_nu_dtheta(f, rv.components[0])) * TWO_PI)
    return "outer" if lhs / geo < 0.0 else "inner"


# --------------------------------------------------------------------------
# length bounds

def check_length_bounds(rv: RegionView, tol: float = 1e-6, gradient_tol: float = 1e-8) -> CheckReport:
    """Normalized length inequalities for ``Gamma_N`` and ``Sigma_N``.

    * constant gradient on a connected ``Gamma_N``: ``2 pi <= |Gamma_N|`` (outer) or
      ``|Gamma_N| <= 2 pi r_i(R)`` (inner);
    * ``Sigma_N`` a closed curve: ``|Sigma_N| <= 2 pi R`` if tau < sqrt(2), and
      ``2 pi R <= |Sigma_N|`` on the inner region if tau >= sqrt(2);
    * ``Sigma_N`` a closed curve: ``|Sigma_N| / R <= |Gamma_N|`` if tau < sqrt(2),
      ``|Sigma_N| / R <= |Gamma_N| / r_i(R)`` if tau > sqrt(2).
    """
    f = rv.field
    R, k = rv.R, rv.scale
    ri = inner_radius(R)
    items = {}
    gamma = sum(f.boundary_length(c) for c in rv.components) * k
    if len(rv.components) == 1 and gradient_is_constant(f, rv.components[0], gradient_tol):
        if rv.branch is BranchKind.OUTER:
            items["gamma_vs_circle"] = (TWO_PI, gamma)
        elif rv.branch is BranchKind.INNER:
            items["gamma_vs_circle"] = (gamma, TWO_PI * ri)
    if rv.has_sigma:
        sig = sigma_length(f, rv.max_set) * k
        if rv.tau < SQRT2:
            items["sigma_vs_core"] = (sig, TWO_PI * R)
            items["sigma_vs_gamma"] = (sig / R, gamma)
        else:
            if rv.side is Side.INNER:
                items["sigma_vs_core"] = (TWO_PI * R, sig)
            if rv.tau > SQRT2:
                items["sigma_vs_gamma"] = (sig / R, gamma / ri)
    if not items:
        return _na("length_bounds", rv, "no length bound has its hypotheses met", gamma=gamma)
    margins = {name: lhs - rhs for name, (lhs, rhs) in items.items()}
    worst = max(margins.values())
    return CheckReport("length_bounds", rv.side.value, True, worst <= tol, worst, tol,
                       {"pairs": {n: list(v) for n, v in items.items()}, "margins": margins,
                        "strict": [n for n, m in margins.items() if m < -tol]})


# --------------------------------------------------------------------------
# integral identity on N_eps

def check_crucial_identity(rv: RegionView, eps: float = 1e-3, tol: float = 1e-6) -> CheckReport:
    """Divergence identity behind the length bounds on ``N_eps = N cap {u <= u_max - eps}``.

        int_{N_eps} 2 Psi**2 / (Psi**2 - R**2)**3 (W - W_R)
            = -oint_{Gamma_N} |grad u| / (Psi**2 - R**2) + oint_{Sigma_eps} |grad u| / (Psi**2 - R**2)

    in normalized variables.  The left side is <= 0 on outer regions and >= 0 on
    inner ones.
    """
    if not rv.has_sigma or rv.branch is BranchKind.CRITICAL:
        return _na("crucial_identity", rv, "needs a region bounded by a maximum curve")
    f = rv.field
    R, k, br = rv.R, rv.scale, rv.psi_branch
    um_n = umax(R)
    level_n = um_n - eps
    level = level_n / k**2
    side = "inner" if rv.side is Side.INNER else "outer"
    s_eps = f.level_crossings(level, side)
    if np.any(np.isnan(s_eps)):
        return _na("crucial_identity", rv, "level set does not cross every radial line")
    s0, s1 = rv.s_range
    a0, a1 = (s0, s_eps) if side == "inner" else (s_eps, s1)

    def integrand(S):
        un = _normalized_u(rv, f.line_values(S))
        p = np.asarray(psi_model(R, br, un))
        d = p * p - R * R
        return 2.0 * p * p / d**3 * (k * k * f.line_gradient_sq(S) - W_model(R, br, un))

    lhs = k * k * f.integrate_lines(integrand, a0, a1)
    p0 = float(psi_model(R, br, 0.0))
    comp = rv.components[0]
    rho, r1 = f.boundary_radius(comp), f.boundary_radius(comp, None, 1)
    g_int = float(np.mean(f.normal_derivative(comp) * np.hypot(rho, r1)) * TWO_PI)
    pe = float(psi_model(R, br, level_n))
    rho_e = f.line_radius(s_eps)
    ge = np.sqrt(f.line_gradient_sq(s_eps))
    s_int = float(np.mean(ge * np.hypot(rho_e, sp.fourier_diff(rho_e, 1))) * TWO_PI)
    # |grad u_n| = k |grad u| and d sigma_n = k d sigma
    rhs = -k * k * g_int / (p0 * p0 - R * R) + k * k * s_int / (pe * pe - R * R)
    scale = max(abs(k * k * g_int / (p0 * p0 - R * R)), abs(lhs), 1e-300)
    rel = abs(lhs - rhs) / scale
    sign_ok = lhs <= tol * scale if rv.branch is BranchKind.OUTER else lhs >= -tol * scale
    return CheckReport("crucial_identity", rv.side.value, True, bool(rel <= tol and sign_ok), rel, tol,
                       {"lhs": lhs, "rhs": rhs, "relative_residual": rel, "sign_ok": bool(sign_ok), "eps": eps})


# --------------------------------------------------------------------------
# expansion of |grad u|**2 near Sigma

def check_sigma_expansion(rv: RegionView, delta: float = 0.02, n_points: int = 8, tol: float = 0.05) -> CheckReport:
    """Fit ``W = 4 r**2 (1 + c r + ...)`` and ``W_R(u) = 4 r**2 (1 + c' r + ...)`` along normals to ``Sigma``.

    ``r`` is the distance to ``Sigma`` and ``kappa`` its curvature w.r.t. the
    normal exterior to ``N``.  Expected: ``c = kappa`` and
    ``c' = kappa/3 - 2/(3R)`` (tau < sqrt(2)) or ``kappa/3 + 2/(3R)`` (tau > sqrt(2)),
    in normalized variables.  ``tol`` is relative.
    """
    if not rv.has_sigma or rv.branch is BranchKind.CRITICAL:
        return _na("sigma_expansion", rv, "maximum set is not a closed curve")
    f = rv.field
    R, k = rv.R, rv.scale
    rho, r1, r2 = _sigma_curve(rv)
    kp = boundary_curvature(rho, r1, r2)
    idx = np.linspace(0, f.n_theta, n_points, endpoint=False).astype(int)
    t = delta * np.linspace(0.05, 1.0, 40)
    sgn = 1.0 if rv.side is Side.OUTER else -1.0
    pm = -1.0 if rv.branch is BranchKind.OUTER else 1.0
    A = np.column_stack([t, t * t, t**3]) * k
    errs, fits = [], []
    for m in idx:
        th = f.theta[m]
        er = np.array([math.cos(th), math.sin(th)])
        et = np.array([-math.sin(th), math.cos(th)])
        p = rho[m] * er
        n = rho[m] * er - r1[m] * et
        n = sgn * n / np.linalg.norm(n)
        X = p[0] + t * n[0]
        Y = p[1] + t * n[1]
        gx, gy = f.gradient(X, Y)
        tn = k * t
        g = k * k * (gx * gx + gy * gy) / (4.0 * tn * tn) - 1.0
        gR = W_model(R, rv.psi_branch, _normalized_u(rv, f.evaluate(X, Y))) / (4.0 * tn * tn) - 1.0
        c = float(np.linalg.lstsq(A, g, rcond=None)[0][0])
        cR = float(np.linalg.lstsq(A, gR, rcond=None)[0][0])
        kap = float(kp[m] if rv.side is Side.INNER else -kp[m]) / k
        cR_expected = kap / 3.0 + pm * 2.0 / (3.0 * R)
        fits.append({"c": c, "kappa": kap, "c_model": cR, "c_model_expected": cR_expected})
        errs.append(max(abs(c - kap) / abs(kap), abs(cR - cR_expected) / abs(cR_expected)))
    worst = float(max(errs))
    return CheckReport("sigma_expansion", rv.side.value, True, worst <= tol, worst, tol,
                       {"fits": fits, "delta": delta})


# --------------------------------------------------------------------------
# level-set flux

def level_flux(rv: RegionView, t: float) -> float:
    """``oint_{u = t} |grad u| d sigma`` inside the region (graph level curves only)."""
    f = rv.field
    total = 0.0
    sides = ("inner", "outer") if rv.side is Side.WHOLE else (rv.side.value,)
    for side in sides:
        lim = f.ridge[0]
        s_t = f.level_crossings(t, side, lim)
        if np.any(np.isnan(s_t)):
            raise ValueError(f"level {t!r} is not a graph over theta in the {side} part")
        rho = f.line_radius(s_t)
        g = np.sqrt(f.line_gradient_sq(s_t))
        total += float(np.mean(g * np.hypot(rho, sp.fourier_diff(rho, 1))) * TWO_PI)
    return total


def level_quotients(rv: RegionView, n_levels: int = 40, top: float = 0.975) -> tuple[np.ndarray, np.ndarray]:
    """Levels ``t_j`` and ``U(t_j) = oint_{u=t_j} |grad u| / (u_max - t_j)``.

    Levels are equispaced in ``[0, top * m]`` where ``m`` is ``u_max`` for regions
    bounded by a maximum curve and the lowest line maximum for the whole domain.
    """
    um = rv.max_set.u_max
    m = um if rv.side is not Side.WHOLE else float(rv.max_set.ridge_values.min())
    ts = np.linspace(0.0, top * m, n_levels)
    U = np.array([level_flux(rv, t) / (um - t) for t in ts])
    return ts, U


def check_U_monotone(rv: RegionView, n_levels: int = 40, tol: float = 1e-8) -> CheckReport:
    """``U(t)`` nonincreasing along the level grid (up to ``tol`` relative).

    Monotonicity is implied only when the region NWSS is at most 1; otherwise the
    report is marked not applicable but still carries the measured values.
    """
    ts, U = level_quotients(rv, n_levels)
    inc = np.diff(U) / U[:-1]
    worst = float(inc.max())
    return CheckReport("U_monotone", rv.side.value, bool(rv.tau <= 1.0 + 1e-12), worst <= tol, worst, tol,
                       {"levels": ts, "U": U, "increasing_steps": int(np.sum(inc > tol)),
                        "tau_at_most_one": bool(rv.tau <= 1.0)},
                       "" if rv.tau <= 1.0 else "region NWSS exceeds 1; monotonicity is not implied")


def check_divergence_inequality(rv: RegionView, tol: float = 1e-8) -> CheckReport:
    """``|grad u|**2 + 2u - 2 u_max <= 0`` on the region.

    Implied only when the region NWSS is at most 1 (applicability flag); the
    measured values are reported either way.
    """
    f = rv.field
    mask = rv.node_mask()
    val = f.W[mask] + 2.0 * f.U[mask] - 2.0 * rv.max_set.u_max
    worst = float(val.max())
    note = "" if rv.tau <= 1.0 + 1e-12 else "region NWSS exceeds 1; the inequality is not implied"
    return CheckReport("divergence_inequality", rv.side.value, bool(rv.tau <= 1.0 + 1e-12), worst <= tol, worst, tol,
                       {"tau": rv.tau, "positive_nodes": int(np.sum(val > tol))}, note)


def level_length(rv: RegionView, t: float) -> float:
    """Length of ``{u = t}`` inside a region bounded by a maximum curve."""
    f = rv.field
    s_t = f.level_crossings(t, rv.side.value)
    rho = f.line_radius(s_t)
    return float(np.mean(np.hypot(rho, sp.fourier_diff(rho, 1))) * TWO_PI)


# --------------------------------------------------------------------------

def run_suite(f: Field, *, tol: float = 1e-6, pohozaev_tol: float = 1e-6, full: bool = False) -> dict:
    """Checks on all regions plus the pinch; returns plain data.

    ``full`` adds the level-set monotonicity and the expansion near ``Sigma``.
    """
    ms = locate_max_set(f)
    out = {"max_set": {"kind": ms.kind.value, "u_max": ms.u_max, "fraction": ms.fraction},
           "nwss": {"inner": f.nwss("inner"), "outer": f.nwss("outer")},
           "regions": [], "pinch": check_pinch(f, ms, tol).to_dict(),
           "solve": {"method": f.info.method, "iterations": f.info.iterations,
                     "residual": f.info.residual, "resolution": list(f.resolution)}}
    for rv in regions(f, ms):
        reps = [check_gradient_estimate(rv, tol), check_boundary_curvature_bound(rv, tol),
                check_sigma_curvature_bound(rv, tol), check_pohozaev(rv, pohozaev_tol),
                check_length_bounds(rv, tol), check_crucial_identity(rv, tol=tol),
                check_divergence_inequality(rv)]
        if full:
            reps += [check_U_monotone(rv), check_sigma_expansion(rv)]
        try:
            cls = classify_region_by_pohozaev(rv)
        except PohozaevThresholdError:
            cls = "threshold"
        out["regions"].append({"side": rv.side.value, "tau": rv.tau, "R": rv.R, "branch": rv.branch.value,
                               "scale": rv.scale, "pohozaev_class": cls,
                               "checks": [r.to_dict() for r in reps]})
    return out
