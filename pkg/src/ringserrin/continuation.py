"""Shooting residual of the constant-gradient problem and numerical construction of
the non-radial solution branches that bifurcate from the model annuli.

A perturbation ``v = (v1, v2)`` of the annulus ``lam < |x| < 1`` moves the inner
boundary to ``lam + v1(theta)`` and the outer one to ``1 - v2(theta)``.  The
shooting residual is the deviation of the inward normal derivatives of the
torsion function on the perturbed domain from the model constants
``c_i = (R**2 - lam**2) / lam`` and ``c_o = 1 - R**2``.  Zeros of the residual are
ring domains on which ``|grad u|`` is constant on each boundary component.

Perturbations are restricted to cosine modes whose frequencies are multiples of a
generator ``g`` (the domains are symmetric under ``theta -> -theta`` and under
rotation by ``2 pi / g``).  Near ``lam_k`` the zero set contains a curve
``s -> (s (z + w(s)), lam(s))`` with ``z`` the null direction of the linearization
on frequency ``k`` and ``w`` orthogonal to ``z``; :func:`continue_branch` follows
it by prescribing ``s`` and solving for ``w`` and ``lam`` with Newton's method.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import spectrum
from .checks import MaxSetKind, core_radii, locate_max_set, run_suite
from .io import read_json, to_jsonable, write_csv, write_json
from .model import SQRT2, lambda_to_core_radius
from .solver import DomainError, Field, ResolutionError, RingDomain, solve

log = logging.getLogger(__name__)

DEFAULT_RESOLUTION = (96, 64)

# checks whose failure voids a branch-point certificate
CERTIFIED_CHECKS = ("gradient_estimate", "boundary_curvature_bound", "pohozaev", "length_bounds")


# --------------------------------------------------------------------------
# perturbation vectors

@dataclass(frozen=True)
class SymmetryGroup:
    """Admitted cosine frequencies ``0, g, 2g, ...``; the circle eigenvalues are ``(i g)**2``."""

    generator: int = 2

    def __post_init__(self):
        if int(self.generator) != self.generator or self.generator < 2:
            raise ValueError(f"group generator must be an integer >= 2, got {self.generator!r}")

    def frequencies(self, n_modes: int) -> np.ndarray:
        return self.generator * np.arange(n_modes)

    def eigenvalue(self, i: int) -> int:
        return (i * self.generator) ** 2

    def admits(self, k: int) -> bool:
        return k % self.generator == 0


def _circle_weights(freqs) -> np.ndarray:
    # integral of cos(f theta)**2 over the circle
    return np.where(np.asarray(freqs) == 0, 2.0 * math.pi, math.pi)


@dataclass(frozen=True, eq=False)
class PerturbationVector:
    """Cosine coefficients of ``v1`` (inner) and ``v2`` (outer) at the listed frequencies."""

    freqs: np.ndarray
    coeffs_inner: np.ndarray
    coeffs_outer: np.ndarray

    def __post_init__(self):
        for name in ("freqs", "coeffs_inner", "coeffs_outer"):
            a = np.array(getattr(self, name), dtype=int if name == "freqs" else float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if not (self.freqs.shape == self.coeffs_inner.shape == self.coeffs_outer.shape):
            raise ValueError("frequency and coefficient arrays must have the same length")

    @classmethod
    def zero(cls, freqs) -> "PerturbationVector":
        z = np.zeros(len(freqs))
        return cls(freqs, z, z)

    @property
    def norm(self) -> float:
        """Upper bound for ``max(sup |v1|, sup |v2|)``."""
        return float(max(np.abs(self.coeffs_inner).sum(), np.abs(self.coeffs_outer).sum()))

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        n = int(self.freqs.max()) + 1 if self.freqs.size else 1
        ci, co = np.zeros(n), np.zeros(n)
        np.add.at(ci, self.freqs, self.coeffs_inner)
        np.add.at(co, self.freqs, self.coeffs_outer)
        return ci, co

    def domain(self, lam: float) -> RingDomain:
        ci, co = self.dense()
        return RingDomain(lam, ci, outer_cos=co)

    def inner_product(self, other: "PerturbationVector", lam: float) -> float:
        """``lam oint v1 w1 + oint v2 w2``."""
        if not np.array_equal(self.freqs, other.freqs):
            raise ValueError("perturbation vectors use different frequencies")
        w = _circle_weights(self.freqs)
        return float(lam * np.sum(w * self.coeffs_inner * other.coeffs_inner)
                     + np.sum(w * self.coeffs_outer * other.coeffs_outer))

    def scaled(self, c: float) -> "PerturbationVector":
        return PerturbationVector(self.freqs, c * self.coeffs_inner, c * self.coeffs_outer)

    def __add__(self, other: "PerturbationVector") -> "PerturbationVector":
        if not np.array_equal(self.freqs, other.freqs):
            raise ValueError("perturbation vectors use different frequencies")
        return PerturbationVector(self.freqs, self.coeffs_inner + other.coeffs_inner,
                                  self.coeffs_outer + other.coeffs_outer)

    def rotated(self, angle: float) -> "PerturbationVector":
        """Coefficients of ``v(theta + angle)``; only exact when ``cos(f angle) = +-1`` for all ``f``."""
        c = np.cos(self.freqs * angle)
        if np.any(np.abs(np.abs(c) - 1.0) > 1e-12):
            raise ValueError("rotation does not map the cosine family to itself")
        c = np.round(c)
        return PerturbationVector(self.freqs, c * self.coeffs_inner, c * self.coeffs_outer)

    def coefficient(self, f: int) -> tuple[float, float]:
        idx = np.flatnonzero(self.freqs == f)
        if idx.size == 0:
            return 0.0, 0.0
        return float(self.coeffs_inner[idx[0]]), float(self.coeffs_outer[idx[0]])

    def to_dict(self) -> dict:
        return {"freqs": self.freqs.tolist(), "inner": self.coeffs_inner.tolist(),
                "outer": self.coeffs_outer.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "PerturbationVector":
        return cls(d["freqs"], d["inner"], d["outer"])


def model_constants(lam: float) -> tuple[float, float]:
    """``(c_i, c_o)``: the model normal derivatives on the inner and outer circle."""
    r2 = lambda_to_core_radius(lam) ** 2
    return (r2 - lam * lam) / lam, 1.0 - r2


# --------------------------------------------------------------------------
# shooting residual

@dataclass(frozen=True, eq=False)
class ShootingResidual:
    lam: float
    theta: np.ndarray
    inner: np.ndarray
    outer: np.ndarray
    field: Field = field(repr=False)

    @property
    def sup(self) -> float:
        return float(max(np.abs(self.inner).max(), np.abs(self.outer).max()))

    def cos_coefficients(self, freqs) -> tuple[np.ndarray, np.ndarray]:
        """Cosine coefficients of the two traces at ``freqs`` (``trace ~ sum c_f cos(f theta)``)."""
        return _cos_coeffs(self.inner, freqs), _cos_coeffs(self.outer, freqs)

    def truncation_sup(self, freqs) -> float:
        """Sup norm of the part of the residual outside the given cosine modes."""
        ci, co = self.cos_coefficients(freqs)
        th = self.theta
        C = np.cos(np.multiply.outer(th, np.asarray(freqs)))
        return float(max(np.abs(self.inner - C @ ci).max(), np.abs(self.outer - C @ co).max()))


def _cos_coeffs(trace, freqs) -> np.ndarray:
    n = trace.size
    c = np.fft.rfft(trace) / n
    out = 2.0 * c.real[np.asarray(freqs)]
    out[np.asarray(freqs) == 0] *= 0.5
    if n % 2 == 0:
        out[np.asarray(freqs) == n // 2] *= 0.5
    return out


def shooting_residual(lam: float, v: PerturbationVector, resolution=DEFAULT_RESOLUTION,
                      *, max_solve_residual: float = 1e-8) -> ShootingResidual:
    """Normal-derivative deviations on ``lam + v1 < |x| < 1 - v2`` from the model constants.

    Raises :class:`ResolutionError` if the discrete equation is not satisfied to
    ``max_solve_residual`` and :class:`DomainError` for inadmissible domains.
    """
    f = solve(v.domain(lam), resolution)
    if not (f.info.residual <= max_solve_residual):
        raise ResolutionError(f"solve residual {f.info.residual:.2e} exceeds {max_solve_residual:.0e}")
    ci, co = model_constants(lam)
    return ShootingResidual(lam, f.theta, f.normal_derivative_inner - ci, f.normal_derivative_outer - co, f)


def _project_basis(res: ShootingResidual, k: int) -> np.ndarray:
    """Components ``<F, e1>_lam`` and ``<F, e2>_lam`` of a residual."""
    lam = res.lam
    Y = np.cos(k * res.theta) / math.sqrt(math.pi)
    if k == 0:
        Y = np.full_like(res.theta, 1.0 / math.sqrt(2.0 * math.pi))
    w = 2.0 * math.pi / res.theta.size
    return np.array([math.sqrt(lam) * np.sum(res.inner * Y) * w, np.sum(res.outer * Y) * w])


def _basis_vector(lam: float, k: int, j: int, t: float) -> PerturbationVector:
    y = 1.0 / math.sqrt(2.0 * math.pi if k == 0 else math.pi)
    ci = np.array([t * y / math.sqrt(lam) if j == 0 else 0.0])
    co = np.array([t * y if j == 1 else 0.0])
    return PerturbationVector([k], ci, co)


def fd_linearization(lam: float, k: int, h: float = 1e-4, resolution=DEFAULT_RESOLUTION,
                     *, agreement_tol: float = 1e-3) -> np.ndarray:
    """Central-difference matrix of the shooting residual on frequency ``k``.

    Columns are the images of ``e1 = (Y / sqrt(lam), 0)`` and ``e2 = (0, Y)`` with
    ``Y`` the unit-L2 cosine of frequency ``k``, rows their ``<., .>_lam``
    components.  Warns when the one-sided quotients disagree by more than
    ``agreement_tol`` (relative).
    """
    if not (1e-5 <= h <= 1e-3):
        raise ValueError(f"difference step must lie in [1e-5, 1e-3], got {h!r}")
    if k < 0 or int(k) != k:
        raise ValueError(f"frequency must be a nonnegative integer, got {k!r}")
    base = _project_basis(shooting_residual(lam, PerturbationVector.zero([k]), resolution), k)
    M = np.zeros((2, 2))
    worst = 0.0
    for j in range(2):
        fp = _project_basis(shooting_residual(lam, _basis_vector(lam, k, j, h), resolution), k)
        fm = _project_basis(shooting_residual(lam, _basis_vector(lam, k, j, -h), resolution), k)
        M[:, j] = (fp - fm) / (2.0 * h)
        fwd, bwd = (fp - base) / h, (base - fm) / h
        scale = max(np.abs(M[:, j]).max(), 1e-300)
        worst = max(worst, float(np.abs(fwd - bwd).max() / scale))
    if worst > agreement_tol:
        warnings.warn(f"one-sided difference quotients disagree by {worst:.1e} (relative); "
                      "the step is too large or too small", RuntimeWarning, stacklevel=2)
    return M


@dataclass(frozen=True)
class NullVector:
    k: int
    lam: float
    z: np.ndarray                 # components in (e1, e2)
    eigenvalue: float
    residual: float               # |M z - mu z|
    direction: PerturbationVector

    @property
    def inner_coefficient(self) -> float:
        return float(self.direction.coeffs_inner[0])


def null_eigenvector(k: int, lam: Optional[float] = None) -> NullVector:
    """Unit eigenvector of ``M_{lam_k, k}`` for its eigenvalue closest to zero, lifted to a perturbation."""
    if lam is None:
        lam = spectrum.find_bifurcation_point(k).lam
    M = spectrum.matrix(lam, k)
    vals, vecs = np.linalg.eig(M)
    i = int(np.argmin(np.abs(vals)))
    mu = float(np.real(vals[i]))
    z = np.real(vecs[:, i])
    z = z / np.linalg.norm(z)
    if z[0] < 0.0:
        z = -z
    res = float(np.linalg.norm(M @ z - mu * z))
    y = 1.0 / math.sqrt(math.pi)
    direction = PerturbationVector([k], [z[0] * y / math.sqrt(lam)], [z[1] * y])
    return NullVector(k, lam, z, mu, res, direction)


# --------------------------------------------------------------------------
# branch continuation

@dataclass(frozen=True, eq=False)
class BranchPoint:
    s: float
    lam: float
    v: PerturbationVector
    residual_sup: float
    mode_amplitude: float       # sign(s) times the <.,.>_lam-norm of the frequency-k part of v
    nwss_inner: float
    nwss_outer: float
    iterations: int = 0
    truncation_sup: float = 0.0

    def domain(self) -> RingDomain:
        return self.v.domain(self.lam)

    def to_dict(self) -> dict:
        return {"s": self.s, "lambda": self.lam, "v": self.v.to_dict(), "residual_sup": self.residual_sup,
                "mode_amplitude": self.mode_amplitude, "nwss_inner": self.nwss_inner,
                "nwss_outer": self.nwss_outer, "iterations": self.iterations,
                "truncation_sup": self.truncation_sup}

    @classmethod
    def from_dict(cls, d: dict) -> "BranchPoint":
        return cls(d["s"], d["lambda"], PerturbationVector.from_dict(d["v"]), d["residual_sup"],
                   d["mode_amplitude"], d["nwss_inner"], d["nwss_outer"], d.get("iterations", 0),
                   d.get("truncation_sup", 0.0))


@dataclass
class Branch:
    k: int
    group: SymmetryGroup
    lam_k: float
    null: NullVector
    points: list[BranchPoint]
    truncated: bool = False
    diagnostics: list[str] = field(default_factory=list)

    def sorted_points(self) -> list[BranchPoint]:
        return sorted(self.points, key=lambda p: p.s)

    def point(self, s: float) -> BranchPoint:
        return min(self.points, key=lambda p: abs(p.s - s))


class _BranchSystem:
    """Equations ``F(s (z + w), lam) / s = 0`` and ``<w, z>_{lam_k} = 0`` in the unknowns ``(w, lam)``."""

    def __init__(self, null: NullVector, freqs: np.ndarray, resolution):
        self.null = null
        self.freqs = freqs
        self.resolution = resolution
        self.n = freqs.size
        zi, zo = null.direction.coefficient(null.k)
        self.z = PerturbationVector(freqs, np.where(freqs == null.k, zi, 0.0), np.where(freqs == null.k, zo, 0.0))
        w = _circle_weights(freqs)
        self.con_i = null.lam * w * self.z.coeffs_inner
        self.con_o = w * self.z.coeffs_outer

    def v_of(self, x, s) -> PerturbationVector:
        w = PerturbationVector(self.freqs, x[:self.n], x[self.n:2 * self.n])
        return (self.z + w).scaled(s)

    def evaluate(self, x, s) -> tuple[np.ndarray, ShootingResidual]:
        res = shooting_residual(float(x[-1]), self.v_of(x, s), self.resolution)
        ci, co = res.cos_coefficients(self.freqs)
        con = float(self.con_i @ x[:self.n] + self.con_o @ x[self.n:2 * self.n])
        return np.concatenate([ci / s, co / s, [con]]), res

    def jacobian(self, x, s, G0, step: float) -> np.ndarray:
        J = np.empty((x.size, x.size))
        for j in range(x.size):
            xp = x.copy()
            xp[j] += step
            J[:, j] = (self.evaluate(xp, s)[0] - G0) / step
        return J


def _mode_amplitude(v: PerturbationVector, k: int, lam: float, s: float) -> float:
    mask = v.freqs == k
    part = PerturbationVector(v.freqs, np.where(mask, v.coeffs_inner, 0.0), np.where(mask, v.coeffs_outer, 0.0))
    return math.copysign(math.sqrt(part.inner_product(part, lam)), s) if s != 0.0 else 0.0


def continue_branch(k: int = 2, n_steps: int = 3, ds: float = 1e-2, *, group: Optional[SymmetryGroup] = None,
                    n_modes: int = 8, resolution=DEFAULT_RESOLUTION, tol_newton: float = 1e-8,
                    max_iter: int = 15, fd_step: float = 1e-6, max_halvings: int = 3) -> Branch:
    """Points of the branch bifurcating at ``lam_k`` for ``s = 0, +-ds, ..., +-n_steps ds``.

    Each point is found by Newton's method with a forward-difference Jacobian
    (reused while the iteration contracts well).  Predictors extrapolate the
    last two converged points linearly in ``s``.  A step that fails to converge,
    or leaves the admissible domains, is retried through intermediate values of
    ``s``; if that fails too the branch is returned truncated with a diagnostic.
    """
    group = group or SymmetryGroup(2)
    if not group.admits(k) or k < 2:
        raise ValueError(f"frequency {k} is not admitted by the group with generator {group.generator}")
    if n_modes < 4:
        raise ValueError("at least 4 admitted frequencies are required")
    freqs = group.frequencies(n_modes)
    if k not in freqs:
        raise ValueError(f"frequency {k} lies above the truncation {freqs[-1]}")
    bp = spectrum.find_bifurcation_point(k)
    null = null_eigenvector(k, bp.lam)
    system = _BranchSystem(null, freqs, resolution)
    zero = PerturbationVector.zero(freqs)
    res0 = shooting_residual(bp.lam, zero, resolution)
    f0 = res0.field
    origin = BranchPoint(0.0, bp.lam, zero, res0.sup, 0.0, f0.nwss("inner"), f0.nwss("outer"))
    branch = Branch(k, group, bp.lam, null, [origin])
    x_origin = np.concatenate([np.zeros(2 * freqs.size), [bp.lam]])
    state = {"J": None}

    def newton(x, s):
        G, res = system.evaluate(x, s)
        J = state["J"]
        prev = math.inf
        for it in range(1, max_iter + 1):
            if J is None:
                J = system.jacobian(x, s, G, fd_step)
            dx = np.linalg.solve(J, -G)
            x_new = x + dx
            G_new, res_new = system.evaluate(x_new, s)
            if res.sup < tol_newton and res_new.sup > 0.1 * res.sup:
                # converged and at the discretization floor
                state["J"] = J
                return (x_new, res_new, it) if res_new.sup < res.sup else (x, res, it - 1)
            x, G, res = x_new, G_new, res_new
            gn = float(np.abs(G).max())
            log.debug("s=%g it=%d |G|=%.2e sup F=%.2e", s, it, gn, res.sup)
            if res.sup < 1e-3 * tol_newton:
                state["J"] = J
                return x, res, it
            if gn > 0.5 * prev:
                J = None    # poor contraction: refresh the Jacobian
            prev = gn
        if res.sup < tol_newton:
            state["J"] = J
            return x, res, max_iter
        raise RuntimeError(f"Newton did not converge at s={s:g} (sup residual {res.sup:.2e})")

    for sign in (1.0, -1.0):
        hist = [(0.0, x_origin)]
        state["J"] = None
        for step in range(1, n_steps + 1):
            target = sign * step * ds
            try:
                x, res, its = _advance(newton, hist, target, max_halvings)
            except (RuntimeError, DomainError, ResolutionError, np.linalg.LinAlgError) as exc:
                branch.truncated = True
                branch.diagnostics.append(f"stopped before s={target:g}: {exc}")
                log.warning("branch truncated at s=%g: %s", target, exc)
                break
            v = system.v_of(x, target)
            f = res.field
            branch.points.append(BranchPoint(target, float(x[-1]), v, res.sup,
                                             _mode_amplitude(v, k, bp.lam, target), f.nwss("inner"),
                                             f.nwss("outer"), its, res.truncation_sup(freqs)))
            hist.append((target, x))
    branch.points.sort(key=lambda p: p.s)
    return branch


def _predict(hist, s):
    (s0, x0), (s1, x1) = hist[-2], hist[-1]
    return x1 + (x1 - x0) * (s - s1) / (s1 - s0)


def _advance(newton, hist, target, max_halvings):
    if len(hist) == 1:
        # first step: w = 0, lam = lam_k
        guess = hist[0][1].copy()
    else:
        guess = _predict(hist, target)
    try:
        return newton(guess, target)
    except (RuntimeError, DomainError, ResolutionError, np.linalg.LinAlgError):
        if max_halvings == 0:
            raise
    mid = 0.5 * (hist[-1][0] + target)
    x, _, _ = _advance(newton, hist, mid, max_halvings - 1)
    return _advance(newton, hist + [(mid, x)], target, max_halvings - 1)


# --------------------------------------------------------------------------
# certification

@dataclass
class Certificate:
    s: float
    passed: bool
    failures: list[str]
    resolution: tuple[int, int]
    residual_sup: float               # at the certification resolution
    residual_sup_base: float
    gradient_spread_inner: float
    gradient_spread_outer: float
    solve_residual: float
    tau_inner: float
    tau_outer: float
    R_inner: float
    R_outer: float
    nwss_class_inner: str
    nwss_class_outer: str
    boundary_variation: float         # max over components of ptp of the boundary radius
    max_set_kind: str
    suite: dict

    @property
    def gap(self) -> float:
        return self.R_outer - self.R_inner

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "suite"}
        d["gap"] = self.gap
        d["suite"] = self.suite
        return to_jsonable(d)


def certify_branch_point(bp: BranchPoint, *, resolution=None, base_resolution=DEFAULT_RESOLUTION,
                         tol_newton: float = 1e-8, run_checks: bool = True) -> Certificate:
    """Re-solve a branch point at twice the resolution and run the geometric checks.

    Passes when the residual stays below ``tol_newton`` at the finer grid, the
    normal derivative varies on each component by at most ten times the solve
    residual, the gradient estimate and the Pohozaev identity hold (plus the
    length bounds and the pinch when the maximum set is a curve), and the NWSS
    places the outer component below ``sqrt(2)`` and the inner one above.  The
    expected core radii are recorded; their ordering is only guaranteed when the
    maximum set is a curve, so it enters the verdict in that case alone.
    """
    if resolution is None:
        resolution = (2 * base_resolution[0], 2 * base_resolution[1])
    res = shooting_residual(bp.lam, bp.v, resolution)
    f = res.field
    failures = []
    spread_i = float(np.ptp(f.normal_derivative_inner))
    spread_o = float(np.ptp(f.normal_derivative_outer))
    if res.sup > tol_newton:
        failures.append(f"residual {res.sup:.2e} at {resolution} exceeds {tol_newton:.0e}")
    spread_tol = 10.0 * f.info.residual
    if max(spread_i, spread_o) > spread_tol:
        failures.append(f"normal derivative spread {max(spread_i, spread_o):.2e} exceeds {spread_tol:.1e}")
    tau_i, tau_o = f.nwss("inner"), f.nwss("outer")
    cls_i = "inner" if tau_i > SQRT2 else "outer"
    cls_o = "inner" if tau_o > SQRT2 else "outer"
    if cls_i != "inner" or cls_o != "outer":
        failures.append(f"NWSS classification inner->{cls_i}, outer->{cls_o}")
    Ro, Ri = core_radii(f)
    dom = f.domain
    th = np.linspace(0.0, 2.0 * math.pi, 512, endpoint=False)
    variation = float(max(np.ptp(dom.inner(th)), np.ptp(dom.outer(th))))
    ms = locate_max_set(f)
    curve = ms.kind is MaxSetKind.CURVE
    if curve and bp.s != 0.0 and not Ro > Ri:
        failures.append(f"expected core radii not strictly ordered: R_o - R_i = {Ro - Ri:.2e}")
    suite = {}
    if run_checks:
        suite = run_suite(f)
        for reg in suite["regions"]:
            for rep in reg["checks"]:
                if rep["name"] in CERTIFIED_CHECKS and rep["applicable"] and rep["passed"] is False:
                    failures.append(f"{rep['name']} failed on the {reg['side']} region")
        if curve and suite["pinch"]["passed"] is False:
            failures.append("curvature pinch failed")
    return Certificate(bp.s, not failures, failures, tuple(resolution), res.sup, bp.residual_sup,
                       spread_i, spread_o, f.info.residual, tau_i, tau_o, Ri, Ro, cls_i, cls_o,
                       variation, ms.kind.value, suite)


# --------------------------------------------------------------------------
# files

SUMMARY_COLUMNS = ("s", "lambda", "mode_amplitude", "residual_sup", "tau_i", "tau_o", "R_i", "R_o")


def write_branch_json(branch: Branch, path, certificates: Optional[list[Certificate]] = None) -> None:
    data = {"k": branch.k, "generator": branch.group.generator, "lambda_k": branch.lam_k,
            "null_vector": branch.null.z.tolist(), "truncated": branch.truncated,
            "diagnostics": branch.diagnostics, "points": [p.to_dict() for p in branch.sorted_points()]}
    if certificates is not None:
        data["certificates"] = [c.to_dict() for c in certificates]
    write_json(path, data)


def read_branch_json(path) -> list[BranchPoint]:
    return [BranchPoint.from_dict(d) for d in read_json(path)["points"]]


def write_branch_summary(branch: Branch, path, certificates: Optional[list[Certificate]] = None) -> None:
    by_s = {c.s: c for c in certificates or []}
    rows = []
    for p in branch.sorted_points():
        c = by_s.get(p.s)
        Ri, Ro = (c.R_inner, c.R_outer) if c else (None, None)
        rows.append((p.s, p.lam, p.mode_amplitude, p.residual_sup, p.nwss_inner, p.nwss_outer, Ri, Ro))
    write_csv(path, SUMMARY_COLUMNS, rows)
