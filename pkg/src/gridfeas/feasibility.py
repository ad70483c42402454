"""Feasibility decision engine.

``solve_operating_point`` tracks the operating point of a scaled demand
theta * target from the open-circuit point at theta = 0 toward theta = 1
with a predictor-corrector scheme on the homotopy

    demand_of(gamma(theta)) = theta * target,

whose tangent is the initial value problem
gamma' = jacobian(gamma)^-1 target. The Perron root of the negated
Jacobian is monitored along the path: it stays positive strictly inside
the feasible set and hits zero exactly on its boundary, so a fold located
before theta = 1 proves infeasibility. Fold points are polished with a
Newton solve on the boundary parametrization (direction lam, crossing
theta), which pins the crossing to near machine precision and yields the
supporting half-space certificate for free.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from . import specmat
from .errors import (
    NoCrossingFound,
    NonPositiveNu,
    NotTwoLoads,
    StepSizeUnderflow,
)
from .grid import GridModel
from .powerflow import OperatingPoint, demand_of, jacobian, p_max, residual_of
from .stability import StabilityClass, classify_point, h_of, phi

DEFAULT_TOL = 1e-9
CORRECTOR_TOL = 1e-10
INITIAL_STEP = 1e-2
MAX_STEP = 0.1
STEP_FLOOR = 1e-12
STEP_GROWTH = 1.5
CORRECTOR_MAX_ITER = 50
RAY_MAX_DOUBLINGS = 32


class VerdictKind(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    INFEASIBLE = "infeasible"


class LmiVerdict(enum.Enum):
    PD = "pd"
    PSD_SINGULAR = "psd-singular"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class HalfspaceCertificate:
    """Supporting half-space {y : lam . y <= s} of the feasible set, with its
    unique point of support. A demand P with lam . P > s is infeasible."""

    lam: np.ndarray
    s: float
    support: np.ndarray


@dataclass(frozen=True)
class LmiCertificate:
    nu: np.ndarray
    matrix: np.ndarray
    verdict: LmiVerdict


@dataclass(frozen=True)
class TraceSample:
    theta: float
    voltage: np.ndarray
    perron_root: float


@dataclass(frozen=True)
class ContinuationTrace:
    samples: tuple[TraceSample, ...]

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of a continuation solve.

    INTERIOR carries the operating point and the (positive) Perron root at
    theta = 1; BOUNDARY carries the operating point and the supporting
    direction; INFEASIBLE carries the ray crossing theta_star in (0, 1),
    the boundary demand theta_star * target, the boundary operating point
    and a half-space certificate.
    """

    kind: VerdictKind
    point: OperatingPoint
    trace: ContinuationTrace
    perron_root: float | None = None
    lam: np.ndarray | None = None
    theta_star: float | None = None
    boundary_demand: np.ndarray | None = None
    certificate: HalfspaceCertificate | None = None


class RayCrossing(NamedTuple):
    t_star: float            # boundary_demand == t_star * direction
    demand: np.ndarray
    voltage: np.ndarray
    lam: np.ndarray


@dataclass(frozen=True)
class BoundaryVertex:
    alpha: float             # polar angle of the demand vertex
    demand: np.ndarray
    voltage: np.ndarray
    lam: np.ndarray
    perron_residual: float


def _perron_root_at(model: GridModel, v: np.ndarray) -> float:
    return specmat.min_real_eigenvalue(-jacobian(model, v))


def _m_tol(model: GridModel, v: np.ndarray, tol: float) -> float:
    return tol * (1.0 + float(np.linalg.norm(jacobian(model, v), np.inf)))


def _make_point(model: GridModel, v: np.ndarray, demand: np.ndarray,
                tol: float) -> OperatingPoint:
    res = residual_of(model, v, demand)
    allowed = 1e-8 * (1.0 + float(np.max(np.abs(demand))))
    if res > allowed:
        raise StepSizeUnderflow(
            f"operating point residual {res:.3e} exceeds invariant {allowed:.3e}")
    v = np.array(v)
    demand = np.array(demand)
    v.flags.writeable = False
    demand.flags.writeable = False
    return OperatingPoint(voltage=v, demand=demand,
                          stability=classify_point(model, v, tol=None))


# --- predictor-corrector path tracking ----------------------------------------

def _corrector(model: GridModel, target: np.ndarray, theta: float,
               v0: np.ndarray, ctol: float) -> np.ndarray | None:
    """Newton iteration enforcing demand_of(v) = theta * target, keeping
    voltages positive. Returns None when it fails to converge."""
    v = v0
    goal = theta * target
    prev = math.inf
    rises = 0
    for _ in range(CORRECTOR_MAX_ITER):
        g = demand_of(model, v, strict=False) - goal
        res = float(np.max(np.abs(g)))
        if res <= ctol:
            return v if np.all(v > 0.0) else None
        if res >= prev:
            rises += 1
            if rises >= 3 and res > 100.0 * ctol:
                return None
        else:
            rises = 0
        prev = res
        try:
            step = np.linalg.solve(jacobian(model, v), -g)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        alpha = 1.0
        for _ in range(40):
            vn = v + alpha * step
            if np.all(vn > 0.0):
                break
            alpha *= 0.5
        else:
            return None
        v = vn
    return None


def _predict_rk4(model: GridModel, target: np.ndarray, v: np.ndarray,
                 h: float) -> np.ndarray | None:
    """Classical Runge-Kutta step for gamma' = jacobian(gamma)^-1 target."""
    def f(x: np.ndarray) -> np.ndarray | None:
        if np.any(x <= 0.0):
            return None
        try:
            out = np.linalg.solve(jacobian(model, x), target)
        except np.linalg.LinAlgError:
            return None
        return out if np.all(np.isfinite(out)) else None

    k1 = f(v)
    if k1 is None:
        return None
    k2 = f(v + 0.5 * h * k1)
    if k2 is None:
        return None
    k3 = f(v + 0.5 * h * k2)
    if k3 is None:
        return None
    k4 = f(v + h * k3)
    if k4 is None:
        return None
    out = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return out if np.all(out > 0.0) else None


def _track_path(model: GridModel, target: np.ndarray, tol: float,
                corrector_tol: float):
    """Advance the homotopy as far as possible. Returns
    (theta, v, r, trace_samples, reached, polished): ``reached`` tells
    whether theta = 1 was attained; ``polished`` carries an early fold
    solution (lam, theta_star, v_boundary) when step failures triggered a
    successful polish before the step size underflowed."""
    v = model.v_star.copy()
    theta = 0.0
    r = _perron_root_at(model, v)
    samples = [TraceSample(0.0, _frozen(v), r)]
    ctol = corrector_tol * (1.0 + float(np.max(np.abs(target))))
    step = INITIAL_STEP
    streak = 0
    attempt_below = 1e-3
    while theta < 1.0 - 1e-15:
        h = min(step, 1.0 - theta)
        v_pred = _predict_rk4(model, target, v, h)
        v_new = _corrector(model, target, theta + h,
                           v_pred if v_pred is not None else v, ctol)
        ok = v_new is not None
        if ok:
            r_new = _perron_root_at(model, v_new)
            if r_new < -_m_tol(model, v_new, tol):
                ok = False  # corrector landed past the fold
        if ok:
            theta = 1.0 if 1.0 - (theta + h) < 1e-15 else theta + h
            v, r = v_new, r_new
            samples.append(TraceSample(theta, _frozen(v), r))
            streak += 1
            if streak >= 2:
                step = min(step * STEP_GROWTH, MAX_STEP)
        else:
            streak = 0
            step *= 0.5
            if step < attempt_below:
                # repeated failures suggest a fold; the crossing along the
                # ray is unique, so a validated polish is conclusive
                polished = _polish_from_state(model, target, v, theta)
                if polished is not None:
                    if polished[1] <= 1.0 + tol:
                        return theta, v, r, samples, False, polished
                    # crossing lies beyond the target: transient failure of
                    # an interior solve, keep tracking
                    attempt_below = 0.0
                else:
                    attempt_below *= 1e-2
            if step < STEP_FLOOR:
                return theta, v, r, samples, False, None
    return theta, v, r, samples, True, None


def _frozen(v: np.ndarray) -> np.ndarray:
    out = np.array(v)
    out.flags.writeable = False
    return out


# --- fold polishing on the boundary parametrization ----------------------------

def _phi_and_jacobian_columns(model: GridModel, lam: np.ndarray):
    """phi(lam) together with the partial derivatives d phi / d lam_k."""
    h = h_of(model, lam)
    cho = scipy.linalg.cho_factor(h)
    v = scipy.linalg.cho_solve(cho, 0.5 * lam * model.i_star)
    yv = model.y_ll @ v
    n = model.n
    cols = np.empty((n, n))
    for k in range(n):
        rhs = -0.5 * (yv[k] * _unit(n, k) + model.y_ll[:, k] * v[k])
        rhs[k] += 0.5 * model.i_star[k]
        cols[:, k] = scipy.linalg.cho_solve(cho, rhs)
    return v, cols


def _unit(n: int, k: int) -> np.ndarray:
    e = np.zeros(n)
    e[k] = 1.0
    return e


def _lam_valid(model: GridModel, lam: np.ndarray) -> bool:
    if np.any(lam <= 1e-14):
        return False
    try:
        scipy.linalg.cho_factor(h_of(model, lam))
        return True
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return False


def _polish_boundary(model: GridModel, target: np.ndarray, lam0: np.ndarray,
                     theta0: float, anchor: np.ndarray | None = None):
    """Newton solve of demand_of(phi(lam)) = anchor + theta * target in the
    unknowns (lam restricted to the simplex, theta). Returns
    (lam, theta, phi(lam)) or None."""
    n = model.n
    if anchor is None:
        anchor = np.zeros(n)
    lam = np.asarray(lam0, dtype=float) / float(np.sum(lam0))
    theta = float(theta0)
    if not _lam_valid(model, lam):
        return None
    scale = 1.0 + float(np.max(np.abs(anchor + theta * target)))
    gtol = 1e-12 * scale

    def residual(lam_, theta_):
        v_ = phi(model, lam_)
        return demand_of(model, v_, strict=False) - anchor - theta_ * target, v_

    g, v = residual(lam, theta)
    gnorm = float(np.max(np.abs(g)))
    for _ in range(80):
        if gnorm <= gtol:
            return lam, theta, v
        v, cols = _phi_and_jacobian_columns(model, lam)
        jp = jacobian(model, v)
        jac = np.empty((n, n))
        if n > 1:
            dphi = jp @ cols
            jac[:, : n - 1] = dphi[:, : n - 1] - dphi[:, [n - 1]]
        jac[:, n - 1] = -target
        try:
            du = np.linalg.solve(jac, -g)
        except np.linalg.LinAlgError:
            return None
        alpha = 1.0
        accepted = False
        for _ in range(40):
            lam_try = lam.copy()
            if n > 1:
                lam_try[: n - 1] = lam[: n - 1] + alpha * du[: n - 1]
                lam_try[n - 1] = 1.0 - float(np.sum(lam_try[: n - 1]))
            theta_try = theta + alpha * du[n - 1]
            if _lam_valid(model, lam_try):
                g_try, v_try = residual(lam_try, theta_try)
                gnorm_try = float(np.max(np.abs(g_try)))
                if gnorm_try < gnorm or gnorm_try <= gtol:
                    lam, theta, g, v, gnorm = lam_try, theta_try, g_try, v_try, gnorm_try
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            return None
    return (lam, theta, v) if gnorm <= gtol else None


def _polish_from_state(model: GridModel, target: np.ndarray, v: np.ndarray,
                       theta: float, anchor: np.ndarray | None = None):
    """Polish using the left Perron vector at the current path point as the
    starting direction. Returns (lam, theta_star, v_boundary) or None."""
    try:
        data = specmat.perron(-jacobian(model, v).T)
    except Exception:
        return None
    out = _polish_boundary(model, target, data.vector, theta, anchor=anchor)
    if out is None:
        return None
    lam, theta_star, v_b = out
    if theta_star <= 0.0 or theta_star < theta - 1e-6:
        return None
    return lam, theta_star, v_b


# --- the decision procedure -----------------------------------------------------

def halfspace_value(model: GridModel, lam) -> tuple[float, np.ndarray]:
    """Supporting half-space level s for direction lam and the demand at its
    unique point of support; lam . support == s."""
    v = phi(model, lam)
    lam = np.asarray(lam, dtype=float).reshape(-1)
    s = float(v @ (h_of(model, lam) @ v))
    return s, demand_of(model, v)


def _certificate(model: GridModel, lam: np.ndarray) -> HalfspaceCertificate:
    s, support = halfspace_value(model, lam)
    lam = _frozen(np.asarray(lam, dtype=float))
    support.flags.writeable = False
    return HalfspaceCertificate(lam=lam, s=s, support=support)


def solve_operating_point(model: GridModel, target, *, tol: float = DEFAULT_TOL,
                          corrector_tol: float = CORRECTOR_TOL) -> FeasibilityVerdict:
    """Decide feasibility of ``target`` and compute the unique long-term
    voltage semi-stable operating point or an infeasibility certificate.

    Raises StepSizeUnderflow when the continuation stalls before the verdict
    can be classified.
    """
    target = np.asarray(target, dtype=float).reshape(-1)
    if target.shape[0] != model.n:
        raise ValueError(f"demand length {target.shape[0]} != {model.n} loads")
    if not np.all(np.isfinite(target)):
        raise ValueError("demand must be finite")

    if float(np.max(np.abs(target))) == 0.0:
        v = model.v_star
        r = _perron_root_at(model, v)
        trace = ContinuationTrace((TraceSample(0.0, _frozen(v), r),))
        return FeasibilityVerdict(kind=VerdictKind.INTERIOR,
                                  point=_make_point(model, v, target, tol),
                                  trace=trace, perron_root=r)

    theta, v, r, samples, reached, polished = _track_path(
        model, target, tol, corrector_tol)

    def finish_trace(extra: TraceSample | None) -> ContinuationTrace:
        if extra is not None and extra.theta > samples[-1].theta and extra.theta <= 1.0:
            samples.append(extra)
        return ContinuationTrace(tuple(samples))

    def interior_verdict() -> FeasibilityVerdict:
        refined = _corrector(model, target, 1.0, v,
                             1e-13 * (1.0 + float(np.max(np.abs(target)))))
        v_out = refined if refined is not None else v
        return FeasibilityVerdict(kind=VerdictKind.INTERIOR,
                                  point=_make_point(model, v_out, target, tol),
                                  trace=finish_trace(None),
                                  perron_root=_perron_root_at(model, v_out))

    if reached:
        # the corrector residual limits how small a Perron root can be
        # resolved at theta = 1: near a fold, a residual eps leaves a root
        # of order sqrt(eps * ||J||); anything below that is a boundary
        # suspect and is decided by the fold polish
        ctol = corrector_tol * (1.0 + float(np.max(np.abs(target))))
        r_suspect = 100.0 * math.sqrt(
            ctol * (1.0 + float(np.linalg.norm(jacobian(model, v), np.inf))))
        mtol = _m_tol(model, v, tol)
        if r > max(r_suspect, mtol):
            return interior_verdict()
        polished = _polish_from_state(model, target, v, theta)
        if polished is None:
            if r > mtol:
                return interior_verdict()
            raise StepSizeUnderflow(
                f"cannot classify target at theta=1 (perron root {r:.3e})")
        lam, theta_star, v_b = polished
        if theta_star > 1.0 + tol:
            return interior_verdict()
    else:
        if polished is None:
            polished = _polish_from_state(model, target, v, theta)
        if polished is None:
            raise StepSizeUnderflow(
                f"continuation stalled at theta={theta:.12f} (perron root "
                f"{r:.3e}) and fold polishing failed")
        lam, theta_star, v_b = polished

    boundary_sample = TraceSample(theta_star, _frozen(v_b),
                                  _perron_root_at(model, v_b))
    if theta_star >= 1.0 - tol:
        # crossing coincides with the target: boundary of the feasible set
        return FeasibilityVerdict(kind=VerdictKind.BOUNDARY,
                                  point=_make_point(model, v_b, target, tol),
                                  trace=finish_trace(boundary_sample),
                                  lam=_frozen(lam),
                                  perron_root=boundary_sample.perron_root)

    boundary_demand = _frozen(theta_star * target)
    point = _make_point(model, v_b, boundary_demand, tol)
    return FeasibilityVerdict(kind=VerdictKind.INFEASIBLE, point=point,
                              trace=finish_trace(boundary_sample),
                              lam=_frozen(lam),
                              theta_star=theta_star,
                              boundary_demand=boundary_demand,
                              certificate=_certificate(model, lam))


def ray_boundary(model: GridModel, direction, *, tol: float = DEFAULT_TOL) -> RayCrossing:
    """Unique crossing of the feasible-set boundary along {t * direction, t >= 0}.

    The probe scale doubles from a total-power based initial guess until the
    continuation locates a fold; rays that keep every probe feasible up to
    the doubling cap raise NoCrossingFound (the feasible set is unbounded in
    demand-decreasing directions).
    """
    d = np.asarray(direction, dtype=float).reshape(-1)
    if d.shape[0] != model.n:
        raise ValueError("direction length mismatch")
    if float(np.max(np.abs(d))) == 0.0:
        raise ValueError("direction must be nonzero")
    total = float(np.sum(p_max(model).demand))
    denom = max(1e-9 * float(np.sum(np.abs(d))), float(np.sum(d)))
    t_hat = total / denom
    for _ in range(RAY_MAX_DOUBLINGS + 1):
        verdict = solve_operating_point(model, t_hat * d, tol=tol)
        if verdict.kind == VerdictKind.INTERIOR:
            t_hat *= 2.0
            continue
        if verdict.kind == VerdictKind.BOUNDARY:
            return RayCrossing(t_star=t_hat, demand=_frozen(t_hat * d),
                               voltage=verdict.point.voltage, lam=verdict.lam)
        return RayCrossing(t_star=verdict.theta_star * t_hat,
                           demand=verdict.boundary_demand,
                           voltage=verdict.point.voltage, lam=verdict.lam)
    raise NoCrossingFound(
        "ray stayed feasible up to the doubling cap; the feasible set is "
        "unbounded along this direction")


def _anchored_crossing(model: GridModel, anchor: np.ndarray, d: np.ndarray,
                       lam_init: np.ndarray, tol: float):
    """Crossing of the anchored ray {anchor + t d, t >= 0} with the feasible
    boundary, via the boundary-parametrization Newton solve. Falls back to
    probing the ray with the continuation for a fresh starting direction."""
    v0 = phi(model, lam_init)
    p0 = demand_of(model, v0)
    t0 = max(float((p0 - anchor) @ d) / float(d @ d), 1e-6)
    out = _polish_boundary(model, d, lam_init, t0, anchor=anchor)
    if out is None:
        t_probe = max(t0, 1.0)
        for _ in range(RAY_MAX_DOUBLINGS):
            verdict = solve_operating_point(model, anchor + t_probe * d, tol=tol)
            if verdict.kind != VerdictKind.INTERIOR:
                out = _polish_boundary(model, d, verdict.lam,
                                       t_probe * verdict.theta_star
                                       if verdict.theta_star is not None else t_probe,
                                       anchor=anchor)
                break
            t_probe *= 2.0
    if out is None:
        raise StepSizeUnderflow("anchored boundary crossing did not converge")
    lam, t_star, v_b = out
    return lam, t_star, v_b


def _vertex(model: GridModel, demand: np.ndarray, voltage: np.ndarray,
            lam: np.ndarray) -> BoundaryVertex:
    alpha = math.atan2(float(demand[1]), float(demand[0]))
    return BoundaryVertex(alpha=alpha, demand=_frozen(demand),
                          voltage=_frozen(voltage), lam=_frozen(lam),
                          perron_residual=abs(_perron_root_at(model, voltage)))


def default_workers() -> int:
    """Worker count for the boundary scan, capped by GRIDFEAS_THREADS."""
    raw = os.environ.get("GRIDFEAS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def boundary_scan(model: GridModel, rays: int = 256, *, tol: float = DEFAULT_TOL,
                  workers: int | None = None) -> list[BoundaryVertex]:
    """Trace the feasible-set boundary of a two-load grid as an ordered
    polyline of ``rays`` vertices.

    Primary rays sweep directions (cos a, sin a) from the origin over
    a in [-pi/4 + eps, 3pi/4 - eps]; crossings there are guaranteed by the
    total-power bound. The unbounded tails are covered by axis-aligned rays
    anchored at interior offsets (0, -L) and (-L, 0) with geometrically
    growing depths; tail depth is capped so vertex Perron residuals stay at
    solver accuracy. Vertices are ordered by the polar angle of the demand,
    strictly increasing. 8+ rays recommended; at least 2 required.
    """
    if model.n != 2:
        raise NotTwoLoads(f"boundary scan requires 2 loads, got {model.n}")
    if rays < 2:
        raise ValueError("rays must be >= 2")
    n_tail = rays // 8 if rays >= 16 else 0
    n_primary = rays - 2 * n_tail
    eps = 0.01
    alphas = np.linspace(-math.pi / 4.0 + eps, 3.0 * math.pi / 4.0 - eps, n_primary)

    if workers is None:
        workers = default_workers()

    def primary(alpha: float) -> BoundaryVertex:
        d = np.array([math.cos(alpha), math.sin(alpha)])
        cross = ray_boundary(model, d, tol=tol)
        return _vertex(model, cross.demand, cross.voltage, cross.lam)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            primary_vertices = list(pool.map(primary, alphas))
    else:
        primary_vertices = [primary(a) for a in alphas]

    vertices = list(primary_vertices)
    if n_tail:
        total = float(np.sum(p_max(model).demand))
        for side in ("lower", "upper"):
            if side == "lower":
                seed = primary_vertices[0]
                depth0 = abs(float(seed.demand[1]))
                axis = np.array([1.0, 0.0])
            else:
                seed = primary_vertices[-1]
                depth0 = abs(float(seed.demand[0]))
                axis = np.array([0.0, 1.0])
            depth0 = max(depth0, 0.1 * total)
            depth_max = max(50.0 * total, 4.0 * depth0)
            ratio = (depth_max / (1.25 * depth0)) ** (1.0 / max(n_tail - 1, 1))
            lam = seed.lam
            for k in range(n_tail):
                depth = 1.25 * depth0 * ratio ** k
                anchor = -depth * (np.array([0.0, 1.0]) if side == "lower"
                                   else np.array([1.0, 0.0]))
                lam, _, v_b = _anchored_crossing(model, anchor, axis, lam, tol)
                vertices.append(_vertex(model, demand_of(model, v_b), v_b, lam))

    vertices.sort(key=lambda vert: vert.alpha)
    return vertices


def assemble_lmi(model: GridModel, nu, target) -> LmiCertificate:
    """Assemble the (n+1) x (n+1) feasibility test matrix

        [[ [nu] Y_LL + Y_LL [nu],  [nu] i_star ],
         [ ([nu] i_star)^T,        2 nu . target ]]

    and classify its definiteness. Positive definite certifies the target
    infeasible; singular positive semi-definite certifies it outside the
    interior of the feasible set.
    """
    nu = np.asarray(nu, dtype=float).reshape(-1)
    if nu.shape[0] != model.n:
        raise ValueError("nu length mismatch")
    if np.any(nu <= 0.0):
        raise NonPositiveNu("nu must be strictly positive")
    target = np.asarray(target, dtype=float).reshape(-1)
    col = nu * model.i_star
    mat = np.empty((model.n + 1, model.n + 1))
    mat[: model.n, : model.n] = 2.0 * h_of(model, nu)
    mat[: model.n, model.n] = col
    mat[model.n, : model.n] = col
    mat[model.n, model.n] = 2.0 * float(nu @ target)
    w = np.linalg.eigvalsh(mat)
    m_tol = 1e-9 * (1.0 + float(np.linalg.norm(mat, np.inf)))
    if w[0] > m_tol:
        verdict = LmiVerdict.PD
    elif w[0] >= -m_tol:
        verdict = LmiVerdict.PSD_SINGULAR
    else:
        verdict = LmiVerdict.INDEFINITE
    mat.flags.writeable = False
    return LmiCertificate(nu=_frozen(nu), matrix=mat, verdict=verdict)


def certify_infeasible(model: GridModel, target, *,
                       tol: float = DEFAULT_TOL) -> LmiCertificate | None:
    """Constructive LMI certificate for an infeasible (PD) or boundary
    (PSD-singular) demand; None when the demand is strictly feasible."""
    verdict = solve_operating_point(model, target, tol=tol)
    if verdict.kind == VerdictKind.INTERIOR:
        return None
    return assemble_lmi(model, verdict.lam, target)
