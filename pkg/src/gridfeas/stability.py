"""Operating-point stability classification and the parametrization of the
long-term voltage semi-stable set.

The semi-stable operating points are exactly the positive voltage vectors
whose negated demand Jacobian is an M-matrix. They admit the bicontinuous
parametrization

    (lam, r)  ->  0.5 * h(lam)^-1 [lam] (i_star + r * 1)

over admissible directions lam (those with h(lam) positive definite,
1-norm normalized) and Perron roots r >= 0, where
h(lam) = 0.5 ([lam] Y_LL + Y_LL [lam]). The inverse map reads off the
Perron pair of the negated transposed Jacobian. r = 0 gives the stability
boundary map ``phi``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import specmat
from .errors import (
    LambdaNotInLambda,
    LambdaNotInLambda1,
    NonPositiveVoltage,
    NotSemiStable,
)
from .grid import GridModel
from .powerflow import jacobian


class StabilityClass(enum.Enum):
    STABLE = "stable"
    SEMI_STABLE_BOUNDARY = "semi-stable-boundary"
    UNSTABLE = "unstable"


class Lambda1Position(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class StabilityParam:
    """Parametrization coordinates of a semi-stable operating point:
    a positive 1-norm-normalized direction and a nonnegative Perron root."""

    lam: np.ndarray
    r: float


def _as_direction(model: GridModel, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.shape[0] != model.n:
        raise ValueError(f"expected a direction of length {model.n}, got {lam.shape[0]}")
    return lam


def h_of(model: GridModel, lam) -> np.ndarray:
    """Symmetrized scaled conductance matrix 0.5([lam] Y_LL + Y_LL [lam]);
    h(1) equals Y_LL exactly."""
    lam = _as_direction(model, lam)
    scaled = lam[:, None] * model.y_ll
    return 0.5 * (scaled + scaled.T)


def in_lambda1(model: GridModel, lam, tol: float | None = None) -> Lambda1Position:
    """Locate a normalized direction relative to the admissible set:
    INTERIOR iff h(lam) is positive definite, BOUNDARY iff it is singular
    positive semi-definite within tolerance, OUTSIDE otherwise."""
    lam = _as_direction(model, lam)
    if np.any(lam < 0.0):
        return Lambda1Position.OUTSIDE
    h = h_of(model, lam)
    if tol is None:
        tol = specmat.default_m_tolerance(h)
    w = np.linalg.eigvalsh(h)
    if w[0] > tol:
        return Lambda1Position.INTERIOR
    if w[0] >= -tol:
        return Lambda1Position.BOUNDARY
    return Lambda1Position.OUTSIDE


def classify_point(model: GridModel, v_l, tol: float | None = None) -> StabilityClass:
    """Stability of an operating point from the M-matrix class of its
    negated demand Jacobian."""
    v = np.asarray(v_l, dtype=float).reshape(-1)
    if np.any(v <= 0.0):
        raise NonPositiveVoltage("load voltages must be strictly positive")
    cls = specmat.classify(-jacobian(model, v), tol)
    if cls.m_class == specmat.MClass.NONSINGULAR_M:
        return StabilityClass.STABLE
    if cls.m_class == specmat.MClass.SINGULAR_M:
        return StabilityClass.SEMI_STABLE_BOUNDARY
    return StabilityClass.UNSTABLE


def _solve_h(model: GridModel, lam: np.ndarray, rhs: np.ndarray,
             exc: type[LambdaNotInLambda]) -> np.ndarray:
    h = h_of(model, lam)
    try:
        cho = scipy.linalg.cho_factor(h)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        raise exc("h(lambda) is not positive definite") from None
    return scipy.linalg.cho_solve(cho, rhs)


def param_to_voltage(model: GridModel, param: StabilityParam | tuple) -> np.ndarray:
    """Unique operating point whose negated transposed Jacobian has the given
    Perron pair. Requires lam in the admissible interior and r >= 0."""
    if isinstance(param, StabilityParam):
        lam, r = param.lam, param.r
    else:
        lam, r = param
    lam = _as_direction(model, lam)
    if np.any(lam <= 0.0):
        raise LambdaNotInLambda1("direction must be strictly positive")
    if r < 0.0:
        raise ValueError("Perron root must be nonnegative")
    rhs = 0.5 * lam * (model.i_star + r)
    return _solve_h(model, lam, rhs, LambdaNotInLambda1)


def voltage_to_param(model: GridModel, v_l, tol: float | None = None) -> StabilityParam:
    """Inverse parametrization: 1-norm-normalized Perron vector and Perron
    root of the negated transposed Jacobian at a semi-stable point.

    The transpose matters: left and right eigenvectors differ for the
    nonsymmetric Jacobian. Roots within tolerance of zero are clamped to the
    boundary value 0; genuinely negative roots raise NotSemiStable.
    """
    v = np.asarray(v_l, dtype=float).reshape(-1)
    if np.any(v <= 0.0):
        raise NonPositiveVoltage("load voltages must be strictly positive")
    neg_jt = -jacobian(model, v).T
    if tol is None:
        tol = specmat.default_m_tolerance(neg_jt)
    data = specmat.perron(neg_jt)
    r = data.root
    if r < -tol:
        raise NotSemiStable(f"Perron root {r:.3e} is negative; point is unstable")
    lam = data.vector.copy()
    lam.flags.writeable = False
    return StabilityParam(lam=lam, r=max(r, 0.0))


def phi(model: GridModel, lam) -> np.ndarray:
    """Boundary operating point supporting direction ``lam``; equals the
    parametrization at r = 0 and is invariant under positive scaling of lam."""
    lam = _as_direction(model, lam)
    if np.any(lam <= 0.0):
        raise LambdaNotInLambda("direction must be strictly positive")
    return _solve_h(model, lam, 0.5 * lam * model.i_star, LambdaNotInLambda)


def sample_lambda1(model: GridModel, rng: np.random.Generator,
                   max_tries: int = 1000) -> np.ndarray:
    """Rejection-sample a direction from the positive simplex until h(lam)
    is positive definite. Falls back to shrinking rejected draws toward the
    uniform center (always admissible) if rejection keeps failing."""
    uniform = np.full(model.n, 1.0 / model.n)
    draw = uniform
    for _ in range(max_tries):
        draw = rng.dirichlet(np.ones(model.n))
        if in_lambda1(model, draw) == Lambda1Position.INTERIOR:
            return draw
    for _ in range(60):
        draw = 0.5 * (draw + uniform)
        if in_lambda1(model, draw) == Lambda1Position.INTERIOR:
            return draw
    return uniform
