"""The constant-power load flow map and its calculus.

``demand_of`` maps a load voltage vector to the demand it satisfies at
steady state; the power flow equation for a demand P is
``demand_of(V) == P``. The map is quadratic, so its Jacobian is exact and
central finite differences reproduce it to rounding error.

Also provides the closed-form single-load solution and a brute-force
multistart Newton oracle for desk-scale verification (n <= 4).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from .errors import NonPositiveVoltage, NotSingleLoad, OracleScaleExceeded
from .grid import GridModel

if TYPE_CHECKING:
    from .stability import StabilityClass

ORACLE_MAX_LOADS = 4


class PMax(NamedTuple):
    demand: np.ndarray   # the unique maximizing feasible power demand, watts
    voltage: np.ndarray  # its unique operating point, volts


class Dissipation(NamedTuple):
    full: float             # V^T Y V over all nodes, watts
    reduced: float | None   # operating-point form, when a demand is supplied


@dataclass(frozen=True)
class OperatingPoint:
    voltage: np.ndarray
    demand: np.ndarray
    stability: "StabilityClass"


def _as_load_vector(model: GridModel, v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape[0] != model.n:
        raise ValueError(f"expected a load vector of length {model.n}, got {v.shape[0]}")
    return v


def demand_of(model: GridModel, v_l, strict: bool = True) -> np.ndarray:
    """Constant power demand satisfied by the load voltages ``v_l``.

    Grid semantics require v_l > 0 (enforced when ``strict``); the
    unrestricted map over all of R^n is available for identity checks.
    """
    v = _as_load_vector(model, v_l)
    if strict and np.any(v <= 0.0):
        raise NonPositiveVoltage("load voltages must be strictly positive")
    return v * (model.y_ll @ (model.v_star - v))


def eval_injection(model: GridModel, v_l) -> np.ndarray:
    """Power injected by the loads into the grid; the negative of demand_of."""
    v = _as_load_vector(model, v_l)
    return v * (model.y_ll @ (v - model.v_star))


def jacobian(model: GridModel, v_l) -> np.ndarray:
    """Exact Jacobian of demand_of at ``v_l`` (watts per volt)."""
    v = _as_load_vector(model, v_l)
    return np.diag(model.y_ll @ (model.v_star - v)) - v[:, None] * model.y_ll


def residual_of(model: GridModel, v_l, demand) -> float:
    """Max-norm power-flow residual of ``v_l`` against ``demand``."""
    v = _as_load_vector(model, v_l)
    p = np.asarray(demand, dtype=float).reshape(-1)
    return float(np.max(np.abs(demand_of(model, v, strict=False) - p)))


def p_max(model: GridModel) -> PMax:
    """The unique demand maximizing total delivered power, with its unique
    operating point at half the open-circuit voltages."""
    demand = 0.25 * model.v_star * model.i_star
    voltage = 0.5 * model.v_star
    demand.flags.writeable = False
    voltage.flags.writeable = False
    return PMax(demand=demand, voltage=voltage)


def dissipation(model: GridModel, v_l, demand=None) -> Dissipation:
    """Total power dissipated in the lines at load voltages ``v_l``.

    ``full`` is the quadratic form over all node voltages. When ``demand``
    is given and ``v_l`` is an operating point for it, ``reduced`` evaluates
    the equivalent operating-point form; the two must agree.
    """
    v = _as_load_vector(model, v_l)
    if np.any(v <= 0.0):
        raise NonPositiveVoltage("load voltages must be strictly positive")
    full_v = np.concatenate([v, model.v_s])
    full = float(full_v @ (model.y @ full_v))
    reduced = None
    if demand is not None:
        p = np.asarray(demand, dtype=float).reshape(-1)
        reduced = float(-np.sum(p) + model.v_s @ (model.y_ss @ model.v_s)
                        - v @ model.i_star)
    return Dissipation(full=full, reduced=reduced)


def solve_single_load(model: GridModel, p_c: float) -> list[float]:
    """Closed-form operating points of a single-load grid.

    Both quadratic branches with positivity filtering; empty when the
    discriminant is negative, one voltage at the feasibility boundary.
    """
    if model.n != 1:
        raise NotSingleLoad(f"grid has {model.n} loads, expected 1")
    y = float(model.y_ll[0, 0])
    v_star = float(model.v_star[0])
    disc = (0.25 * y * v_star ** 2 - float(p_c)) / y
    if disc < 0.0:
        return []
    root = float(np.sqrt(disc))
    if root == 0.0:
        candidates = [0.5 * v_star]
    else:
        candidates = [0.5 * v_star + root, 0.5 * v_star - root]
    return [v for v in candidates if v > 0.0]


@dataclass(frozen=True)
class OracleConfig:
    """Tuning for the multistart Newton oracle.

    ``points_per_axis`` trades example-scale exhaustiveness against runtime;
    the start grid spans (0, box_factor * max(v_star)] per axis. Solutions
    with any coordinate <= positive_floor are discarded as non-physical.
    """

    points_per_axis: int = 15
    box_factor: float = 2.0
    dedupe_tol: float = 1e-6
    residual_tol: float = 1e-10
    max_iter: int = 60
    positive_floor: float = 1e-10


def enumerate_solutions(model: GridModel, p_c, config: OracleConfig | None = None) -> np.ndarray:
    """All power-flow solutions found by Newton iterations from a dense grid
    of starting points. Desk-scale oracle: n <= 4.

    Returns a (k, n) array, deduplicated at ``dedupe_tol`` in start-index
    order and sorted lexicographically; every row satisfies the power flow
    equation to ``residual_tol`` (scaled by 1 + ||p_c||_inf). No completeness
    claim beyond the start-grid density.
    """
    if config is None:
        config = OracleConfig()
    if model.n > ORACLE_MAX_LOADS:
        raise OracleScaleExceeded(
            f"oracle supports up to {ORACLE_MAX_LOADS} loads, got {model.n}")
    p = np.asarray(p_c, dtype=float).reshape(-1)
    if p.shape[0] != model.n:
        raise ValueError("demand length mismatch")

    n = model.n
    top = config.box_factor * float(np.max(model.v_star))
    axis = top * (np.arange(1, config.points_per_axis + 1) / config.points_per_axis)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    starts = np.stack([g.reshape(-1) for g in grids], axis=1)  # (B, n)

    scale = 1.0 + float(np.max(np.abs(p)))
    tol = config.residual_tol * scale
    v = starts.copy()
    active = np.ones(len(v), dtype=bool)
    diag_idx = np.arange(n)
    for _ in range(config.max_iter):
        act = np.flatnonzero(active)
        if act.size == 0:
            break
        va = v[act]
        w = (model.v_star - va) @ model.y_ll  # row b: Y_LL (v* - v_b), Y symmetric
        g = va * w - p
        jac = -va[:, :, None] * model.y_ll[None, :, :]
        jac[:, diag_idx, diag_idx] += w
        try:
            steps = np.linalg.solve(jac, -g[..., None])[..., 0]
        except np.linalg.LinAlgError:
            steps = np.full_like(va, np.nan)
            for k in range(len(va)):
                try:
                    steps[k] = np.linalg.solve(jac[k], -g[k])
                except np.linalg.LinAlgError:
                    pass
        va = va + steps
        dead = ~np.all(np.isfinite(va), axis=1) | (np.max(np.abs(va), axis=1) > 1e6 * top)
        conv = ~dead & (np.max(np.abs(steps), axis=1) <= 1e-14 * top)
        v[act] = va
        v[act[dead]] = np.nan
        active[act[dead | conv]] = False

    accepted: list[np.ndarray] = []
    for k in range(len(v)):
        cand = v[k]
        if not np.all(np.isfinite(cand)) or np.any(cand <= config.positive_floor):
            continue
        if residual_of(model, cand, p) > tol:
            continue
        if all(np.linalg.norm(cand - prev) > config.dedupe_tol for prev in accepted):
            accepted.append(cand)
    if not accepted:
        return np.empty((0, n))
    out = np.array(accepted)
    return out[np.lexsort(out.T[::-1])]
