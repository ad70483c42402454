"""Analysis report assembly and machine-checkable JSON serialization.

Reports are plain dictionaries serialized with every float rendered at 17
significant digits, which round-trips IEEE doubles exactly. A report is
self-contained: residuals, certificate inequalities and LMI definiteness
can be recomputed from the report alone (``verify_report``).
"""

from __future__ import annotations

import json
import math

import numpy as np

from .feasibility import FeasibilityVerdict, VerdictKind, assemble_lmi
from .grid import GridModel
from .powerflow import dissipation, p_max

RESIDUAL_ALLOWANCE = 1e-8
CERT_HYPERPLANE_TOL = 1e-9


def format_float(x: float) -> str:
    """17-significant-digit decimal form that parses back to the same double."""
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    out = f"{x:.17g}"
    if not any(c in out for c in ".eE"):
        out += ".0"
    return out


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    closing = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{pad}{json.dumps(str(key))}: {_emit(val, indent, level + 1)}"
            for key, val in obj.items())
        return "{\n" + items + "\n" + closing + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = ",\n".join(f"{pad}{_emit(val, indent, level + 1)}" for val in obj)
        return "[\n" + items + "\n" + closing + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps17(obj, indent: int = 2) -> str:
    """Serialize a report to JSON with 17-significant-digit floats."""
    return _emit(_pythonize(obj), indent, 0)


def _pythonize(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {key: _pythonize(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_pythonize(val) for val in obj]
    return obj


def build_analysis_report(model: GridModel, target, verdict: FeasibilityVerdict,
                          include_trace: bool = False) -> dict:
    """Assemble the full analysis report for a demand vector."""
    target = np.asarray(target, dtype=float).reshape(-1)
    pm = p_max(model)
    point = verdict.point
    diss = dissipation(model, point.voltage, point.demand)
    residual = float(np.max(np.abs(
        point.voltage * (model.y_ll @ (point.voltage - model.v_star))
        + point.demand)))

    report = {
        "grid": {
            "n": model.n,
            "m": model.m,
            "load_ids": list(model.load_ids),
            "source_ids": list(model.source_ids),
            "v_star": model.v_star,
            "i_star": model.i_star,
            "p_max": pm.demand,
            "p_max_voltage": pm.voltage,
            "y_ll": model.y_ll,
        },
        "demand": target,
        "verdict": {
            "kind": verdict.kind.value,
            "perron_root": verdict.perron_root,
            "lam": verdict.lam,
            "theta_star": verdict.theta_star,
            "boundary_demand": verdict.boundary_demand,
        },
        "operating_point": {
            "voltage": point.voltage,
            "demand": point.demand,
            "stability": point.stability.value,
            "residual": residual,
        },
        "dissipation": {"full": diss.full, "reduced": diss.reduced},
        "certificate": None,
        "lmi": None,
    }
    if verdict.certificate is not None:
        cert = verdict.certificate
        report["certificate"] = {"lam": cert.lam, "s": cert.s,
                                 "support": cert.support}
    if verdict.kind != VerdictKind.INTERIOR:
        lmi = assemble_lmi(model, verdict.lam, target)
        report["lmi"] = {"nu": lmi.nu, "matrix": lmi.matrix,
                         "verdict": lmi.verdict.value}
    if include_trace:
        report["trace"] = [
            {"theta": s.theta, "voltage": s.voltage, "perron_root": s.perron_root}
            for s in verdict.trace.samples]
    return _pythonize(report)


def verify_report(report: dict) -> list[str]:
    """Re-verify a parsed analysis report from its own contents only.

    Returns a list of problems; an empty list means every recomputable claim
    (power-flow residuals, certificate inequalities, LMI definiteness and
    auxiliary identities) checks out.
    """
    problems: list[str] = []
    grid = report["grid"]
    y_ll = np.asarray(grid["y_ll"], dtype=float)
    v_star = np.asarray(grid["v_star"], dtype=float)
    i_star = np.asarray(grid["i_star"], dtype=float)
    demand = np.asarray(report["demand"], dtype=float)

    pm = 0.25 * v_star * i_star
    if np.max(np.abs(pm - np.asarray(grid["p_max"]))) > 1e-12 * (1.0 + np.max(np.abs(pm))):
        problems.append("p_max does not match 0.25 [v_star] i_star")
    if np.max(np.abs(0.5 * v_star - np.asarray(grid["p_max_voltage"]))) > 1e-12:
        problems.append("p_max voltage does not match v_star / 2")

    op = report["operating_point"]
    v = np.asarray(op["voltage"], dtype=float)
    p = np.asarray(op["demand"], dtype=float)
    residual = float(np.max(np.abs(v * (y_ll @ (v - v_star)) + p)))
    if residual > RESIDUAL_ALLOWANCE * (1.0 + float(np.max(np.abs(p)))):
        problems.append(f"operating point residual {residual:.3e} too large")

    verdict = report["verdict"]
    kind = verdict["kind"]
    if kind == "infeasible":
        theta = verdict["theta_star"]
        bd = np.asarray(verdict["boundary_demand"], dtype=float)
        if not 0.0 < theta < 1.0:
            problems.append("theta_star outside (0, 1)")
        if np.max(np.abs(bd - theta * demand)) > 1e-8 * (1.0 + np.max(np.abs(demand))):
            problems.append("boundary demand != theta_star * demand")
        if report["certificate"] is None:
            problems.append("infeasible verdict without certificate")
    if report["certificate"] is not None:
        cert = report["certificate"]
        lam = np.asarray(cert["lam"], dtype=float)
        support = np.asarray(cert["support"], dtype=float)
        s = float(cert["s"])
        if abs(float(lam @ support) - s) > CERT_HYPERPLANE_TOL * (1.0 + abs(s)):
            problems.append("certificate support point is off its hyperplane")
        if kind == "infeasible" and float(lam @ demand) <= s:
            problems.append("certificate does not separate the demand")
    if report["lmi"] is not None:
        lmi = report["lmi"]
        mat = np.asarray(lmi["matrix"], dtype=float)
        w = np.linalg.eigvalsh(mat)
        m_tol = 1e-9 * (1.0 + float(np.linalg.norm(mat, np.inf)))
        if w[0] > m_tol:
            recomputed = "pd"
        elif w[0] >= -m_tol:
            recomputed = "psd-singular"
        else:
            recomputed = "indefinite"
        if recomputed != lmi["verdict"]:
            problems.append(
                f"LMI verdict {lmi['verdict']} disagrees with recomputed {recomputed}")
    if "trace" in report and report["trace"]:
        thetas = [s["theta"] for s in report["trace"]]
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            problems.append("trace thetas are not strictly increasing")
        for sample in report["trace"]:
            tv = np.asarray(sample["voltage"], dtype=float)
            res = float(np.max(np.abs(
                tv * (y_ll @ (v_star - tv)) - sample["theta"] * demand)))
            if res > 1e-9 * (1.0 + float(np.max(np.abs(demand)))):
                problems.append(f"trace residual {res:.3e} at theta={sample['theta']}")
                break
    return problems
