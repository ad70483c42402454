"""Command-line front end.

Commands: validate, analyze, pmax, boundary, certify. Reports are JSON
(floats at 17 significant digits); boundary polylines stream as CSV by
default. Exit codes: 0 success (any verdict), 2 invalid grid/input,
3 solver failure, 4 unsupported command shape (wrong load count, oracle
scale). GRIDFEAS_THREADS caps boundary-scan workers.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import feasibility, powerflow, report as report_mod
from .errors import (
    GridfeasError,
    InvalidSpec,
    LoadSubgraphReducible,
    NotTwoLoads,
    OracleScaleExceeded,
)
from .grid import build_model, load_grid, validate_connectivity
from .report import build_analysis_report, dumps17

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3
EXIT_UNSUPPORTED = 4


def _parse_demand(raw: str, n: int) -> np.ndarray:
    if raw.startswith("@"):
        with open(raw[1:], "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, list):
            raise InvalidSpec("demand file must contain a JSON array")
        values = [float(x) for x in data]
    else:
        try:
            values = [float(part) for part in raw.split(",") if part.strip()]
        except ValueError:
            raise InvalidSpec(f"cannot parse demand list {raw!r}") from None
    if len(values) != n:
        raise InvalidSpec(f"demand length {len(values)} != {n} loads")
    return np.array(values)


def _cmd_validate(args) -> int:
    spec = load_grid(args.grid)
    try:
        connected, components = validate_connectivity(spec)
    except InvalidSpec as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        model = build_model(spec)
    except LoadSubgraphReducible as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        for k, ids in enumerate(exc.component_ids):
            print(f"  load component {k}: {ids}", file=sys.stderr)
        return EXIT_INVALID
    except InvalidSpec as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_INVALID
    pm = powerflow.p_max(model)
    print(f"OK: {model.n} loads, {model.m} sources, "
          f"{len(spec.lines)} lines, connected={connected}, "
          f"load components={len(components)}")
    print(f"  v_star = {model.v_star.tolist()}")
    print(f"  i_star = {model.i_star.tolist()}")
    print(f"  p_max  = {pm.demand.tolist()}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    model = build_model(load_grid(args.grid))
    demand = _parse_demand(args.demand, model.n)
    verdict = feasibility.solve_operating_point(model, demand, tol=args.tol)
    rep = build_analysis_report(model, demand, verdict, include_trace=args.trace)
    if args.oracle:
        solutions = powerflow.enumerate_solutions(model, demand)
        v = verdict.point.voltage
        found = bool(len(solutions)) and bool(
            np.min(np.max(np.abs(solutions - v), axis=1)) <= 1e-6)
        rep["oracle"] = {
            "count": int(len(solutions)),
            "solutions": solutions.tolist(),
            "continuation_found": found if verdict.kind != feasibility.VerdictKind.INFEASIBLE else False,
            "continuation_is_max": bool(
                len(solutions) and np.all(v >= solutions.max(axis=0) - 1e-6)),
        }
    print(dumps17(rep))
    if args.figure:
        from . import plots
        plots.render_analysis_figure(model, rep, args.figure)
    return EXIT_OK


def _cmd_pmax(args) -> int:
    model = build_model(load_grid(args.grid))
    pm = powerflow.p_max(model)
    print(dumps17({"p_max": pm.demand, "voltage": pm.voltage}))
    return EXIT_OK


def _cmd_boundary(args) -> int:
    model = build_model(load_grid(args.grid))
    vertices = feasibility.boundary_scan(model, rays=args.rays, tol=args.tol)
    if args.format == "csv":
        fmt = report_mod.format_float
        print("alpha,p1,p2,v1,v2,lambda1,lambda2,perron_residual")
        for v in vertices:
            fields = [v.alpha, v.demand[0], v.demand[1], v.voltage[0],
                      v.voltage[1], v.lam[0], v.lam[1], v.perron_residual]
            print(",".join(fmt(float(x)) for x in fields))
    else:
        print(dumps17({"vertices": [
            {"alpha": v.alpha, "demand": v.demand, "voltage": v.voltage,
             "lam": v.lam, "perron_residual": v.perron_residual}
            for v in vertices]}))
    if args.figure:
        from . import plots
        plots.render_boundary_figure(vertices, powerflow.p_max(model).demand,
                                     args.figure)
    return EXIT_OK


def _cmd_certify(args) -> int:
    model = build_model(load_grid(args.grid))
    demand = _parse_demand(args.demand, model.n)
    verdict = feasibility.solve_operating_point(model, demand, tol=args.tol)
    if verdict.kind == feasibility.VerdictKind.INTERIOR:
        print(dumps17({
            "feasible": True,
            "operating_point": {
                "voltage": verdict.point.voltage,
                "stability": verdict.point.stability.value,
            }}))
        return EXIT_OK
    lmi = feasibility.assemble_lmi(model, verdict.lam, demand)
    print(dumps17({
        "feasible": verdict.kind == feasibility.VerdictKind.BOUNDARY,
        "verdict_kind": verdict.kind.value,
        "lmi": {"nu": lmi.nu, "matrix": lmi.matrix, "verdict": lmi.verdict.value},
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridfeas",
        description="Feasibility and stability analysis of DC power grids "
                    "with constant-power loads")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, demand=False):
        p.add_argument("--grid", required=True, help="grid JSON file")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="boundary classification tolerance (default 1e-9)")
        if demand:
            p.add_argument("--demand", required=True,
                           help="comma-separated watts or @file.json")

    p = sub.add_parser("validate", help="validate a grid file")
    p.add_argument("--grid", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("analyze", help="full feasibility analysis of a demand")
    add_common(p, demand=True)
    p.add_argument("--trace", action="store_true", help="include continuation trace")
    p.add_argument("--oracle", action="store_true",
                   help="append brute-force solution comparison (n <= 4)")
    p.add_argument("--figure", help="render a figure of the result to this file")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("pmax", help="maximizing feasible demand")
    p.add_argument("--grid", required=True)
    p.set_defaults(func=_cmd_pmax)

    p = sub.add_parser("boundary", help="feasible-set boundary polyline (2 loads)")
    add_common(p)
    p.add_argument("--rays", type=int, default=256)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--figure", help="render the region figure to this file")
    p.set_defaults(func=_cmd_boundary)

    p = sub.add_parser("certify", help="LMI infeasibility certificate")
    add_common(p, demand=True)
    p.set_defaults(func=_cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NotTwoLoads, OracleScaleExceeded) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InvalidSpec as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        if isinstance(exc, LoadSubgraphReducible):
            for k, ids in enumerate(exc.component_ids):
                print(f"  load component {k}: {ids}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GridfeasError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
