"""Matplotlib figure rendering for CLI reports.

Figures are rendered straight to files (Agg backend, no display). The data
in every figure is exactly what the corresponding report/CSV stream emits.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def render_boundary_figure(vertices, pmax_demand, path, title: str = "") -> None:
    """Feasible-region boundary polyline in the demand plane, with the
    maximizing demand and the total-power hyperplane for reference."""
    p = np.array([v.demand for v in vertices])
    total = float(np.sum(pmax_demand))
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    ax.plot(p[:, 0], p[:, 1], "-", color="tab:blue", lw=1.5, label="boundary")
    ax.plot(pmax_demand[0], pmax_demand[1], "s", color="tab:red", ms=6,
            label="maximizing demand")
    span = np.linspace(p[:, 0].min(), p[:, 0].max(), 2)
    ax.plot(span, total - span, "--", color="gray", lw=1.0,
            label="total-power bound")
    lim = 1.5 * max(total, 1e-12)
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_xlabel("demand at load 1 [W]")
    ax.set_ylabel("demand at load 2 [W]")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper right", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_analysis_figure(model, report: dict, path) -> None:
    """Operating-point figure for an analysis report.

    Single-load grids get the demand/voltage curve with the computed point
    marked; larger grids get the continuation trace (voltages and Perron
    root against the homotopy parameter) when present.
    """
    op_voltage = np.asarray(report["operating_point"]["voltage"], dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if model.n == 1:
        y = float(model.y_ll[0, 0])
        v_star = float(model.v_star[0])
        v = np.linspace(1e-3, 1.6 * v_star, 400)
        ax.plot(v * y * (v_star - v), v, color="tab:blue", lw=1.5,
                label="power flow curve")
        ax.plot(float(report["operating_point"]["demand"][0]), op_voltage[0],
                "o", color="tab:red", label="operating point")
        ax.axvline(0.25 * y * v_star ** 2, color="gray", ls="--", lw=1.0)
        ax.set_xlabel("demand [W]")
        ax.set_ylabel("load voltage [V]")
    elif report.get("trace"):
        thetas = [s["theta"] for s in report["trace"]]
        volts = np.array([s["voltage"] for s in report["trace"]])
        roots = [s["perron_root"] for s in report["trace"]]
        for k in range(volts.shape[1]):
            ax.plot(thetas, volts[:, k], lw=1.2, label=f"V[{k}]")
        ax2 = ax.twinx()
        ax2.plot(thetas, roots, color="tab:red", ls="--", lw=1.2,
                 label="Perron root")
        ax2.set_ylabel("Perron root [W/V]")
        ax.set_xlabel("homotopy parameter")
        ax.set_ylabel("load voltage [V]")
    else:
        ax.bar(np.arange(len(op_voltage)), op_voltage, color="tab:blue")
        ax.set_xlabel("load index")
        ax.set_ylabel("voltage [V]")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_title(f"verdict: {report['verdict']['kind']}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
