"""Electrical network model: ingestion, validation, and derived quantities.

A grid is a set of nodes (loads and sources) joined by conductive lines.
The Kirchhoff matrix collects line conductances into a weighted Laplacian;
its load/source partition yields the open-circuit load voltages and the
source-injected currents that drive the rest of the analysis.

Node ordering is deterministic: loads first in spec order, then sources in
spec order. All vectors and matrix blocks follow this ordering.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DisconnectedGraph, InvalidSpec, LoadSubgraphReducible

_NODE_KEYS = {"id", "kind", "voltage"}
_LINE_KEYS = {"from", "to", "conductance"}
_TOP_KEYS = {"nodes", "lines"}

# Relative tolerance for the zero-row-sum check on the assembled Kirchhoff
# matrix (scale carried by the largest diagonal entry).
ROW_SUM_RTOL = 1e-9


@dataclass(frozen=True)
class NodeSpec:
    id: str
    kind: str  # "load" | "source"
    voltage: float | None = None  # volts; required for sources, forbidden for loads


@dataclass(frozen=True)
class LineSpec:
    a: str
    b: str
    conductance: float  # siemens, strictly positive


@dataclass(frozen=True)
class GridSpec:
    nodes: tuple[NodeSpec, ...]
    lines: tuple[LineSpec, ...]

    def __init__(self, nodes, lines):
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "lines", tuple(lines))


@dataclass(frozen=True)
class GridModel:
    """Validated immutable grid model.

    Arrays are read-only; instances are safe for unrestricted concurrent
    reads after construction.
    """

    spec: GridSpec
    load_ids: tuple[str, ...]
    source_ids: tuple[str, ...]
    y: np.ndarray        # (n+m, n+m) Kirchhoff matrix, siemens
    y_ll: np.ndarray     # (n, n) load block
    y_ls: np.ndarray     # (n, m) load-source block
    y_ss: np.ndarray     # (m, m) source block
    v_s: np.ndarray      # (m,) source voltages, volts
    v_star: np.ndarray   # (n,) open-circuit load voltages, volts
    i_star: np.ndarray   # (n,) source-injected currents, amperes
    n: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", len(self.load_ids))
        object.__setattr__(self, "m", len(self.source_ids))


def parse_grid(data: dict) -> GridSpec:
    """Parse the JSON grid schema into a GridSpec. Unknown keys are rejected."""
    if not isinstance(data, dict):
        raise InvalidSpec("grid file must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise InvalidSpec(f"unknown top-level keys: {sorted(unknown)}")
    if "nodes" not in data or "lines" not in data:
        raise InvalidSpec('grid file requires "nodes" and "lines" arrays')

    nodes = []
    for entry in data["nodes"]:
        if not isinstance(entry, dict):
            raise InvalidSpec("each node must be an object")
        unknown = set(entry) - _NODE_KEYS
        if unknown:
            raise InvalidSpec(f"unknown node keys: {sorted(unknown)}")
        try:
            node_id = entry["id"]
            kind = entry["kind"]
        except KeyError as exc:
            raise InvalidSpec(f"node missing required key {exc}") from None
        voltage = entry.get("voltage")
        if not isinstance(node_id, str):
            raise InvalidSpec("node id must be a string")
        nodes.append(NodeSpec(id=node_id, kind=kind,
                              voltage=None if voltage is None else float(voltage)))

    lines = []
    for entry in data["lines"]:
        if not isinstance(entry, dict):
            raise InvalidSpec("each line must be an object")
        unknown = set(entry) - _LINE_KEYS
        if unknown:
            raise InvalidSpec(f"unknown line keys: {sorted(unknown)}")
        try:
            lines.append(LineSpec(a=entry["from"], b=entry["to"],
                                  conductance=float(entry["conductance"])))
        except KeyError as exc:
            raise InvalidSpec(f"line missing required key {exc}") from None
    return GridSpec(nodes=nodes, lines=lines)


def load_grid(path) -> GridSpec:
    """Load and parse a grid JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"invalid JSON: {exc}") from None
    return parse_grid(data)


def _validate_structure(spec: GridSpec) -> tuple[list[int], list[int], dict[str, int]]:
    """Check GridSpec invariants; return load indices, source indices and the
    id -> node position map (spec order)."""
    ids = [node.id for node in spec.nodes]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise InvalidSpec(f"duplicate node ids: {dupes}")
    index = {node_id: k for k, node_id in enumerate(ids)}

    loads, sources = [], []
    for k, node in enumerate(spec.nodes):
        if node.kind == "load":
            if node.voltage is not None:
                raise InvalidSpec(f"load '{node.id}' must not carry a voltage")
            loads.append(k)
        elif node.kind == "source":
            if node.voltage is None:
                raise InvalidSpec(f"source '{node.id}' requires a voltage")
            if not np.isfinite(node.voltage) or node.voltage <= 0.0:
                raise InvalidSpec(f"source '{node.id}' voltage must be > 0")
            sources.append(k)
        else:
            raise InvalidSpec(f"node '{node.id}' has unknown kind '{node.kind}'")
    if not loads:
        raise InvalidSpec("grid requires at least one load")
    if not sources:
        raise InvalidSpec("grid requires at least one source")

    seen_pairs = set()
    for line in spec.lines:
        if line.a not in index or line.b not in index:
            raise InvalidSpec(f"line {line.a}-{line.b} references unknown node")
        if line.a == line.b:
            raise InvalidSpec(f"line {line.a}-{line.b} joins a node to itself")
        pair = frozenset((line.a, line.b))
        if pair in seen_pairs:
            raise InvalidSpec(f"duplicate line between {line.a} and {line.b}")
        seen_pairs.add(pair)
        if not np.isfinite(line.conductance) or line.conductance <= 0.0:
            raise InvalidSpec(
                f"line {line.a}-{line.b} conductance must be strictly positive")
    return loads, sources, index


def _adjacency(spec: GridSpec, index: dict[str, int]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in spec.nodes]
    for line in spec.lines:
        i, j = index[line.a], index[line.b]
        adj[i].append(j)
        adj[j].append(i)
    return adj


def _bfs_component(start: int, adj: list[list[int]], allowed: set[int]) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in allowed and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def validate_connectivity(spec: GridSpec) -> tuple[bool, list[list[int]]]:
    """Connectivity report by breadth-first reachability over the line pattern.

    Returns (whole-graph connected, load-subgraph components), where each
    component is a sorted list of load indices (positions in the load
    ordering). Pure query; raises only on structurally invalid specs.
    """
    loads, _, index = _validate_structure(spec)
    adj = _adjacency(spec, index)

    all_nodes = set(range(len(spec.nodes)))
    connected = _bfs_component(0, adj, all_nodes) == all_nodes

    load_set = set(loads)
    load_pos = {k: p for p, k in enumerate(loads)}
    components: list[list[int]] = []
    remaining = set(loads)
    while remaining:
        start = min(remaining)
        comp = _bfs_component(start, adj, load_set)
        components.append(sorted(load_pos[k] for k in comp))
        remaining -= comp
    components.sort(key=lambda c: c[0])
    return connected, components


def build_model(spec: GridSpec) -> GridModel:
    """Assemble and validate the full grid model.

    Raises InvalidSpec for structural defects, DisconnectedGraph when the
    whole graph is not connected, and LoadSubgraphReducible when the load
    subgraph splits into several components (the error payload carries the
    component index sets so the caller can split the problem).
    """
    loads, sources, index = _validate_structure(spec)
    connected, components = validate_connectivity(spec)
    if not connected:
        raise DisconnectedGraph("grid graph is not connected")
    if len(components) > 1:
        comp_ids = [[spec.nodes[loads[p]].id for p in comp] for comp in components]
        raise LoadSubgraphReducible(
            f"load subgraph has {len(components)} components; "
            "split the problem per component",
            components=components, component_ids=comp_ids)

    order = loads + sources
    pos = {node_idx: p for p, node_idx in enumerate(order)}
    total = len(order)
    y = np.zeros((total, total))
    for line in spec.lines:
        i, j = pos[index[line.a]], pos[index[line.b]]
        w = line.conductance
        y[i, i] += w
        y[j, j] += w
        y[i, j] -= w
        y[j, i] -= w

    row_tol = ROW_SUM_RTOL * float(np.max(np.diag(y)))
    if np.any(np.abs(y @ np.ones(total)) > row_tol):
        raise InvalidSpec("Kirchhoff matrix rows do not sum to zero")

    n, m = len(loads), len(sources)
    y_ll = y[:n, :n].copy()
    y_ls = y[:n, n:].copy()
    y_ss = y[n:, n:].copy()
    v_s = np.array([spec.nodes[k].voltage for k in sources], dtype=float)

    i_star = -(y_ls @ v_s)
    try:
        cho = scipy.linalg.cho_factor(y_ll)
    except np.linalg.LinAlgError:
        raise InvalidSpec("load block of the Kirchhoff matrix is not "
                          "positive definite") from None
    v_star = scipy.linalg.cho_solve(cho, i_star)

    if np.any(v_star <= 0.0) or np.any(i_star < 0.0) or not np.any(i_star > 0.0):
        # cannot happen for a connected grid with positive conductances
        raise InvalidSpec("derived open-circuit quantities violate positivity")

    for arr in (y, y_ll, y_ls, y_ss, v_s, v_star, i_star):
        arr.flags.writeable = False
    return GridModel(spec=spec,
                     load_ids=tuple(spec.nodes[k].id for k in loads),
                     source_ids=tuple(spec.nodes[k].id for k in sources),
                     y=y, y_ll=y_ll, y_ls=y_ls, y_ss=y_ss,
                     v_s=v_s, v_star=v_star, i_star=i_star)


def split_load_components(spec: GridSpec) -> list[GridSpec]:
    """Split a grid whose load subgraph is disconnected into one sub-grid per
    load component.

    Each sub-grid keeps the component's loads plus every source reachable
    from them in the induced subgraph (unreachable sources are dropped), and
    all lines among the kept nodes. Sub-grids of a valid connected grid pass
    ``build_model`` individually; the feasibility analysis of the original
    grid is the product of the per-block analyses.
    """
    loads, _, index = _validate_structure(spec)
    adj = _adjacency(spec, index)
    load_set = set(loads)
    _, components = validate_connectivity(spec)

    out: list[GridSpec] = []
    for comp in components:
        comp_nodes = {loads[p] for p in comp}
        allowed = comp_nodes | (set(range(len(spec.nodes))) - load_set)
        reachable = _bfs_component(min(comp_nodes), adj, allowed)
        keep = {spec.nodes[k].id for k in sorted(reachable)}
        nodes = [node for node in spec.nodes if node.id in keep]
        lines = [line for line in spec.lines if line.a in keep and line.b in keep]
        out.append(GridSpec(nodes=nodes, lines=lines))
    return out
