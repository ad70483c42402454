"""Shared fixtures: the two academic example grids and random grid factories."""

from __future__ import annotations

import numpy as np
import pytest

import gridfeas as gf


def example1_spec() -> gf.GridSpec:
    # one load, one source, w = 3 S, V_S = 1 V
    return gf.GridSpec(
        nodes=[gf.NodeSpec("L1", "load"), gf.NodeSpec("S1", "source", 1.0)],
        lines=[gf.LineSpec("L1", "S1", 3.0)])


def example2_spec(w12: float = 2.0) -> gf.GridSpec:
    # two loads, one source: w13 = 3 S, w23 = 2 S, V_S = 1 V, coupling w12
    lines = [gf.LineSpec("L1", "S1", 3.0), gf.LineSpec("L2", "S1", 2.0)]
    if w12 > 0.0:
        lines.append(gf.LineSpec("L1", "L2", w12))
    return gf.GridSpec(
        nodes=[gf.NodeSpec("L1", "load"), gf.NodeSpec("L2", "load"),
               gf.NodeSpec("S1", "source", 1.0)],
        lines=lines)


@pytest.fixture(scope="session")
def example1() -> gf.GridModel:
    return gf.build_model(example1_spec())


@pytest.fixture(scope="session")
def example2() -> gf.GridModel:
    return gf.build_model(example2_spec(2.0))


def random_grid_spec(rng: np.random.Generator, n_loads: int | None = None,
                     n_sources: int | None = None,
                     extra_edge_prob: float = 0.35,
                     conductance_range: tuple[float, float] = (0.2, 5.0)) -> gf.GridSpec:
    """Random connected grid whose load subgraph is connected (spanning tree
    over the loads, each source attached to a load, random extra lines)."""
    if n_loads is None:
        n_loads = int(rng.integers(1, 7))
    if n_sources is None:
        n_sources = int(rng.integers(1, 4))
    load_ids = [f"L{i}" for i in range(n_loads)]
    source_ids = [f"S{j}" for j in range(n_sources)]
    nodes = [gf.NodeSpec(i, "load") for i in load_ids]
    nodes += [gf.NodeSpec(j, "source", float(rng.uniform(0.5, 2.0)))
              for j in source_ids]

    lo, hi = conductance_range
    seen: set[frozenset] = set()
    lines: list[gf.LineSpec] = []

    def add(a: str, b: str) -> None:
        pair = frozenset((a, b))
        if a == b or pair in seen:
            return
        seen.add(pair)
        lines.append(gf.LineSpec(a, b, float(np.exp(rng.uniform(np.log(lo), np.log(hi))))))

    for i in range(1, n_loads):
        add(load_ids[i], load_ids[int(rng.integers(0, i))])
    for j in source_ids:
        add(j, load_ids[int(rng.integers(0, n_loads))])
    everyone = load_ids + source_ids
    for i in range(len(everyone)):
        for j in range(i + 1, len(everyone)):
            if rng.random() < extra_edge_prob:
                add(everyone[i], everyone[j])
    return gf.GridSpec(nodes=nodes, lines=lines)


def random_model(rng: np.random.Generator, **kwargs) -> gf.GridModel:
    return gf.build_model(random_grid_spec(rng, **kwargs))


def random_irreducible_z(rng: np.random.Generator, n: int,
                         symmetric: bool = False) -> np.ndarray:
    """Random irreducible Z-matrix: some off-diagonal zeros, but a full
    negative cycle keeps the pattern strongly connected."""
    off = -rng.uniform(0.1, 1.0, (n, n))
    mask = rng.random((n, n)) < 0.4
    off[mask] = 0.0
    if n > 1:
        for i in range(n):
            off[i, (i + 1) % n] = -rng.uniform(0.1, 1.0)
    a = off
    if symmetric:
        a = 0.5 * (a + a.T)
        a[a > 0.0] = 0.0
    np.fill_diagonal(a, rng.uniform(0.5, 3.0, n) * n)
    return a
