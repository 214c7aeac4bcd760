"""1-degree reduction.

Vertices with exactly one neighbor are stripped before any round runs. Each
removal bumps ``omega`` of the surviving neighbor; the pairs the removed
vertices took part in are recovered by

* an extra ``omega[v]`` in every successor term of the dependency recursion
  (paths ending in a removed child of v),
* a ``(omega[s] + 1)`` multiplier on the dependencies of source s (paths
  starting in a removed child of s),
* a closed-form endpoint term on BC(s) for every pair with an endpoint among
  s's removed children, which needs the size of s's component in the
  original graph.

Only one pass is made; vertices that become 1-degree after the pass stay.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .graph import EdgeList, Graph, build_undirected
from .serial import RoundState, Tally, brandes_round

__all__ = [
    "OmegaMap",
    "ReducedGraph",
    "preprocess_1degree",
    "merge_partitions",
    "scan_partition",
    "accumulate_ns",
    "endpoint_contribution",
    "bc_with_1degree",
    "removal_stats",
]


@dataclass
class OmegaMap:
    omega: np.ndarray  # per-vertex count of removed 1-degree children
    removed: list[tuple[int, int]]  # (child, parent), in scan order

    @property
    def removed_vertices(self) -> np.ndarray:
        return np.array(sorted(c for c, _ in self.removed), dtype=np.int64)


@dataclass
class ReducedGraph:
    graph: Graph  # residual graph over the original id space
    omega: OmegaMap

    @property
    def removed_mask(self) -> np.ndarray:
        mask = np.zeros(self.graph.n, dtype=bool)
        mask[self.omega.removed_vertices] = True
        return mask


def _directed_entries(edges: EdgeList) -> np.ndarray:
    """Unique directed (u, v) entries of the symmetrized, loop-free edge set."""
    g = build_undirected(edges)
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees)
    return np.stack([src, g.columns.astype(np.int64)], axis=1)


def scan_partition(entries: np.ndarray):
    """Scan one 1-D partition: every source with a single entry is a removed child.

    Entries are sorted by source, so a lone source has no equal neighbor in
    the sorted order. Returns (removed (child, parent) pairs, kept entries).
    """
    if len(entries) == 0:
        return [], entries
    entries = entries[np.lexsort((entries[:, 1], entries[:, 0]))]
    src = entries[:, 0]
    lone = np.ones(len(src), dtype=bool)
    lone[1:] &= src[1:] != src[:-1]
    lone[:-1] &= src[:-1] != src[1:]
    removed = [(int(u), int(v)) for u, v in entries[lone]]
    return removed, entries[~lone]


def merge_partitions(n: int, results) -> ReducedGraph:
    """Combine per-partition scans; symmetric entries of removed children are dropped."""
    removed = sorted(pair for part, _ in results for pair in part)
    gone = np.zeros(n, dtype=bool)
    omega = np.zeros(n, dtype=np.int64)
    for child, parent in removed:
        gone[child] = True
        omega[parent] += 1
    kept = [k for _, k in results if len(k)]
    kept = np.concatenate(kept) if kept else np.empty((0, 2), dtype=np.int64)
    kept = kept[~gone[kept[:, 1]]]
    residual = build_undirected(EdgeList(n, kept))
    return ReducedGraph(residual, OmegaMap(omega, removed))


def preprocess_1degree(edges: EdgeList | Graph, num_partitions: int = 1) -> ReducedGraph:
    """Remove every vertex of degree exactly 1, tracking omega on its neighbor.

    Directed entries are dealt to partition ``u mod num_partitions``; all of a
    vertex's entries land in one partition, so the outcome does not depend on
    the partition count.
    """
    if num_partitions < 1:
        raise ValueError(f"num_partitions must be >= 1, got {num_partitions}")
    if isinstance(edges, Graph):
        edges = edges.edge_list()
    entries = _directed_entries(edges)
    owner = entries[:, 0] % num_partitions
    results = [scan_partition(entries[owner == p]) for p in range(num_partitions)]
    return merge_partitions(edges.n, results)


def accumulate_ns(state: RoundState, omega: np.ndarray | OmegaMap) -> int:
    """Original-graph size of the source's component, from a residual traversal.

    Sums ``1 + omega[v]`` over visited vertices only, after the forward sweep.
    """
    if isinstance(omega, OmegaMap):
        omega = omega.omega
    visited = state.visited
    return int(np.count_nonzero(visited) + omega[visited].sum())


def endpoint_contribution(omega_s: int, n_s: int) -> float:
    """BC gained by s from all pairs with an endpoint among its removed children.

    Each child u reaches the n_s - 2 vertices other than u and s only through s,
    in both directions; pairs of two children of s are counted twice by that,
    hence the correction: 2 * omega_s * (n_s - 2) - omega_s * (omega_s - 1).
    """
    if omega_s < 0 or n_s < omega_s + 1:
        raise ValueError(f"need n_s >= omega_s + 1, got omega_s={omega_s}, n_s={n_s}")
    return float(2 * omega_s * (n_s - 2) - omega_s * (omega_s - 1))


def add_source_contribution(bc, state: RoundState, omega: np.ndarray) -> None:
    """Fold a finished residual round into ``bc``, including the endpoint term."""
    s = state.source
    weight = omega[s] + 1.0
    delta = state.delta
    delta[s] = 0.0
    bc += delta * weight
    if omega[s]:
        bc[s] += endpoint_contribution(int(omega[s]), accumulate_ns(state, omega))


def bc_with_1degree(g: Graph, *, tally: Tally | None = None, num_partitions: int = 1,
                    reduced: ReducedGraph | None = None) -> np.ndarray:
    """Exact betweenness with 1-degree reduction."""
    t0 = time.perf_counter()
    if reduced is None:
        reduced = preprocess_1degree(g, num_partitions)
    t1 = time.perf_counter()
    res = reduced.graph
    omega = reduced.omega.omega
    gone = reduced.removed_mask
    bc = np.zeros(g.n)
    deg = res.degrees
    for s in range(g.n):
        if gone[s]:
            continue
        if deg[s] == 0 and not omega[s]:
            continue
        # a star center is left edgeless but still sources its children's pairs
        state = brandes_round(res, s, omega, tally=tally)
        add_source_contribution(bc, state, omega)
        if tally is not None:
            tally.rounds += 1
    if tally is not None:
        tally.preprocess_time += t1 - t0
        tally.one_degree += int(gone.sum())
        tally.isolated += int(np.count_nonzero((deg == 0) & ~gone & (omega == 0)))
    return bc


def removal_stats(g: Graph, reduced: ReducedGraph) -> dict:
    removed = len(reduced.omega.removed)
    return {
        "one_degree": removed,
        "one_degree_pct": 100.0 * removed / g.n if g.n else 0.0,
        "residual_m": reduced.graph.m,
    }
