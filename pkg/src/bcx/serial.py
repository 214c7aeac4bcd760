"""Single-worker exact betweenness centrality.

Each Brandes round is a level-synchronous BFS whose work items are the
active edges of the current frontier: an exclusive scan over the frontier
degrees gives every edge a slot, and a binary search over that scan maps a
work item back to its frontier vertex. The scans are kept per level, so the
backward (dependency) sweep walks the same frontiers without scanning again.

Scores use the ordered-pair convention, unnormalized: on an undirected graph
each unordered pair {s, t} contributes twice.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph

__all__ = [
    "RoundState",
    "Tally",
    "enumerate_active_edges",
    "map_work_item",
    "map_work_items",
    "expand_frontier",
    "brandes_round",
    "accumulate_level",
    "bc_exact",
    "bc_oracle",
    "teps",
    "format_scores",
    "parse_scores",
]


@dataclass
class Tally:
    """Counters and timers filled in by the BC drivers.

    The vertex breakdown (rounds / one_degree / two_degree / isolated) always
    sums to n for a whole-graph run.
    """

    rounds: int = 0
    one_degree: int = 0
    two_degree: int = 0
    isolated: int = 0
    prefix_scans_forward: int = 0
    prefix_scans_backward: int = 0
    scan_time_backward: float = 0.0
    preprocess_time: float = 0.0
    forward_time: float = 0.0
    backward_time: float = 0.0

    @property
    def breakdown(self) -> dict:
        return {
            "explicit": self.rounds,
            "one_degree": self.one_degree,
            "two_degree": self.two_degree,
            "isolated": self.isolated,
        }


@dataclass
class RoundState:
    """Traversal state of one Brandes round rooted at ``source``.

    ``queue[q_off[k]:q_off[k + 1]]`` is the frontier at depth k in discovery
    order, and ``edge_prefix[k]`` is that frontier's exclusive degree scan with
    the total appended.
    """

    source: int
    sigma: np.ndarray
    depth: np.ndarray
    delta: np.ndarray
    queue: np.ndarray
    q_off: list[int]
    edge_prefix: list[np.ndarray]
    visited: np.ndarray = field(repr=False)

    @property
    def num_levels(self) -> int:
        return len(self.q_off) - 1

    def frontier(self, k: int) -> np.ndarray:
        return self.queue[self.q_off[k]:self.q_off[k + 1]]


def enumerate_active_edges(frontier_degrees: Sequence[int]) -> tuple[np.ndarray, int]:
    """Exclusive prefix sum of frontier degrees, and their total."""
    degs = np.asarray(frontier_degrees, dtype=np.int64)
    if degs.size == 0:
        return np.zeros(0, dtype=np.int64), 0
    inclusive = np.cumsum(degs)
    prefix = np.empty_like(inclusive)
    prefix[0] = 0
    prefix[1:] = inclusive[:-1]
    return prefix, int(inclusive[-1])


def map_work_item(prefix: Sequence[int], i: int, total: int | None = None) -> tuple[int, int]:
    """Frontier slot and local edge index served by work item ``i``.

    The slot is the largest k with ``prefix[k] <= i``; zero-degree slots are
    skipped because they share their prefix value with the next slot.
    """
    prefix = np.asarray(prefix)
    if i < 0 or len(prefix) == 0 or (total is not None and i >= total):
        raise IndexError(f"work item {i} out of range")
    k = int(np.searchsorted(prefix, i, side="right")) - 1
    return k, int(i - prefix[k])


def map_work_items(prefix: np.ndarray, total: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`map_work_item` over ``range(total)``."""
    items = np.arange(total, dtype=np.int64)
    slot = np.searchsorted(prefix, items, side="right") - 1
    return slot, items - prefix[slot]


def expand_frontier(row_offsets, columns, frontier, prefix, total):
    """Active-edge expansion: (frontier slot, neighbor) for every outgoing edge."""
    slot, local = map_work_items(prefix, total)
    nbr = columns[row_offsets[frontier[slot]] + local].astype(np.int64)
    return slot, nbr


def _first_occurrences(values: np.ndarray) -> np.ndarray:
    uniq, first = np.unique(values, return_index=True)
    return uniq[np.argsort(first, kind="stable")]


def brandes_round(
    g: Graph,
    s: int,
    omega: np.ndarray | None = None,
    *,
    recompute_prefix: bool = False,
    tally: Tally | None = None,
    accumulate: bool = True,
) -> RoundState:
    """One Brandes round: shortest-path counting, then successor-checking accumulation.

    With ``omega`` the dependency recursion adds ``omega[v]`` to every
    successor term, which folds removed 1-degree children back in.
    ``recompute_prefix`` redoes the degree scan in the backward sweep; it only
    exists to check the stored scans against fresh ones.
    """
    if not 0 <= s < g.n:
        raise IndexError(f"source {s} out of range for n={g.n}")
    n = g.n
    ro, cols, deg = g.row_offsets, g.columns, g.degrees
    sigma = np.zeros(n)
    depth = np.full(n, -1, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    sigma[s] = 1.0
    depth[s] = 0
    visited[s] = True

    t0 = time.perf_counter()
    levels = [np.array([s], dtype=np.int64)]
    q_off = [0, 1]
    prefixes: list[np.ndarray] = []
    frontier = levels[0]
    level = 0
    while True:
        prefix, total = enumerate_active_edges(deg[frontier])
        if tally is not None:
            tally.prefix_scans_forward += 1
        prefixes.append(np.append(prefix, total))
        slot, nbr = expand_frontier(ro, cols, frontier, prefix, total)
        fresh = _first_occurrences(nbr[~visited[nbr]])
        visited[fresh] = True
        depth[fresh] = level + 1
        onward = depth[nbr] == level + 1
        np.add.at(sigma, nbr[onward], sigma[frontier[slot[onward]]])
        if fresh.size == 0:
            break
        levels.append(fresh)
        q_off.append(q_off[-1] + fresh.size)
        frontier = fresh
        level += 1
    t1 = time.perf_counter()

    state = RoundState(
        source=s,
        sigma=sigma,
        depth=depth,
        delta=np.zeros(n),
        queue=np.concatenate(levels),
        q_off=q_off,
        edge_prefix=prefixes,
        visited=visited,
    )
    if accumulate:
        # leaves have no successors: start one level above the deepest
        for k in range(state.num_levels - 2, 0, -1):
            accumulate_level(g, state, k, omega, recompute_prefix=recompute_prefix, tally=tally)
    if tally is not None:
        tally.forward_time += t1 - t0
        tally.backward_time += time.perf_counter() - t1
    return state


def accumulate_level(g, state, k, omega=None, *, recompute_prefix=False, tally=None) -> None:
    """delta[w] = sigma[w] * sum over successors v of (1 + delta[v] + omega[v]) / sigma[v]."""
    frontier = state.frontier(k)
    if recompute_prefix:
        t0 = time.perf_counter()
        prefix, total = enumerate_active_edges(g.degrees[frontier])
        if tally is not None:
            tally.prefix_scans_backward += 1
            tally.scan_time_backward += time.perf_counter() - t0
    else:
        stored = state.edge_prefix[k]
        prefix, total = stored[:-1], int(stored[-1])
    slot, nbr = expand_frontier(g.row_offsets, g.columns, frontier, prefix, total)
    succ = state.depth[nbr] == k + 1
    v = nbr[succ]
    term = 1.0 + state.delta[v]
    if omega is not None:
        term = term + omega[v]
    acc = np.bincount(slot[succ], weights=term / state.sigma[v], minlength=frontier.size)
    state.delta[frontier] = state.sigma[frontier] * acc


def bc_exact(g: Graph, sources: Iterable[int] | None = None, *, tally: Tally | None = None,
             recompute_prefix: bool = False) -> np.ndarray:
    """Brandes betweenness, summed over ``sources`` (default: every vertex).

    Isolated vertices are never used as sources. With a source subset the
    result is the partial sum for those sources only.
    """
    bc = np.zeros(g.n)
    deg = g.degrees
    if sources is None:
        sources = range(g.n)
        if tally is not None:
            tally.isolated += int(np.count_nonzero(deg == 0))
    for s in sources:
        if deg[s] == 0:
            continue
        state = brandes_round(g, s, tally=tally, recompute_prefix=recompute_prefix)
        if tally is not None:
            tally.rounds += 1
        state.delta[s] = 0.0
        bc += state.delta
    return bc


def bc_oracle(g: Graph) -> np.ndarray:
    """Betweenness from all-pairs distances and path counts (Bellman criterion).

    v lies on a shortest s-t path iff d(s,t) = d(s,v) + d(v,t); the fraction
    of s-t paths through v is then sigma(s,v) * sigma(v,t) / sigma(s,t).
    Deliberately shares no traversal code with :func:`brandes_round`.
    """
    n = g.n
    adj = [g.neighbors(u).tolist() for u in range(n)]
    dist = np.full((n, n), np.inf)
    paths = np.zeros((n, n))
    for s in range(n):
        d_row, p_row = dist[s], paths[s]
        d_row[s], p_row[s] = 0, 1
        todo = deque([s])
        while todo:
            u = todo.popleft()
            for w in adj[u]:
                if d_row[w] == np.inf:
                    d_row[w] = d_row[u] + 1
                    todo.append(w)
                if d_row[w] == d_row[u] + 1:
                    p_row[w] += p_row[u]
    bc = np.zeros(n)
    off_diag = ~np.eye(n, dtype=bool)
    finite = np.isfinite(dist) & off_diag
    safe_paths = np.where(finite, paths, 1.0)
    for v in range(n):
        through = finite & (dist[:, [v]] + dist[[v], :] == dist)
        through[v, :] = False
        through[:, v] = False
        frac = np.outer(paths[:, v], paths[v, :]) / safe_paths
        bc[v] = frac[through].sum()
    return bc


def teps(m: int, n_eff: int, t: float) -> float:
    """Traversed edges per second of a BC run: m * n_eff / t."""
    if t <= 0:
        raise ValueError(f"elapsed time must be positive, got {t}")
    return m * n_eff / t


def format_scores(scores: np.ndarray, fmt: str = "txt") -> str:
    if fmt == "csv":
        lines = ["vertex,score"] + [f"{v},{x:.6f}" for v, x in enumerate(scores.tolist())]
    elif fmt == "txt":
        lines = [f"{v} {x:.6f}" for v, x in enumerate(scores.tolist())]
    else:
        raise ValueError(f"unknown score format {fmt!r}")
    return "\n".join(lines) + "\n"


def parse_scores(text: str) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("vertex"):
            continue
        v, x = line.replace(",", " ").split()[:2]
        rows.append((int(v), float(x)))
    out = np.zeros(max((v for v, _ in rows), default=-1) + 1)
    for v, x in rows:
        out[v] = x
    return out
