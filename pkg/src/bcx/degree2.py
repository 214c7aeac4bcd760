"""2-degree heuristic: Dynamic Merging of Frontiers (DMF).

For a vertex c with exactly two neighbors a and b, every shortest path out of
c leaves through a or b, so c's BFS tree follows from theirs::

    lvl_c(v)   = min(lvl_a(v), lvl_b(v)) + 1
    sigma_c(v) = sigma_a(v)               if lvl_a(v) < lvl_b(v)
                 sigma_b(v)               if lvl_a(v) > lvl_b(v)
                 sigma_a(v) + sigma_b(v)  if equal

DMF runs the backward sweeps of a and b level by level, aligned on absolute
depth, and accumulates c's dependencies on the way, so no round is ever
rooted at c. A vertex w is charged to c during a's sweep when
lvl_a(w) <= lvl_b(w) and during b's sweep otherwise, which makes w appear
exactly once, at depth lvl_c(w) - 1. The sweep therefore has to reach depth
0, where a and b themselves (level 1 of c's tree) are charged.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .degree1 import accumulate_ns, add_source_contribution, endpoint_contribution, preprocess_1degree
from .graph import Graph
from .serial import RoundState, Tally, bc_exact, brandes_round, expand_frontier

__all__ = [
    "Mode",
    "NeighborTrees",
    "SchedulePlan",
    "DmfResult",
    "neighbor_trees",
    "derive_2degree_tree",
    "dmf_accumulate",
    "schedule_2degree",
    "bc_with_2degree",
    "bc_with_heuristics",
]

_FAR = np.iinfo(np.int64).max // 4


class Mode(str, Enum):
    H0 = "h0"  # plain Brandes
    H1 = "h1"  # 1-degree reduction
    H2 = "h2"  # 2-degree DMF
    H3 = "h3"  # 1-degree reduction, then DMF on the residual graph

    @classmethod
    def parse(cls, value) -> "Mode":
        return value if isinstance(value, cls) else cls(str(value).lower())


@dataclass
class NeighborTrees:
    g: Graph
    c: int
    a: int
    b: int
    tree_a: RoundState  # forward sweep only; delta still zero
    tree_b: RoundState

    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        la = np.where(self.tree_a.depth < 0, _FAR, self.tree_a.depth)
        lb = np.where(self.tree_b.depth < 0, _FAR, self.tree_b.depth)
        return la, lb


@dataclass
class SchedulePlan:
    triples: list[tuple[int, int, int]]  # (c, a, b)
    explicit_sources: list[int]


@dataclass
class DmfResult:
    delta_a: np.ndarray
    delta_b: np.ndarray
    delta_c: np.ndarray
    sigma_c: np.ndarray
    c_edges: np.ndarray | None = field(default=None, repr=False)  # (w, v) per c-tree contribution


def _check_two_degree(g: Graph, c: int) -> tuple[int, int]:
    nbrs = g.neighbors(c)
    if len(nbrs) != 2:
        raise ValueError(f"vertex {c} has degree {len(nbrs)}, expected 2")
    return int(nbrs[0]), int(nbrs[1])


def neighbor_trees(g: Graph, c: int, *, tally: Tally | None = None) -> NeighborTrees:
    """Run the forward sweeps from both neighbors of the 2-degree vertex ``c``."""
    a, b = _check_two_degree(g, c)
    tree_a = brandes_round(g, a, tally=tally, accumulate=False)
    tree_b = brandes_round(g, b, tally=tally, accumulate=False)
    return NeighborTrees(g, c, a, b, tree_a, tree_b)


def _sigma_c(t: NeighborTrees, la, lb) -> np.ndarray:
    sa, sb = t.tree_a.sigma, t.tree_b.sigma
    sigma = np.where(la < lb, sa, np.where(la > lb, sb, sa + sb))
    sigma[t.c] = 1.0
    return sigma


def derive_2degree_tree(t: NeighborTrees) -> tuple[np.ndarray, np.ndarray]:
    """(sigma_c, lvl_c) of the 2-degree vertex c from its neighbors' trees.

    Unreachable vertices get sigma 0 and level -1, the same marker
    :class:`RoundState` uses.
    """
    _check_two_degree(t.g, t.c)
    la, lb = t.levels()
    near = np.minimum(la, lb)
    lvl = np.where(near >= _FAR, -1, near + 1)
    lvl[t.c] = 0
    sigma = np.where(lvl < 0, 0.0, _sigma_c(t, la, lb))
    return sigma, lvl


def dmf_accumulate(t: NeighborTrees, omega: np.ndarray | None = None, *,
                   record_edges: bool = False) -> DmfResult:
    """Backward sweeps of a and b with c's dependencies merged in.

    delta_a and delta_b are the ordinary dependencies of a and b; delta_c is
    what a round rooted at c would produce. Roots carry zero dependency.
    """
    g, c = t.g, t.c
    _check_two_degree(g, c)
    la, lb = t.levels()
    sigma_c = _sigma_c(t, la, lb)
    delta_c = np.zeros(g.n)
    hits: list[np.ndarray] = []
    trees = (
        # (tree, own levels, other levels, ties charged here)
        (t.tree_a, la, lb, True),
        (t.tree_b, lb, la, False),
    )

    def sweep(tree: RoundState, own, other, ties: bool, d: int) -> None:
        frontier = tree.frontier(d)
        stored = tree.edge_prefix[d]
        slot, nbr = expand_frontier(g.row_offsets, g.columns, frontier, stored[:-1], int(stored[-1]))
        succ = tree.depth[nbr] == d + 1
        extra = 0.0 if omega is None else omega[nbr]
        if d > 0:
            term = np.where(succ, (1.0 + tree.delta[nbr] + extra) / tree.sigma[nbr], 0.0)
            acc = np.bincount(slot, weights=term, minlength=frontier.size)
            tree.delta[frontier] = tree.sigma[frontier] * acc
        mine = (own[frontier] <= other[frontier]) if ties else (own[frontier] < other[frontier])
        mine &= frontier != c
        edges = succ & mine[slot] & (nbr != c) & (own[nbr] <= other[nbr])
        term_c = np.where(edges, (1.0 + delta_c[nbr] + extra) / sigma_c[nbr], 0.0)
        acc_c = np.bincount(slot, weights=term_c, minlength=frontier.size)
        charged = frontier[mine]
        delta_c[charged] = sigma_c[charged] * acc_c[mine]
        if record_edges:
            hits.append(np.stack([frontier[slot[edges]], nbr[edges]], axis=1))

    depth_a = t.tree_a.num_levels - 1
    depth_b = t.tree_b.num_levels - 1
    depth = max(depth_a, depth_b)
    while depth >= 0:
        if depth == depth_a:
            sweep(*trees[0], depth)
            depth_a -= 1
        if depth == depth_b:
            sweep(*trees[1], depth)
            depth_b -= 1
        depth -= 1
    t.tree_a.delta[t.a] = 0.0
    t.tree_b.delta[t.b] = 0.0
    return DmfResult(
        t.tree_a.delta, t.tree_b.delta, delta_c, sigma_c,
        np.concatenate(hits) if record_edges else None,
    )


def schedule_2degree(g: Graph) -> SchedulePlan:
    """Greedy choice of 2-degree vertices whose neighbor pairs are disjoint.

    Scanning ids in ascending order, c is taken when its two neighbors are
    not themselves taken, not neighbors of an earlier pick, and c is not a
    neighbor of an earlier pick.
    """
    deg = g.degrees
    picked = np.zeros(g.n, dtype=bool)
    claimed = np.zeros(g.n, dtype=bool)  # neighbors of picked vertices
    triples = []
    for c in np.flatnonzero(deg == 2).tolist():
        a, b = (int(x) for x in g.neighbors(c))
        if claimed[c] or picked[a] or picked[b] or claimed[a] or claimed[b]:
            continue
        picked[c] = True
        claimed[a] = claimed[b] = True
        triples.append((c, a, b))
    explicit = np.flatnonzero((deg > 0) & ~picked).tolist()
    return SchedulePlan(triples, explicit)


def _add_dmf(bc, t: NeighborTrees, res: DmfResult, omega) -> None:
    for tree in (t.tree_a, t.tree_b):
        add_source_contribution(bc, tree, omega)
    c = t.c
    res.delta_c[c] = 0.0
    bc += res.delta_c * (omega[c] + 1.0)
    if omega[c]:
        bc[c] += endpoint_contribution(int(omega[c]), accumulate_ns(t.tree_a, omega))


def _run_scheduled(g: Graph, omega: np.ndarray, plan: SchedulePlan, tally: Tally | None) -> np.ndarray:
    bc = np.zeros(g.n)
    done = np.zeros(g.n, dtype=bool)
    for c, a, b in plan.triples:
        t0 = time.perf_counter()
        trees = neighbor_trees(g, c)
        t1 = time.perf_counter()
        res = dmf_accumulate(trees, omega)
        _add_dmf(bc, trees, res, omega)
        done[[a, b]] = True
        if tally is not None:
            tally.rounds += 2
            tally.forward_time += t1 - t0
            tally.backward_time += time.perf_counter() - t1
    for s in plan.explicit_sources:
        if done[s]:
            continue
        state = brandes_round(g, s, omega, tally=tally)
        add_source_contribution(bc, state, omega)
        if tally is not None:
            tally.rounds += 1
    if tally is not None:
        tally.two_degree += len(plan.triples)
    return bc


def bc_with_2degree(g: Graph, *, tally: Tally | None = None) -> np.ndarray:
    plan = schedule_2degree(g)
    bc = _run_scheduled(g, np.zeros(g.n, dtype=np.int64), plan, tally)
    if tally is not None:
        tally.isolated += int(np.count_nonzero(g.degrees == 0))
    return bc


def bc_with_heuristics(g: Graph, mode: Mode | str = Mode.H0, *, tally: Tally | None = None) -> np.ndarray:
    """Exact betweenness under heuristic configuration H0..H3."""
    mode = Mode.parse(mode)
    if mode is Mode.H0:
        return bc_exact(g, tally=tally)
    if mode is Mode.H1:
        from .degree1 import bc_with_1degree
        return bc_with_1degree(g, tally=tally)
    if mode is Mode.H2:
        return bc_with_2degree(g, tally=tally)

    t0 = time.perf_counter()
    reduced = preprocess_1degree(g)
    if tally is not None:
        tally.preprocess_time += time.perf_counter() - t0
    res, omega, gone = reduced.graph, reduced.omega.omega, reduced.removed_mask
    plan = schedule_2degree(res)
    bc = _run_scheduled(res, omega, plan, tally)
    lone = (res.degrees == 0) & ~gone
    for s in np.flatnonzero(lone & (omega > 0)).tolist():
        bc[s] += endpoint_contribution(int(omega[s]), int(omega[s]) + 1)
        if tally is not None:
            tally.rounds += 1  # degenerate round: the traversal visits s alone
    if tally is not None:
        tally.one_degree += int(gone.sum())
        tally.isolated += int(np.count_nonzero(lone & (omega == 0)))
    return bc
