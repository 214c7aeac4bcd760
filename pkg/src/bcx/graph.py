"""Graph container, edge-list I/O, R-MAT synthesis and connected components."""
from __future__ import annotations

import io
import re
import struct
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

__all__ = [
    "Graph",
    "EdgeList",
    "RmatParams",
    "InputError",
    "build_undirected",
    "load_edge_list",
    "read_edge_list",
    "write_edge_list",
    "generate_rmat",
    "component_sizes",
    "save_binary",
    "load_binary",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "complete_graph",
    "disjoint_union",
    "erdos_renyi",
]

VERTEX_DTYPE = np.uint32
OFFSET_DTYPE = np.int64
BINARY_MAGIC = b"BCX1"


class InputError(ValueError):
    """Malformed graph input (bad token, vertex id out of range, bad parameters)."""


@dataclass(frozen=True)
class EdgeList:
    n: int
    pairs: np.ndarray  # shape (k, 2), integer vertex ids

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True, eq=False)
class Graph:
    """Symmetric CSR adjacency of a simple undirected unweighted graph.

    Neighbors of ``u`` are ``columns[row_offsets[u]:row_offsets[u + 1]]``,
    strictly increasing. ``m`` counts undirected edges, so ``len(columns) == 2 * m``.
    Instances are immutable and safe to share between threads.
    """

    n: int
    row_offsets: np.ndarray
    columns: np.ndarray
    m: int = field(init=False)

    def __post_init__(self):
        ro = np.ascontiguousarray(self.row_offsets, dtype=OFFSET_DTYPE)
        cols = np.ascontiguousarray(self.columns, dtype=VERTEX_DTYPE)
        ro.setflags(write=False)
        cols.setflags(write=False)
        object.__setattr__(self, "row_offsets", ro)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "m", len(cols) // 2)
        if len(ro) != self.n + 1 or ro[0] != 0 or ro[-1] != len(cols) or np.any(np.diff(ro) < 0):
            raise InputError(f"row_offsets do not describe {len(cols)} entries over n={self.n}")
        if len(cols) and int(cols.max()) >= self.n:
            raise InputError("column id outside the vertex range")

    def check(self) -> None:
        """Full invariant check: sorted loop-free rows and a symmetric adjacency."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        dst = self.columns.astype(np.int64)
        if np.any(src == dst):
            raise InputError("self-loop in adjacency")
        if np.any((np.diff(dst) <= 0) & (src[1:] == src[:-1])):
            raise InputError("row not strictly increasing")
        fwd = np.sort(src * self.n + dst)
        back = np.sort(dst * self.n + src)
        if not np.array_equal(fwd, back):
            raise InputError("adjacency is not symmetric")

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.row_offsets)

    def neighbors(self, u: int) -> np.ndarray:
        return self.columns[self.row_offsets[u]:self.row_offsets[u + 1]]

    def degree(self, u: int) -> int:
        return int(self.row_offsets[u + 1] - self.row_offsets[u])

    def edge_list(self) -> EdgeList:
        """Each undirected edge once, as (u, v) with u < v."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        dst = self.columns.astype(np.int64)
        keep = src < dst
        return EdgeList(self.n, np.stack([src[keep], dst[keep]], axis=1))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.row_offsets, other.row_offsets)
            and np.array_equal(self.columns, other.columns)
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class RmatParams:
    scale: int
    edge_factor: int = 16
    a: float = 0.57
    b: float = 0.19
    c: float = 0.19
    d: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.scale < 1:
            raise InputError(f"scale must be >= 1, got {self.scale}")
        if self.edge_factor < 1:
            raise InputError(f"edge_factor must be >= 1, got {self.edge_factor}")
        probs = (self.a, self.b, self.c, self.d)
        if min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-9:
            raise InputError(f"quadrant probabilities must be >= 0 and sum to 1, got {probs}")

    @property
    def num_vertices(self) -> int:
        return 1 << self.scale

    @property
    def num_pairs(self) -> int:
        return self.edge_factor << self.scale


def build_undirected(edges: EdgeList) -> Graph:
    """Normalize an edge list into a symmetric CSR graph.

    Self-loops are dropped and repeated edges, in either orientation, are
    merged into one undirected edge.
    """
    n = int(edges.n)
    pairs = edges.pairs
    if len(pairs) and (pairs.min() < 0 or pairs.max() >= n):
        bad = pairs[(pairs < 0).any(axis=1) | (pairs >= n).any(axis=1)][0]
        raise InputError(f"edge ({bad[0]}, {bad[1]}) has a vertex id outside [0, {n})")
    u, v = pairs[:, 0], pairs[:, 1]
    keep = u != v
    src = np.concatenate([u[keep], v[keep]])
    dst = np.concatenate([v[keep], u[keep]])
    # one int64 key per directed entry: sorting it orders rows, then columns
    keys = np.unique(src * n + dst)
    src, dst = keys // max(n, 1), keys % max(n, 1)
    row_offsets = np.zeros(n + 1, dtype=OFFSET_DTYPE)
    np.cumsum(np.bincount(src, minlength=n), out=row_offsets[1:])
    return Graph(n, row_offsets, dst)


_NODES_HEADER = re.compile(r"#\s*Nodes:\s*(\d+)", re.IGNORECASE)


def load_edge_list(stream: TextIO | Iterable[str]) -> EdgeList:
    """Parse whitespace-separated ``u v`` lines; ``#`` starts a comment line.

    A SNAP-style ``# Nodes: k`` header fixes the vertex count, otherwise it is
    one more than the largest id seen.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    declared = None
    us: list[int] = []
    vs: list[int] = []
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            match = _NODES_HEADER.match(text)
            if match and declared is None:
                declared = int(match.group(1))
            continue
        tokens = text.split()
        if len(tokens) < 2:
            raise InputError(f"line {lineno}: expected 'u v', got {text!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer vertex id in {text!r}") from None
        if u < 0 or v < 0:
            raise InputError(f"line {lineno}: negative vertex id in {text!r}")
        us.append(u)
        vs.append(v)
    n = declared if declared is not None else (max(max(us), max(vs)) + 1 if us else 0)
    return EdgeList(n, np.column_stack([us, vs]) if us else np.empty((0, 2), dtype=np.int64))


def read_edge_list(path) -> EdgeList:
    with open(path) as fh:
        return load_edge_list(fh)


def write_edge_list(edges: EdgeList, stream: TextIO, header: bool = True) -> None:
    if header:
        stream.write(f"# Nodes: {edges.n} Edges: {len(edges)}\n")
    for u, v in edges.pairs.tolist():
        stream.write(f"{u} {v}\n")


def generate_rmat(params: RmatParams) -> EdgeList:
    """Sample ``edge_factor * 2**scale`` directed pairs by recursive quadrant choice.

    At each of the ``scale`` levels one uniform draw per pair picks quadrant
    a (top-left), b (top-right), c (bottom-left) or d (bottom-right), which
    fixes one bit of the row and column ids. Draws come from numpy's PCG64
    seeded with ``params.seed``, so a seed reproduces the exact pair sequence.
    Nothing is deduplicated here; :func:`build_undirected` does that.
    """
    rng = np.random.Generator(np.random.PCG64(params.seed))
    count = params.num_pairs
    cut_a = params.a
    cut_b = params.a + params.b
    cut_c = params.a + params.b + params.c
    src = np.zeros(count, dtype=np.int64)
    dst = np.zeros(count, dtype=np.int64)
    for level in range(params.scale):
        r = rng.random(count)
        row_bit = r >= cut_b  # quadrants c, d
        col_bit = ((r >= cut_a) & (r < cut_b)) | (r >= cut_c)  # quadrants b, d
        bit = 1 << (params.scale - 1 - level)
        src |= row_bit * bit
        dst |= col_bit * bit
    return EdgeList(params.num_vertices, np.stack([src, dst], axis=1))


def component_sizes(g: Graph) -> np.ndarray:
    """Size of the connected component containing each vertex."""
    label = np.full(g.n, -1, dtype=np.int64)
    sizes = []
    ro, cols = g.row_offsets, g.columns
    for root in range(g.n):
        if label[root] >= 0:
            continue
        cid = len(sizes)
        label[root] = cid
        todo = deque([root])
        count = 0
        while todo:
            u = todo.popleft()
            count += 1
            for w in cols[ro[u]:ro[u + 1]].tolist():
                if label[w] < 0:
                    label[w] = cid
                    todo.append(w)
        sizes.append(count)
    return np.asarray(sizes, dtype=np.int64)[label] if g.n else np.zeros(0, dtype=np.int64)


# binary cache: b"BCX1", n:u64, m:u64, row_offsets:u64[n+1], columns:u32[2m], little-endian
def save_binary(g: Graph, stream) -> None:
    stream.write(BINARY_MAGIC)
    stream.write(struct.pack("<QQ", g.n, g.m))
    stream.write(g.row_offsets.astype("<u8").tobytes())
    stream.write(g.columns.astype("<u4").tobytes())


def load_binary(stream) -> Graph:
    magic = stream.read(4)
    if magic != BINARY_MAGIC:
        raise InputError(f"bad magic {magic!r}, expected {BINARY_MAGIC!r}")
    n, m = struct.unpack("<QQ", stream.read(16))
    ro = np.frombuffer(stream.read(8 * (n + 1)), dtype="<u8").astype(OFFSET_DTYPE)
    cols = np.frombuffer(stream.read(4 * 2 * m), dtype="<u4")
    if len(ro) != n + 1 or len(cols) != 2 * m or ro[-1] != 2 * m:
        raise InputError("truncated or inconsistent binary graph")
    g = Graph(int(n), ro, cols)
    g.check()
    return g


# small graph families used by tests and demos

def path_graph(n: int) -> Graph:
    return build_undirected(EdgeList(n, [(i, i + 1) for i in range(n - 1)]))


def cycle_graph(n: int) -> Graph:
    return build_undirected(EdgeList(n, [(i, (i + 1) % n) for i in range(n)]))


def star_graph(k: int) -> Graph:
    """K_{1,k}: center 0, leaves 1..k."""
    return build_undirected(EdgeList(k + 1, [(0, i) for i in range(1, k + 1)]))


def complete_graph(n: int) -> Graph:
    return build_undirected(EdgeList(n, [(i, j) for i in range(n) for j in range(i + 1, n)]))


def disjoint_union(*graphs: Graph) -> Graph:
    shift = 0
    parts = []
    for g in graphs:
        parts.append(g.edge_list().pairs + shift)
        shift += g.n
    pairs = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return build_undirected(EdgeList(shift, pairs))


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return build_undirected(EdgeList(n, np.stack([iu[keep], ju[keep]], axis=1)))
