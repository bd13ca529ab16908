"""Immutable simple undirected graphs, vertex-set helpers, densities and I/O.

Adjacency is kept in CSR form (``indptr``/``indices`` with each row sorted),
so graphs with millions of vertices stay cheap, while small-graph code can
ask for per-vertex neighbour sets or integer bitmasks instead.
"""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Instances are immutable; every derived view (neighbour sets, bitmasks,
    scipy matrix) is computed lazily and cached.
    """

    __slots__ = ("n", "indptr", "indices", "bipartition", "_sets", "_masks", "_deg")

    def __init__(self, n, indptr, indices, bipartition=None):
        self.n = int(n)
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self.indptr = indptr
        self.indices = indices
        self.bipartition = bipartition
        self._sets = None
        self._masks = None
        self._deg = None

    # construction -------------------------------------------------------

    @classmethod
    def from_arrays(cls, n, us, vs, bipartition=None) -> "Graph":
        """Build from parallel endpoint arrays; duplicates and order are ignored."""
        us = np.asarray(us, dtype=np.int64).ravel()
        vs = np.asarray(vs, dtype=np.int64).ravel()
        if us.shape != vs.shape:
            raise ValueError("endpoint arrays differ in length")
        if us.size:
            if us.min() < 0 or vs.min() < 0 or us.max() >= n or vs.max() >= n:
                bad = np.flatnonzero((us < 0) | (vs < 0) | (us >= n) | (vs >= n))[0]
                raise ValueError(f"edge ({us[bad]}, {vs[bad]}) out of range for n={n}")
            loops = np.flatnonzero(us == vs)
            if loops.size:
                raise ValueError(f"self-loop at vertex {us[loops[0]]}")
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        key = np.unique(lo * n + hi)
        lo, hi = key // n, key % n
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        g = cls(n, indptr, cols, _check_bipartition(n, bipartition))
        if g.bipartition is not None and lo.size:
            side = np.zeros(n, dtype=bool)
            side[list(g.bipartition[1])] = True
            crossing = side[lo] != side[hi]
            if not crossing.all():
                k = np.flatnonzero(~crossing)[0]
                raise ValueError(f"edge ({lo[k]}, {hi[k]}) does not cross the bipartition")
        return g

    # basic queries ------------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    @property
    def degrees(self) -> np.ndarray:
        if self._deg is None:
            deg = np.diff(self.indptr)
            deg.setflags(write=False)
            self._deg = deg
        return self._deg

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbour indices of ``v`` (a read-only view)."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @property
    def adj(self) -> tuple:
        """Per-vertex ``frozenset`` of neighbours."""
        if self._sets is None:
            ip, ix = self.indptr.tolist(), self.indices.tolist()
            self._sets = tuple(frozenset(ix[ip[v]:ip[v + 1]]) for v in range(self.n))
        return self._sets

    @property
    def masks(self) -> tuple:
        """Per-vertex neighbourhood as a Python-int bitmask (bit ``u`` set iff ``u ~ v``)."""
        if self._masks is None:
            out = []
            if self.n <= 1 << 14:
                row = np.zeros(self.n, dtype=bool)
                for v in range(self.n):
                    nb = self.neighbors(v)
                    row[nb] = True
                    out.append(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little"))
                    row[nb] = False
            else:  # dense rows would cost n/8 bytes each
                for v in range(self.n):
                    mask = 0
                    for u in self.neighbors(v).tolist():
                        mask |= 1 << u
                    out.append(mask)
            self._masks = tuple(out)
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.size and row[k] == v)

    def edges(self):
        """Yield each edge once as ``(u, v)`` with ``u < v``, in lexicographic order."""
        ip, ix = self.indptr.tolist(), self.indices.tolist()
        for u in range(self.n):
            for v in ix[ip[u]:ip[u + 1]]:
                if v > u:
                    yield (u, v)

    def edge_array(self) -> np.ndarray:
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = rows < self.indices
        return np.stack([rows[keep], self.indices[keep]], axis=1)

    def to_scipy(self):
        from scipy.sparse import csr_matrix

        data = np.ones(self.indices.size, dtype=np.float64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def induced_subgraph(self, vertices: Iterable[int]):
        """Return ``(H, labels)`` where ``H`` is relabelled ``0..k-1`` and ``labels[i]`` is the original vertex."""
        labels = np.array(sorted(set(int(v) for v in vertices)), dtype=np.int64)
        index = np.full(self.n, -1, dtype=np.int64)
        index[labels] = np.arange(labels.size)
        e = self.edge_array()
        if e.size:
            a, b = index[e[:, 0]], index[e[:, 1]]
            keep = (a >= 0) & (b >= 0)
            a, b = a[keep], b[keep]
        else:
            a = b = np.zeros(0, dtype=np.int64)
        return Graph.from_arrays(labels.size, a, b), labels.tolist()

    # value semantics ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and self.bipartition == other.bipartition
        )

    def __hash__(self):
        return hash((self.n, self.indices.tobytes(), self.bipartition))

    def __repr__(self):
        extra = "" if self.bipartition is None else f", bipartite {len(self.bipartition[0])}+{len(self.bipartition[1])}"
        return f"Graph(n={self.n}, m={self.m}{extra})"


def _check_bipartition(n, bipartition):
    if bipartition is None:
        return None
    v1, v2 = (frozenset(int(v) for v in part) for part in bipartition)
    if v1 & v2:
        raise ValueError("bipartition classes overlap")
    if v1 | v2 != frozenset(range(n)):
        raise ValueError("bipartition does not cover all vertices")
    return (v1, v2)


def build_graph(n: int, edges: Iterable[Sequence[int]], bipartition=None) -> Graph:
    """Build a :class:`Graph` from an edge list.

    Duplicate edges (in either orientation) collapse to one. Out-of-range
    endpoints and self-loops raise ``ValueError``.
    """
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    pairs = [(int(u), int(v)) for u, v in edges]
    us = np.array([u for u, _ in pairs], dtype=np.int64)
    vs = np.array([v for _, v in pairs], dtype=np.int64)
    return Graph.from_arrays(n, us, vs, bipartition)


def complete_graph(n: int) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    bounds = np.cumsum([0, *sizes])
    part = np.repeat(np.arange(len(sizes)), sizes)
    n = int(bounds[-1])
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if part[u] != part[v]]
    bip = None
    if len(sizes) == 2:
        bip = (range(sizes[0]), range(sizes[0], n))
    return build_graph(n, edges, bip)


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


# vertex sets ----------------------------------------------------------------


def vertex_set(G: Graph, members: Iterable[int]) -> frozenset:
    """Validate ``members`` against ``G`` and return them as a frozenset."""
    out = frozenset(int(v) for v in members)
    for v in out:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} out of range for n={G.n}")
    return out


def common_neighborhood(G: Graph, T: Iterable[int]) -> frozenset:
    """Vertices adjacent to every member of ``T``; all of ``V(G)`` when ``T`` is empty."""
    T = vertex_set(G, T)
    if not T:
        return frozenset(range(G.n))
    adj = G.adj
    members = sorted(T, key=lambda v: len(adj[v]))
    out = set(adj[members[0]])
    for v in members[1:]:
        out &= adj[v]
        if not out:
            break
    return frozenset(out)


# densities ------------------------------------------------------------------


@dataclass(frozen=True)
class DensityReport:
    pair_density: Fraction
    multi_density: Fraction
    edge_count: int

    def as_floats(self) -> dict:
        return {
            "pair_density": float(self.pair_density),
            "multi_density": float(self.multi_density),
            "edge_count": self.edge_count,
        }


def edges_between(G: Graph, W1: frozenset, W2: frozenset) -> int:
    """Number of edges with one end in ``W1`` and the other in ``W2`` (sets assumed disjoint)."""
    if len(W1) > len(W2):
        W1, W2 = W2, W1
    adj = G.adj
    return sum(len(adj[w] & W2) for w in W1)


def density_between(G: Graph, W1, W2) -> DensityReport:
    """Exact edge density between two disjoint non-empty vertex sets."""
    W1, W2 = vertex_set(G, W1), vertex_set(G, W2)
    if not W1 or not W2:
        raise ValueError("density needs two non-empty sets")
    if W1 & W2:
        raise ValueError("sets overlap")
    e = edges_between(G, W1, W2)
    dens = Fraction(e, len(W1) * len(W2))
    return DensityReport(dens, dens, e)


def multi_density(G: Graph, parts: Sequence[Iterable[int]]) -> DensityReport:
    """Density ``sum e(Wi,Wj) / sum |Wi||Wj|`` over pairs ``i < j``.

    ``pair_density`` holds the density between the first two parts.
    """
    parts = [vertex_set(G, p) for p in parts]
    if len(parts) < 2:
        raise ValueError("need at least two parts")
    if any(not p for p in parts):
        raise ValueError("parts must be non-empty")
    seen = set()
    for p in parts:
        if seen & p:
            raise ValueError("parts overlap")
        seen |= p
    num = den = 0
    first = None
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            e = edges_between(G, parts[i], parts[j])
            num += e
            den += len(parts[i]) * len(parts[j])
            if first is None:
                first = Fraction(e, len(parts[i]) * len(parts[j]))
    return DensityReport(first, Fraction(num, den), num)


# I/O ------------------------------------------------------------------------


def to_edgelist(G: Graph) -> str:
    """Serialise to the edge-list text format (``n m`` then ``u v`` lines)."""
    lines = []
    if G.bipartition is not None:
        k = len(G.bipartition[0])
        if G.bipartition[0] != frozenset(range(k)):
            raise ValueError("edge-list format only encodes bipartitions of the form {0..k-1}")
        lines.append(f"# bipartite {k}")
    lines.append(f"{G.n} {G.m}")
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> Graph:
    bip_k = None
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            tok = line[1:].split()
            if len(tok) == 2 and tok[0] == "bipartite":
                bip_k = int(tok[1])
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ValueError(f"line {lineno}: expected two integers, got {raw!r}")
        a, b = int(tok[0]), int(tok[1])
        if header is None:
            header = (a, b)
        else:
            edges.append((a, b))
    if header is None:
        raise ValueError("missing 'n m' header line")
    n, m = header
    if len(edges) != m:
        raise ValueError(f"header declares {m} edges but {len(edges)} were given")
    bip = None if bip_k is None else (range(bip_k), range(bip_k, n))
    return build_graph(n, edges, bip)


def to_json(G: Graph) -> str:
    doc = {"n": G.n, "m": G.m, "edges": [list(e) for e in G.edges()]}
    if G.bipartition is not None:
        doc["bipartition"] = [sorted(G.bipartition[0]), sorted(G.bipartition[1])]
    return json.dumps(doc)


def from_json(text: str) -> Graph:
    doc = json.loads(text)
    return build_graph(doc["n"], doc["edges"], doc.get("bipartition"))


def read_graph(path) -> Graph:
    with open(path) as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return from_json(text)
    return parse_edgelist(text)


def write_graph(G: Graph, path) -> None:
    text = to_json(G) if str(path).endswith(".json") else to_edgelist(G)
    with open(path, "w") as fh:
        fh.write(text)
