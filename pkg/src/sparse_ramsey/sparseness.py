"""Vertex orderings and the sparseness parameters measured against them.

For an ordering ``v_1, ..., v_n`` with ``L_i = {v_1, ..., v_i}``:

* back degree ``d``: the largest number of earlier neighbours of any vertex;
* left-set count ``delta``: the largest number of distinct sets
  ``N(v_j) & L_i`` over the later neighbours ``v_j`` of a vertex ``v_i``;
* arrangeability ``p``: the largest ``|union of N(v_j) & L_i|`` over the
  later neighbours ``v_j`` of ``v_i`` (this union contains ``v_i`` itself).
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph import Graph


class VertexOrdering:
    """A permutation of ``0..n-1`` together with its inverse."""

    __slots__ = ("order", "position")

    def __init__(self, order: Sequence[int]):
        order = tuple(int(v) for v in order)
        position = [-1] * len(order)
        for i, v in enumerate(order):
            if not 0 <= v < len(order) or position[v] != -1:
                raise ValueError("ordering is not a permutation of 0..n-1")
            position[v] = i
        self.order = order
        self.position = tuple(position)

    @classmethod
    def identity(cls, n: int) -> "VertexOrdering":
        return cls(range(n))

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __eq__(self, other):
        return isinstance(other, VertexOrdering) and self.order == other.order

    def __hash__(self):
        return hash(self.order)

    def __repr__(self):
        return f"VertexOrdering({list(self.order)})"


@dataclass(frozen=True)
class SparsenessCertificate:
    ordering: VertexOrdering
    d: int
    delta: int
    p: int
    metadata: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        out = {"ordering": list(self.ordering.order), "d": self.d, "delta": self.delta, "p": self.p}
        if self.metadata:
            out["metadata"] = self.metadata
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class LightVertexWitness:
    kind: str  # "degree-at-most-one" or "degree-two-with-degree-two-neighbors"
    vertex: int
    neighbors: tuple

    def check(self, G: Graph) -> bool:
        v = self.vertex
        nbrs = G.adj[v]
        if set(self.neighbors) != nbrs:
            return False
        if self.kind == "degree-at-most-one":
            return len(nbrs) <= 1
        if self.kind == "degree-two-with-degree-two-neighbors":
            return len(nbrs) == 2 and all(len(G.adj[u]) == 2 for u in nbrs)
        return False


def _as_ordering(G: Graph, ordering) -> VertexOrdering:
    if not isinstance(ordering, VertexOrdering):
        ordering = VertexOrdering(ordering)
    if len(ordering) != G.n:
        raise ValueError(f"ordering has {len(ordering)} vertices, graph has {G.n}")
    return ordering


def measure_certificate(G: Graph, ordering) -> SparsenessCertificate:
    """Exact ``d``, ``delta`` and ``p`` of ``G`` under ``ordering``."""
    ordering = _as_ordering(G, ordering)
    pos = ordering.position
    ip, ix = G.indptr.tolist(), G.indices.tolist()
    # Each neighbourhood sorted by position: N(w) & L_i is then a prefix.
    by_pos = []
    pos_lists = []
    for w in range(G.n):
        nb = sorted(ix[ip[w]:ip[w + 1]], key=pos.__getitem__)
        by_pos.append(nb)
        pos_lists.append([pos[u] for u in nb])
    d = delta = p = 0
    for v in range(G.n):
        pv = pos[v]
        back = 0
        left_sets = set()
        union = set()
        for w in by_pos[v]:
            if pos[w] < pv:
                back += 1
                continue
            # w is a later neighbour; its left set w.r.t. L_v is the prefix up to v.
            k = _prefix_len(pos_lists[w], pv)
            prefix = tuple(by_pos[w][:k])
            left_sets.add(prefix)
            union.update(prefix)
        d = max(d, back)
        delta = max(delta, len(left_sets))
        p = max(p, len(union))
    return SparsenessCertificate(ordering, d, delta, p)


def _prefix_len(sorted_positions, bound):
    # number of entries <= bound
    lo, hi = 0, len(sorted_positions)
    while lo < hi:
        mid = (lo + hi) // 2
        if sorted_positions[mid] <= bound:
            lo = mid + 1
        else:
            hi = mid
    return lo


def degeneracy_ordering(G: Graph):
    """Min-degree peeling; returns ``(ordering, d)`` with ``d`` the degeneracy.

    Ties go to the smallest vertex index. Vertices are emitted in reverse
    removal order, so every vertex has at most ``d`` earlier neighbours.
    """
    adj = G.adj
    deg = [len(a) for a in adj]
    heap = [(deg[v], v) for v in range(G.n)]
    heapq.heapify(heap)
    removed = [False] * G.n
    removal = []
    d = 0
    while heap:
        k, v = heapq.heappop(heap)
        if removed[v] or k != deg[v]:
            continue
        removed[v] = True
        removal.append(v)
        d = max(d, k)
        for u in adj[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return VertexOrdering(reversed(removal)), d


@dataclass(frozen=True)
class PeelFailure:
    """Peeling got stuck: no vertex of the residual induced subgraph qualified."""

    residual: frozenset
    removed: tuple  # vertices removed before getting stuck, in removal order

    def __bool__(self):
        return False


def peel_ordering(G: Graph, s: int, r: int):
    """Peel vertices ``v_n, v_{n-1}, ...`` by the degree-one / ``(s, r)`` rule.

    At each step the current induced subgraph must contain a vertex of degree
    at most one (preferred) or a vertex of degree at most ``s`` whose
    neighbours all have degree at most ``r``; the smallest such index is
    taken. Returns a :class:`VertexOrdering`, or a :class:`PeelFailure`
    carrying the stuck residual vertex set.
    """
    if s < 1 or r < 1:
        raise ValueError("s and r must be at least 1")
    adj = G.adj
    deg = [len(a) for a in adj]
    alive = [True] * G.n
    low = [v for v in range(G.n) if deg[v] <= 1]
    heapq.heapify(low)
    removal = []
    remaining = G.n
    while remaining:
        v = None
        while low:
            u = heapq.heappop(low)
            if alive[u]:
                v = u
                break
        if v is None:
            for u in range(G.n):
                if alive[u] and deg[u] <= s and all(deg[w] <= r for w in adj[u] if alive[w]):
                    v = u
                    break
        if v is None:
            residual = frozenset(u for u in range(G.n) if alive[u])
            return PeelFailure(residual, tuple(removal))
        alive[v] = False
        remaining -= 1
        removal.append(v)
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    heapq.heappush(low, w)
    return VertexOrdering(reversed(removal))


def find_light_vertex(G: Graph) -> Optional[LightVertexWitness]:
    """A vertex of degree <= 1, else a degree-2 vertex whose neighbours both have degree 2."""
    adj = G.adj
    for v in range(G.n):
        if len(adj[v]) <= 1:
            return LightVertexWitness("degree-at-most-one", v, tuple(sorted(adj[v])))
    for v in range(G.n):
        if len(adj[v]) == 2 and all(len(adj[u]) == 2 for u in adj[v]):
            return LightVertexWitness("degree-two-with-degree-two-neighbors", v, tuple(sorted(adj[v])))
    return None


def exact_min_arrangeability(G: Graph, n_cap: int = 10) -> int:
    """Minimum arrangeability ``p`` over all orderings of ``G``.

    The cost charged at ``v_i`` depends only on the set ``L_i`` and on
    ``v_i``, so the search runs over prefix sets: ``best(S)`` is the least
    achievable maximum cost over orderings of ``S`` placed first. A choice of
    last vertex is skipped when its own cost already reaches the best value
    found for the same prefix set.
    """
    n = G.n
    if n > n_cap:
        raise ValueError(
            f"exact search limited to n <= {n_cap} (got n={n}); "
            "use measure_certificate on a heuristic ordering instead"
        )
    if n == 0:
        return 0
    masks = G.masks
    full = (1 << n) - 1

    def cost(S, v):
        right = masks[v] & ~S
        union = 0
        while right:
            low = right & -right
            union |= masks[low.bit_length() - 1] & S
            right ^= low
        return union.bit_count()

    memo = {0: 0}

    def best(S):
        if S in memo:
            return memo[S]
        result = n + 1
        rest = S
        while rest:
            low = rest & -rest
            rest ^= low
            c = cost(S, low.bit_length() - 1)
            if c >= result:
                continue
            result = min(result, max(c, best(S ^ low)))
        memo[S] = result
        return result

    return best(full)


def random_ordering(n: int, rng: np.random.Generator) -> VertexOrdering:
    return VertexOrdering(rng.permutation(n).tolist())
