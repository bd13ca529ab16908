"""Seeded G(n, p) / G(n, n, p) sampling and finite-n checks on sparse random graphs.

Sampling scheme (pinned; changing it changes every sampled graph)
-----------------------------------------------------------------
Unordered pairs ``u < v`` are indexed lexicographically (bipartite: cross
pairs ``(u, n + w)`` get index ``u * n + w``). The index space is cut into
blocks of ``BLOCK_SIZE`` pairs. Block ``b`` draws from a Philox-4x64
generator keyed by ``(seed, b)``; inside a block, selected pairs are found
by geometric skipping, which is an exact Bernoulli(p) process. Blocks are
independent, so they can be sampled in any order or in parallel and the
result is identical.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .graph import Graph, vertex_set
from .sparseness import (
    SparsenessCertificate,
    VertexOrdering,
    degeneracy_ordering,
    measure_certificate,
    peel_ordering,
)

BLOCK_SIZE = 1 << 24
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RandomGraphSpec:
    n: int
    p: float
    seed: int = 0
    bipartite: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0 <= self.p <= 1:
            raise ValueError(f"edge probability {self.p} outside [0, 1]")

    @classmethod
    def from_d(cls, n: int, d: float, seed: int = 0, bipartite: bool = False) -> "RandomGraphSpec":
        return cls(n, min(1.0, d / n) if n else 0.0, seed, bipartite)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed & _SEED_MASK, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _bernoulli_positions(rng, size, p):
    if p >= 1:
        return np.arange(size, dtype=np.int64)
    if p <= 0 or size == 0:
        return np.zeros(0, dtype=np.int64)
    mean = size * p
    chunk = int(mean + 6 * math.sqrt(mean) + 16)
    out = []
    last = -1
    while True:
        gaps = rng.geometric(p, chunk)
        # tiny p overflows int64 into negatives; any gap past the block ends it
        gaps = np.where((gaps <= 0) | (gaps > size), size + 1, gaps)
        pos = last + np.cumsum(gaps)
        out.append(pos[pos < size])
        if pos[-1] >= size:
            break
        last = int(pos[-1])
    return np.concatenate(out)


def _decode_pairs(k, n):
    # inverse of index(u, v) = u*n - u*(u+1)/2 + (v - u - 1)
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(np.maximum(b * b - 8.0 * k, 0.0))) / 2).astype(np.int64)
    u = np.clip(u, 0, max(n - 2, 0))

    def offset(x):
        return x * n - x * (x + 1) // 2

    for _ in range(3):
        u = np.where(offset(u) > k, u - 1, u)
        u = np.where((u + 1 <= n - 2) & (offset(u + 1) <= k), u + 1, u)
    v = k - offset(u) + u + 1
    return u, v


def sample_gnp(spec: RandomGraphSpec) -> Graph:
    """Sample ``G(n, p)`` (or ``G(n, n, p)`` if ``spec.bipartite``) deterministically from the spec."""
    n = spec.n
    total = n * n if spec.bipartite else n * (n - 1) // 2
    chunks = []
    for block, start in enumerate(range(0, total, BLOCK_SIZE)):
        size = min(BLOCK_SIZE, total - start)
        pos = _bernoulli_positions(_block_rng(spec.seed, block), size, spec.p)
        chunks.append(pos + start)
    k = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    if spec.bipartite:
        return Graph.from_arrays(2 * n, k // n, n + k % n, (range(n), range(n, 2 * n)))
    u, v = _decode_pairs(k, n)
    return Graph.from_arrays(n, u, v)


def random_degenerate_graph(n: int, d: int, seed: int = 0) -> Graph:
    """Each vertex ``i`` joins ``min(i, d)`` distinct uniformly random earlier vertices."""
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(1, n):
        for j in rng.choice(i, size=min(i, d), replace=False):
            edges.append((int(j), i))
    if not edges:
        return Graph.from_arrays(n, [], [])
    e = np.array(edges)
    return Graph.from_arrays(n, e[:, 0], e[:, 1])


# reports --------------------------------------------------------------------


@dataclass
class PropertyReport:
    """Outcome of a sampled or exhaustive property check."""

    lemma_id: str
    samples: int
    successes: int
    statistic: object
    threshold: object
    mode: str = "exhaustive"
    witness: object = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.successes <= self.samples:
            raise ValueError("successes must lie in [0, samples]")

    @property
    def passed(self) -> bool:
        return self.successes == self.samples

    def to_dict(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "samples": self.samples,
            "successes": self.successes,
            "statistic": _jsonable(self.statistic),
            "threshold": _jsonable(self.threshold),
            "mode": self.mode,
            "passed": self.passed,
            "witness": _jsonable(self.witness),
            "notes": _jsonable(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def csv_row(self, n=None, d=None, seed=None) -> list:
        return [self.lemma_id, n, d, seed, _jsonable(self.statistic), "pass" if self.passed else "fail"]


def _jsonable(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


# closure --------------------------------------------------------------------


@dataclass(frozen=True)
class ClosureResult:
    closure: frozenset
    added: tuple
    growth_ratio: Optional[Fraction]


def closure_F(G: Graph, S, shuffle_seed: Optional[int] = None) -> ClosureResult:
    """Smallest superset of ``S`` such that no outside vertex has two neighbours inside.

    Candidates are absorbed smallest index first; ``shuffle_seed`` instead
    absorbs them in a random order (the resulting set is the same).
    """
    S = vertex_set(G, S)
    adj = G.adj
    inside = set(S)
    hits = {}
    for v in S:
        for u in adj[v]:
            if u not in inside:
                hits[u] = hits.get(u, 0) + 1
    ready = [u for u, c in hits.items() if c >= 2]
    rng = None
    if shuffle_seed is None:
        heapq.heapify(ready)
    else:
        rng = np.random.default_rng(shuffle_seed)
    added = []
    while ready:
        if rng is None:
            w = heapq.heappop(ready)
        else:
            w = ready.pop(int(rng.integers(len(ready))))
        if w in inside:
            continue
        inside.add(w)
        added.append(w)
        for u in adj[w]:
            if u in inside:
                continue
            c = hits.get(u, 0) + 1
            hits[u] = c
            if c == 2:
                if rng is None:
                    heapq.heappush(ready, u)
                else:
                    ready.append(u)
    ratio = Fraction(len(inside), len(S)) if S else None
    return ClosureResult(frozenset(inside), tuple(added), ratio)


# the (16d, 16d) ordering --------------------------------------------------


def cool_ordering(G: Graph, d: int):
    """Ordering from the closure of the high-degree vertices, then everything else.

    ``A`` is the set of vertices of degree above ``16 d``. Its closure ``F(A)``
    is ordered by :func:`peel_ordering` with ``s = r = 2`` and the remaining
    vertices follow in index order. If peeling gets stuck, the residual is
    ordered by degeneracy before the peeled part and ``peel_failed`` is set in
    the certificate metadata.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    threshold = 16 * d
    A = np.flatnonzero(G.degrees > threshold).tolist()
    F = closure_F(G, A).closure
    meta = {"threshold": threshold, "high_degree": len(A), "closure_size": len(F), "peel_failed": False}
    head = []
    if F:
        sub, labels = G.induced_subgraph(F)
        peeled = peel_ordering(sub, 2, 2)
        if isinstance(peeled, VertexOrdering):
            head = [labels[i] for i in peeled.order]
        else:
            meta["peel_failed"] = True
            meta["residual_size"] = len(peeled.residual)
            res_sub, res_labels = sub.induced_subgraph(peeled.residual)
            res_order, _ = degeneracy_ordering(res_sub)
            head = [labels[res_labels[i]] for i in res_order.order]
            head += [labels[i] for i in reversed(peeled.removed)]
    in_head = set(head)
    order = head + [v for v in range(G.n) if v not in in_head]
    ordering = VertexOrdering(order)
    cert = measure_certificate(G, ordering)
    cert = SparsenessCertificate(cert.ordering, cert.d, cert.delta, cert.p, meta)
    return ordering, cert


# counting checks ------------------------------------------------------------


def count_high_degree(G: Graph, threshold: int) -> int:
    return int(np.count_nonzero(G.degrees > threshold))


def count_k23_pairs(G: Graph) -> int:
    """Number of unordered vertex pairs with at least three common neighbours."""
    deg = G.degrees
    keys = []
    for k in np.unique(deg[deg >= 2]).tolist():
        centers = np.flatnonzero(deg == k)
        starts = G.indptr[centers]
        rows = G.indices[starts[:, None] + np.arange(k)[None, :]]
        for i, j in combinations(range(k), 2):
            keys.append(rows[:, i] * G.n + rows[:, j])
    if not keys:
        return 0
    _, counts = np.unique(np.concatenate(keys), return_counts=True)
    return int(np.count_nonzero(counts >= 3))


def two_core(G: Graph) -> frozenset:
    adj = G.adj
    deg = [len(a) for a in adj]
    alive = [True] * G.n
    stack = [v for v in range(G.n) if deg[v] < 2]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for u in adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] < 2:
                    stack.append(u)
    return frozenset(v for v in range(G.n) if alive[v])


def _violates(t, e):
    # spans at least (9/8) t edges, i.e. average degree at least 9/4
    return 8 * e >= 9 * t


def check_small_subgraph_density(G: Graph, size_cap: int = 8, seed: int = 0, samples: int = 10000) -> PropertyReport:
    """Look for a vertex set of size ``t <= size_cap`` spanning at least ``9t/8`` edges.

    For ``size_cap <= 12`` the search is exhaustive. Stripping a vertex of
    degree at most one from a violating set leaves a violating set, so a
    minimal violator is connected, has minimum degree 2 and at least
    ``t + 1`` edges. Rooted at its smallest vertex ``v``, it lies within
    ``size_cap - 2`` hops of ``v`` among larger-index 2-core vertices, and
    inside the 2-core of that ball. Only those 2-cores are enumerated, and
    only when their cyclomatic number is at least 2. Larger caps fall back to ``samples`` random connected sets.
    The first violating set found is returned as the witness.
    """
    if size_cap < 1:
        raise ValueError("size_cap must be positive")
    core = two_core(G)
    adj = G.adj
    if size_cap > 12:
        return _sampled_density_check(G, core, size_cap, seed, samples)
    inspected = 0
    for v in sorted(core):
        ball = _ball(adj, core, v, max(size_cap - 2, 0))
        local = _strip_leaves({u: adj[u] & ball for u in ball})
        if v not in local:
            continue
        # the 2-core of a connected graph is connected
        if sum(len(a) for a in local.values()) // 2 - len(local) + 1 < 2:
            continue
        found, count = _esu_violation(local, v, size_cap)
        inspected += count
        if found is not None:
            t, e = len(found), sum(len(local[u] & found) for u in found) // 2
            return PropertyReport(
                "fifth5", inspected, inspected - 1, {"size": t, "edges": e}, Fraction(9, 8),
                witness=sorted(found), notes={"size_cap": size_cap},
            )
    return PropertyReport("fifth5", inspected, inspected, None, Fraction(9, 8), notes={"size_cap": size_cap})


def _ball(adj, core, root, radius):
    seen = {root}
    frontier = [root]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w > root and w in core and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    return frozenset(seen)


def _strip_leaves(local):
    local = {u: set(a) for u, a in local.items()}
    stack = [u for u, a in local.items() if len(a) < 2]
    while stack:
        u = stack.pop()
        if u not in local:
            continue
        for w in local.pop(u):
            if w in local:
                local[w].discard(u)
                if len(local[w]) < 2:
                    stack.append(w)
    return {u: frozenset(a) for u, a in local.items()}


def _esu_violation(local, root, cap):
    """Enumerate connected sets with minimum ``root`` (ESU); stop at the first violator."""
    count = 0

    def extend(sub, ext, nbhd, e):
        nonlocal count
        count += 1
        if len(sub) > 1 and _violates(len(sub), e):
            return sub
        if len(sub) == cap:
            return None
        ext = list(ext)
        while ext:
            w = ext.pop()
            new_ext = ext + [u for u in local[w] if u > root and u not in nbhd]
            found = extend(sub | {w}, new_ext, nbhd | local[w], e + len(local[w] & sub))
            if found is not None:
                return found
        return None

    start = frozenset([root])
    found = extend(start, [u for u in local[root] if u > root], local[root] | start, 0)
    return found, count


def _sampled_density_check(G, core, size_cap, seed, samples):
    rng = np.random.default_rng(seed)
    adj = G.adj
    pool = sorted(core)
    checked = 0
    if pool:
        for _ in range(samples):
            target = int(rng.integers(2, size_cap + 1))
            sub = {pool[int(rng.integers(len(pool)))]}
            frontier = set()
            for u in sub:
                frontier |= adj[u] & core
            while len(sub) < target:
                frontier -= sub
                if not frontier:
                    break
                w = sorted(frontier)[int(rng.integers(len(frontier)))]
                sub.add(w)
                frontier |= adj[w] & core
            checked += 1
            e = sum(len(adj[u] & sub) for u in sub) // 2
            if _violates(len(sub), e):
                return PropertyReport(
                    "fifth5", checked, checked - 1, {"size": len(sub), "edges": e}, Fraction(9, 8),
                    mode="sampled", witness=sorted(sub), notes={"size_cap": size_cap},
                )
    return PropertyReport("fifth5", checked, checked, None, Fraction(9, 8), mode="sampled",
                          notes={"size_cap": size_cap})


def check_density_between_large_sets(G: Graph, fraction=Fraction(1, 6), trials: int = 1000,
                                     seed: int = 0, p: Optional[float] = None) -> PropertyReport:
    """Sample disjoint pairs ``A, B`` of size ``ceil(fraction * n)`` and record ``e(A,B) / (p|A||B|)``.

    ``p`` defaults to the realised edge density. A trial succeeds when the
    ratio is at least 1/2; the statistic is the minimum ratio seen.
    """
    fraction = Fraction(fraction)
    if not 0 < fraction <= Fraction(1, 2):
        raise ValueError("fraction must lie in (0, 1/2]")
    n = G.n
    s = math.ceil(fraction * n)
    if s == 0 or 2 * s > n:
        raise ValueError(f"cannot fit two disjoint sets of size {s} in {n} vertices")
    if p is None:
        p = G.m / (n * (n - 1) / 2)
    rng = np.random.default_rng(seed)
    M = G.to_scipy()
    ratios = []
    batch = 64
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        perms = np.stack([rng.permutation(n)[: 2 * s] for _ in range(b)])
        A, B = perms[:, :s], perms[:, s:]
        XB = np.zeros((n, b), dtype=np.float64)
        XB[B.T, np.arange(b)[None, :]] = 1.0
        Y = np.asarray(M @ XB)
        e = Y[A, np.arange(b)[:, None]].sum(axis=1)
        ratios.extend((e / (p * s * s)).tolist() if p > 0 else [0.0] * b)
        done += b
    successes = sum(r >= 0.5 for r in ratios)
    return PropertyReport(
        "six6", trials, successes, min(ratios), 0.5, mode="sampled",
        notes={"set_size": s, "p": p},
    )


def arrangeability_witness(G: Graph, ordering, p: Optional[float] = None, max_candidates: int = 32) -> int:
    """Lower bound on the arrangeability of ``ordering`` built from the thirds construction.

    Positions are split into thirds ``V1, V2, V3``. ``V3'`` keeps the vertices
    with at least ``p|V1|/2`` neighbours in ``V1``; ``V2'`` keeps the vertices
    with at least ``p|V3'|/2`` neighbours in ``V3'``. For a middle vertex ``v``
    and a set ``U`` of its neighbours in ``V3'``, the first-third
    neighbourhoods of ``U`` all lie in the left union charged to ``v``, so
    ``sum d(u) - sum d(u, u')`` (Bonferroni) is a lower bound on ``p``. ``U``
    is grown greedily by marginal gain for the ``max_candidates`` middle
    vertices with most ``V3'`` neighbours, and the best bound is returned
    (0 when nothing qualifies).
    """
    if not isinstance(ordering, VertexOrdering):
        ordering = VertexOrdering(ordering)
    n = G.n
    if n < 3 or G.m == 0:
        return 0
    if p is None:
        p = G.m / (n * (n - 1) / 2)
    order = np.array(ordering.order, dtype=np.int64)
    a, b = n // 3, (2 * n) // 3
    V1, V2, V3 = order[:a], order[a:b], order[b:]
    M = G.to_scipy().tocsr()
    in_v1 = np.zeros(n, dtype=bool)
    in_v1[V1] = True
    d3 = np.asarray(M[V3][:, in_v1].sum(axis=1)).ravel()
    V3p = V3[d3 >= p * len(V1) / 2]
    if V3p.size == 0:
        return 0
    in_v3p = np.zeros(n, dtype=bool)
    in_v3p[V3p] = True
    d2 = np.asarray(M[V2][:, in_v3p].sum(axis=1)).ravel()
    keep = d2 >= p * V3p.size / 2
    V2p, d2p = V2[keep], d2[keep]
    if V2p.size == 0:
        return 0
    rank = np.lexsort((V2p, -d2p))
    candidates = V2p[rank[:max_candidates]]
    B3 = M[V3p][:, in_v1]  # rows: V3' vertices, cols: V1
    row_of = {int(u): i for i, u in enumerate(V3p.tolist())}
    best = 0
    for v in candidates.tolist():
        U = [row_of[int(u)] for u in G.neighbors(v) if in_v3p[u]]
        if not U:
            continue
        sub = B3[U]
        deg = np.asarray(sub.sum(axis=1)).ravel()
        common = (sub @ sub.T).toarray()
        best = max(best, _greedy_bonferroni(deg, common))
    return int(best)


def _greedy_bonferroni(deg, common):
    k = deg.size
    marginal = deg.astype(np.int64).copy()
    chosen = np.zeros(k, dtype=bool)
    total = 0
    for _ in range(k):
        cand = np.where(chosen, np.iinfo(np.int64).min, marginal)
        j = int(np.argmax(cand))
        if cand[j] <= 0:
            break
        total += int(cand[j])
        chosen[j] = True
        marginal -= common[:, j].astype(np.int64)
    return total
