"""Brute-force reference implementations, written straight from the definitions.

None of these import the search code they are used to check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def all_edge_sets(n):
    """Every labelled graph on ``n`` vertices as a list of edges."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield [pairs[i] for i in range(len(pairs)) if bits >> i & 1]


def adjacency_tensor(n):
    """Boolean array ``(2^C(n,2), n, n)`` with the adjacency matrix of every labelled graph."""
    pairs = list(itertools.combinations(range(n), 2))
    codes = np.arange(1 << len(pairs), dtype=np.int64)
    A = np.zeros((codes.size, n, n), dtype=bool)
    for i, (u, v) in enumerate(pairs):
        bit = (codes >> i) & 1 == 1
        A[:, u, v] = bit
        A[:, v, u] = bit
    return A


def min_back_degree_all_graphs(n):
    """For every labelled graph on ``n`` vertices, min over orderings of the max back degree."""
    A = adjacency_tensor(n)
    best = np.full(A.shape[0], n, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        P = A[:, perm][:, :, perm]
        back = np.tril(P, -1).sum(axis=2).max(axis=1)
        np.minimum(best, back, out=best)
    return best


def certificate(edges, n, order):
    """``(d, delta, p)`` for ``order``, computed from the definitions with Python sets."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    pos = {v: i for i, v in enumerate(order)}
    d = delta = p = 0
    for i, v in enumerate(order):
        L = set(order[: i + 1])
        d = max(d, sum(1 for u in adj[v] if pos[u] < i))
        right = [u for u in adj[v] if pos[u] > i]
        left_sets = {frozenset(adj[u] & L) for u in right}
        delta = max(delta, len(left_sets))
        union = set().union(*left_sets) if left_sets else set()
        p = max(p, len(union))
    return d, delta, p


def min_arrangeability(edges, n):
    return min(certificate(edges, n, order)[2] for order in itertools.permutations(range(n)))


def max_small_density(edges, n, cap):
    """Largest ``8 e(S) - 9 |S|`` over vertex sets with ``2 <= |S| <= cap`` (>= 0 means a violator)."""
    best = None
    eset = [tuple(e) for e in edges]
    for k in range(2, min(cap, n) + 1):
        for S in itertools.combinations(range(n), k):
            s = set(S)
            e = sum(1 for u, v in eset if u in s and v in s)
            val = 8 * e - 9 * k
            best = val if best is None else max(best, val)
    return best


def closure(adj, S):
    """Naive fixed point: add every outside vertex with two neighbours inside, repeat."""
    inside = set(S)
    changed = True
    while changed:
        changed = False
        for v in range(len(adj)):
            if v not in inside and len(adj[v] & inside) >= 2:
                inside.add(v)
                changed = True
    return inside


def copy_masks(pattern_edges, k, N):
    """Distinct pair-bitmasks of the copies of a ``k``-vertex pattern in ``K_N``."""
    index = {}
    for i, (u, v) in enumerate(itertools.combinations(range(N), 2)):
        index[(u, v)] = i
    out = set()
    for image in itertools.permutations(range(N), k):
        m = 0
        for a, b in pattern_edges:
            x, y = image[a], image[b]
            m |= 1 << index[(min(x, y), max(x, y))]
        out.add(m)
    return sorted(out)


def avoiding_colorings_exist(pattern_edges, k, N):
    """Whether some red/blue colouring of ``K_N`` has no monochromatic copy (no pruning)."""
    if k > N:
        return True
    M = N * (N - 1) // 2
    cols = np.arange(1 << M, dtype=np.int64)
    full = (1 << M) - 1
    bad = np.zeros(cols.size, dtype=bool)
    for m in copy_masks(pattern_edges, k, N):
        bad |= (cols & m) == m
        bad |= ((full ^ cols) & m) == m
    return bool((~bad).any())


def ramsey_brute(pattern_edges, k, N_max):
    for N in range(1, N_max + 1):
        if not avoiding_colorings_exist(pattern_edges, k, N):
            return N
    return None


def has_mono_copy(coloring_bits, N, pattern_edges, k):
    col = int(coloring_bits[::-1], 2) if coloring_bits else 0
    M = N * (N - 1) // 2
    full = (1 << M) - 1
    return any((col & m) == m or ((full ^ col) & m) == m for m in copy_masks(pattern_edges, k, N))


def common_count(adj, S, side):
    out = set(side)
    for s in S:
        out &= adj[s]
    return len(out)


def expected_common_size(deg_in_v1, N1, t):
    return sum((d / N1) ** (2 * t) for d in deg_in_v1)


def comb(n, k):
    return math.comb(n, k)


def embedding_problems(pattern_edges, host_edges, mapping, parts=None, coloring=None):
    """Injectivity, edge preservation and class placement, from edge lists only."""
    host = {frozenset(e) for e in host_edges}
    out = []
    if len(set(mapping.values())) != len(mapping):
        out.append("not injective")
    for u, v in pattern_edges:
        if u in mapping and v in mapping and frozenset((mapping[u], mapping[v])) not in host:
            out.append((u, v))
    if parts is not None:
        for a, b in mapping.items():
            if b not in set(parts[coloring[a]]):
                out.append(("class", a))
    return out
