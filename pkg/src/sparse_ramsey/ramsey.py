"""Monochromatic copies and exact Ramsey numbers of small patterns."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .coloring import BLUE, RED, TwoColoring
from .embedding import Embedding
from .graph import Graph, build_graph


def _pattern_order(H: Graph) -> list:
    """Pattern vertices ordered so that each one has as many placed neighbours as possible."""
    adj = H.adj
    remaining = set(range(H.n))
    order = []
    while remaining:
        placed = set(order)
        v = min(remaining, key=lambda u: (-len(adj[u] & placed), -len(adj[u]), u))
        order.append(v)
        remaining.discard(v)
    return order


def _search(masks, N: int, H: Graph, order: list, fixed: Optional[dict] = None):
    """Injective maps of ``H`` into the graph given by ``masks`` (backtracking).

    ``fixed`` pre-assigns some pattern vertices. Yields mapping dicts.
    """
    adj = H.adj
    f = dict(fixed or {})
    used = 0
    for w in f.values():
        used |= 1 << w
    for a in f:
        for b in adj[a]:
            if b in f and not (masks[f[a]] >> f[b]) & 1:
                return
    todo = [v for v in order if v not in f]
    back = [[u for u in adj[v] if u in f or u in todo[:i]] for i, v in enumerate(todo)]
    full = (1 << N) - 1

    def extend(i, used):
        if i == len(todo):
            yield dict(f)
            return
        cand = full & ~used
        for u in back[i]:
            cand &= masks[f[u]]
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            f[todo[i]] = w
            yield from extend(i + 1, used | low)
            cand ^= low
        f.pop(todo[i], None)

    yield from extend(0, used)


def find_mono_copy(coloring: TwoColoring, H: Graph, which: str = "both") -> Optional[Embedding]:
    """A copy of ``H`` inside one colour class, or None after exhausting the search.

    ``which`` is ``"red"``, ``"blue"`` or ``"both"`` (red is tried first).
    The returned embedding's host is the graph of the colour it was found in.
    """
    colors = {"red": [RED], "blue": [BLUE], "both": [RED, BLUE]}[which]
    order = _pattern_order(H)
    for c in colors:
        masks = coloring.masks(c)
        for mapping in _search(masks, coloring.N, H, order):
            return Embedding(mapping, H, coloring.graph(c), {"color": c})
    return None


def mono_copies(coloring: TwoColoring, H: Graph) -> list:
    """Every monochromatic copy of ``H`` as ``(color, frozenset of host edges)``, without repeats."""
    order = _pattern_order(H)
    edges = H.edges()
    out = []
    for c in (RED, BLUE):
        seen = set()
        for mapping in _search(coloring.masks(c), coloring.N, H, order):
            key = frozenset((min(mapping[a], mapping[b]), max(mapping[a], mapping[b])) for a, b in edges)
            if key not in seen:
                seen.add(key)
                out.append((c, key))
    return out


@dataclass(frozen=True)
class RamseyResult:
    value: int
    lower_witness: TwoColoring  # colouring of K_{value-1} without a monochromatic copy
    upper_certificate: dict = field(default_factory=dict)  # search statistics at N = value

    def to_json(self) -> str:
        return json.dumps({
            "value": self.value,
            "lower_witness": {"N": self.lower_witness.N, "bits": self.lower_witness.to_bits()},
            "upper_certificate": self.upper_certificate,
        })


@dataclass(frozen=True)
class Unknown:
    """The search cap was reached before the Ramsey number was determined."""

    N_max: int
    witness: Optional[TwoColoring] = None  # avoiding colouring at N_max, if one was found

    def __bool__(self):
        return False

    def to_json(self) -> str:
        doc = {"value": None, "N_max": self.N_max}
        if self.witness is not None:
            doc["lower_witness"] = {"N": self.witness.N, "bits": self.witness.to_bits()}
        return json.dumps(doc)


def avoiding_coloring(H: Graph, N: int, symmetry: bool = True):
    """Search for a colouring of ``K_N`` with no monochromatic ``H``.

    Returns ``(coloring or None, stats)``. Edges are coloured in
    lexicographic pair order; after each assignment the search looks for a
    copy through the new edge in its colour and backtracks if one exists.
    With ``symmetry`` the colours on the edges at vertex 0 are taken red
    first and then blue (vertices 1..N-1 can be relabelled to achieve this),
    and at least half of them red (colours can be swapped).
    """
    stats = {"N": N, "nodes": 0, "symmetry": symmetry}
    if N < 1:
        raise ValueError("N must be positive")
    if H.n > N:
        return TwoColoring.monochromatic(N), stats
    if H.m == 0:
        return None, stats  # an edgeless pattern with n <= N always appears
    pairs = [(u, v) for u in range(N) for v in range(u + 1, N)]
    order = _pattern_order(H)
    h_edges = [(a, b) for a, b in H.edges()] + [(b, a) for a, b in H.edges()]
    red = [0] * N
    blue = [0] * N
    min_red0 = N // 2  # ceil((N - 1) / 2)

    def closes_copy(masks, u, v):
        for a, b in h_edges:
            for _ in _search(masks, N, H, order, fixed={a: u, b: v}):
                return True
        return False

    def dfs(e):
        stats["nodes"] += 1
        if e == len(pairs):
            return True
        u, v = pairs[e]
        options = (RED, BLUE)
        if symmetry and u == 0:
            reds0 = (red[0] & ((1 << v) - 1)).bit_count()
            options = []
            if reds0 == v - 1:  # no blue edge at vertex 0 yet
                options.append(RED)
            if reds0 >= min_red0:  # the rest of vertex 0's edges may all be blue
                options.append(BLUE)
        for c in options:
            masks = red if c == RED else blue
            masks[u] |= 1 << v
            masks[v] |= 1 << u
            if not closes_copy(masks, u, v) and dfs(e + 1):
                return True
            masks[u] &= ~(1 << v)
            masks[v] &= ~(1 << u)
        return False

    if dfs(0):
        return TwoColoring(N, red), stats
    return None, stats


def ramsey_exact(H: Graph, N_max: int = 8, symmetry: bool = True):
    """Least ``N <= N_max`` such that every colouring of ``K_N`` has a monochromatic ``H``.

    Returns a :class:`RamseyResult`, or :class:`Unknown` when every
    ``N <= N_max`` admits an avoiding colouring.
    """
    if H.n == 0:
        raise ValueError("empty pattern")
    if H.m == 0:
        return RamseyResult(H.n, TwoColoring.monochromatic(H.n - 1),
                            {"N": H.n, "nodes": 0, "reason": "edgeless pattern"})
    last = None
    for N in range(1, N_max + 1):
        col, stats = avoiding_coloring(H, N, symmetry)
        if col is None:
            return RamseyResult(N, last, stats)
        last = col
    return Unknown(N_max, last)


def ramsey_lower_search(H: Graph, N: int, restarts: int = 20, seed: int = 0,
                        max_steps: int = 500) -> Optional[TwoColoring]:
    """Random restarts plus local search for a colouring of ``K_N`` with no monochromatic ``H``.

    Each step flips the edge lying in the most monochromatic copies (ties
    broken at random). A returned colouring has been checked with
    :func:`find_mono_copy`; None means nothing was found within budget.
    """
    if H.n > N:
        return TwoColoring.monochromatic(N)
    if H.m == 0 or N < 2:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        col = TwoColoring.random(N, seed=int(rng.integers(2 ** 63)))
        red = list(col.red)
        for _ in range(max_steps):
            cur = TwoColoring(N, red)
            copies = mono_copies(cur, H)
            if not copies:
                if find_mono_copy(cur, H) is None:
                    return cur
                break
            counts = {}
            for _, edges in copies:
                for e in edges:
                    counts[e] = counts.get(e, 0) + 1
            top = max(counts.values())
            choices = sorted(e for e, k in counts.items() if k == top)
            u, v = choices[int(rng.integers(len(choices)))]
            red[u] ^= 1 << v
            red[v] ^= 1 << u
    return None


PATTERNS = {
    "k2": lambda: build_graph(2, [(0, 1)]),
    "k3": lambda: build_graph(3, [(0, 1), (1, 2), (0, 2)]),
    "k4": lambda: build_graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)]),
    "p3": lambda: build_graph(3, [(0, 1), (1, 2)]),
    "p4": lambda: build_graph(4, [(0, 1), (1, 2), (2, 3)]),
    "c4": lambda: build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "star3": lambda: build_graph(4, [(0, 1), (0, 2), (0, 3)]),
    "paw": lambda: build_graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)]),
    "2k2": lambda: build_graph(4, [(0, 1), (2, 3)]),
}


def pattern(name: str) -> Graph:
    try:
        return PATTERNS[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown pattern {name!r}; known: {', '.join(sorted(PATTERNS))}") from None
