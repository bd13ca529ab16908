"""Dependent random choice, nested subsets and greedy embedders.

Host graphs are handled through per-vertex bitmasks (``Graph.masks``), so a
common neighbourhood is a chain of ``&`` operations and a set size is a
``bit_count``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .coloring import BLUE, RED, TwoColoring
from .graph import Graph, multi_density
from .sparseness import VertexOrdering, degeneracy_ordering, measure_certificate


def _mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _members(mask: int) -> list:
    return list(_bits(mask))


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class Embedding:
    mapping: dict  # pattern vertex -> host vertex
    pattern: Graph
    host: Graph
    info: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return True

    def pairs(self) -> list:
        return sorted(self.mapping.items())

    def to_json(self) -> str:
        return json.dumps([[int(a), int(b)] for a, b in self.pairs()])


@dataclass(frozen=True)
class EmbedFailure:
    """The greedy procedure found no admissible host vertex."""

    step: int  # 1-based position in the ordering
    vertex: int
    reason: str
    detail: dict = field(default_factory=dict)
    partial: dict = field(default_factory=dict)

    def __bool__(self):
        return False


def validate_embedding(H: Graph, G: Graph, mapping: dict, parts=None, coloring=None) -> list:
    """Problems found with ``mapping``; an empty list means it is valid.

    Checks injectivity and edge preservation for the mapped part of ``H``,
    and, when ``parts`` and ``coloring`` are given, that each pattern vertex
    lands in the part named by its colour.
    """
    problems = []
    images = list(mapping.values())
    if len(set(images)) != len(images):
        problems.append("not injective")
    for a, b in mapping.items():
        if not 0 <= a < H.n:
            problems.append(f"pattern vertex {a} out of range")
        if not 0 <= b < G.n:
            problems.append(f"host vertex {b} out of range")
    if problems:
        return problems
    for u, v in H.edges():
        if u in mapping and v in mapping and not G.has_edge(mapping[u], mapping[v]):
            problems.append(f"edge ({u}, {v}) maps to non-edge ({mapping[u]}, {mapping[v]})")
    if parts is not None and coloring is not None:
        for a, b in mapping.items():
            if b not in parts[coloring[a]]:
                problems.append(f"vertex {a} of class {coloring[a]} placed outside its part")
    return problems


# ---------------------------------------------------------------------------
# colourings of the pattern


def greedy_coloring(H: Graph, ordering=None) -> list:
    """First-fit colouring along ``ordering``; uses at most back-degree + 1 colours."""
    order = ordering.order if ordering is not None else range(H.n)
    color = [-1] * H.n
    for v in order:
        used = {color[u] for u in H.adj[v]}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color


def proper_coloring(H: Graph, q: int) -> Optional[list]:
    """A proper colouring with colours ``0..q-1`` found by backtracking, or None."""
    if H.n == 0:
        return []
    if q < 1:
        return None
    ordering, _ = degeneracy_ordering(H)
    quick = greedy_coloring(H, ordering)
    if max(quick) < q:
        return quick
    # most constrained vertices first
    order = sorted(range(H.n), key=lambda v: (-H.degree(v), v))
    color = [-1] * H.n
    adj = H.adj

    def extend(i, top):
        if i == len(order):
            return True
        v = order[i]
        used = {color[u] for u in adj[v]}
        # new colours are interchangeable, so only the first unused one is tried
        for c in range(min(q, top + 2)):
            if c not in used:
                color[v] = c
                if extend(i + 1, max(top, c)):
                    return True
        color[v] = -1
        return False

    return color if extend(0, -1) else None


def _check_coloring(H: Graph, coloring, q: int) -> list:
    coloring = [int(c) for c in coloring]
    if len(coloring) != H.n:
        raise ValueError("colouring must assign a class to every pattern vertex")
    if any(not 0 <= c < q for c in coloring):
        raise ValueError(f"colour classes must lie in 0..{q - 1}")
    for u, v in H.edges():
        if coloring[u] == coloring[v]:
            raise ValueError(f"colouring is not proper on edge ({u}, {v})")
    return coloring


def _check_parts(G: Graph, parts) -> list:
    parts = [frozenset(int(v) for v in P) for P in parts]
    if not parts:
        raise ValueError("need at least one part")
    seen = set()
    for P in parts:
        if not P:
            raise ValueError("parts must be nonempty")
        if any(not 0 <= v < G.n for v in P):
            raise ValueError("part contains a vertex outside the host")
        if seen & P:
            raise ValueError("parts must be disjoint")
        seen |= P
    return parts


def _prepare(H: Graph, G: Graph, parts, ordering, coloring):
    parts = _check_parts(G, parts)
    q = len(parts)
    if ordering is None:
        ordering, _ = degeneracy_ordering(H)
    elif not isinstance(ordering, VertexOrdering):
        ordering = VertexOrdering(ordering)
    if len(ordering) != H.n:
        raise ValueError("ordering does not match the pattern")
    if coloring is None:
        coloring = proper_coloring(H, q)
        if coloring is None:
            raise ValueError(f"pattern has no proper {q}-colouring")
    coloring = _check_coloring(H, coloring, q)
    return parts, ordering, coloring


def _later_neighbors(H: Graph, ordering: VertexOrdering):
    pos = ordering.position
    later = {v: [u for u in sorted(H.adj[v]) if pos[u] > pos[v]] for v in range(H.n)}
    earlier = {v: [u for u in sorted(H.adj[v]) if pos[u] < pos[v]] for v in range(H.n)}
    return earlier, later


# ---------------------------------------------------------------------------
# embedder driven by target sets


def grr_greedy_embed(H: Graph, G: Graph, parts, epsilon, ordering=None, coloring=None):
    """Embed ``H`` into ``G`` keeping every pending target set ``epsilon``-dense.

    Each pattern vertex ``v`` carries a target set, initially the host part
    of its colour. When a vertex is placed at ``w``, the target sets of its
    later neighbours shrink to their intersection with ``N(w)``. The chosen
    ``w`` is the smallest unused vertex of the current target set keeping
    ``|N(w) & T| >= epsilon |T|`` for all those neighbours.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    parts, ordering, coloring = _prepare(H, G, parts, ordering, coloring)
    masks = G.masks
    part_masks = [_mask_of(P) for P in parts]
    target = {v: part_masks[coloring[v]] for v in range(H.n)}
    _, later = _later_neighbors(H, ordering)
    f = {}
    used = 0
    num, den = epsilon.numerator, epsilon.denominator
    for j, v in enumerate(ordering.order):
        need = [(u, target[u], num * target[u].bit_count()) for u in later[v]]
        chosen = None
        for w in _bits(target[v] & ~used):
            nw = masks[w]
            if all(den * (nw & T).bit_count() >= bound for _, T, bound in need):
                chosen = w
                break
        if chosen is None:
            detail = {
                "candidates": (target[v] & ~used).bit_count(),
                "constraints": {u: T.bit_count() for u, T, _ in need},
            }
            return EmbedFailure(j + 1, v, "no vertex keeps every target set dense", detail, dict(f))
        f[v] = chosen
        used |= 1 << chosen
        for u in later[v]:
            target[u] &= masks[chosen]
    return Embedding(f, H, G, {"parts": [sorted(P) for P in parts], "coloring": coloring})


# ---------------------------------------------------------------------------
# embedder driven by good sets


def goodset_greedy_embed(H: Graph, G: Graph, parts, x: int, d: int, ordering=None, coloring=None,
                         delta: Optional[int] = None, budget: int = 10 ** 7):
    """Embed ``H`` choosing images that keep every pending left set good.

    A ``d``-set ``S`` outside part ``i`` is bad for ``i`` when it has fewer
    than ``x`` common neighbours in part ``i``; a smaller set ``S`` is good
    for ``i`` when it lies in fewer than ``(2 delta)^(|S|-d) C(x, d-|S|)``
    bad ``d``-sets. Bad sets are enumerated exactly, so the instance must
    satisfy ``C(|union of parts|, d) <= budget``.

    When the counting hypotheses hold (every part has at least ``x >= 4n``
    vertices and the empty set is good for every part) the number of
    admissible images at step ``h`` is asserted to be at least
    ``x - k x / (2 delta) - (h - 1)``, where ``k`` counts the distinct
    pending (left set, class) pairs.
    """
    if d < 1 or x < 1:
        raise ValueError("d and x must be positive")
    parts, ordering, coloring = _prepare(H, G, parts, ordering, coloring)
    union = set().union(*parts)
    if math.comb(len(union), d) > budget:
        raise ValueError(
            f"C({len(union)}, {d}) exceeds the exact-count budget {budget}; use grr_greedy_embed instead"
        )
    cert = measure_certificate(H, ordering)
    if cert.d > d:
        raise ValueError(f"ordering has back degree {cert.d} > d={d}")
    if delta is None:
        delta = max(cert.delta, 1)
    q = len(parts)
    masks = G.masks
    part_masks = [_mask_of(P) for P in parts]
    bad = []
    for i in range(q):
        outside = sorted(union - parts[i])
        bad_i = []
        for S in itertools.combinations(outside, d):
            common = part_masks[i]
            for s in S:
                common &= masks[s]
            if common.bit_count() < x:
                bad_i.append(_mask_of(S))
        bad.append(bad_i)

    def good(S: int, i: int) -> bool:
        k = S.bit_count()
        if k > d:
            return False
        if k == d:
            common = part_masks[i]
            for s in _bits(S):
                common &= masks[s]
            return common.bit_count() >= x
        contained = sum(1 for b in bad[i] if b & S == S)
        # contained < (2 delta)^(k-d) C(x, d-k)
        return contained * (2 * delta) ** (d - k) < math.comb(x, d - k)

    n = H.n
    hypotheses = all(len(P) >= x >= 4 * n for P in parts) and all(good(0, i) for i in range(q))
    earlier, later = _later_neighbors(H, ordering)
    pos = ordering.position
    f = {}
    used = 0
    min_margin = None
    for h, v in enumerate(ordering.order):
        r = coloring[v]
        common = part_masks[r] & ~used
        for u in earlier[v]:
            common &= masks[f[u]]
        pending = set()
        for u in later[v]:
            left = _mask_of(f[w] for w in earlier[u] if pos[w] < h)
            pending.add((left, coloring[u]))
        admissible = [w for w in _bits(common) if all(good(S | (1 << w), i) for S, i in pending)]
        if hypotheses:
            floor = x - Fraction(len(pending) * x, 2 * delta) - h
            if len(admissible) < floor:
                raise AssertionError(
                    f"step {h + 1}: {len(admissible)} admissible images, counting argument promises {floor}"
                )
            margin = len(admissible) - floor
            min_margin = margin if min_margin is None else min(min_margin, margin)
        if not admissible:
            return EmbedFailure(h + 1, v, "no unused good common neighbour",
                                {"common": common.bit_count(), "pending": len(pending),
                                 "hypotheses": hypotheses}, dict(f))
        f[v] = admissible[0]
        used |= 1 << admissible[0]
    info = {"parts": [sorted(P) for P in parts], "coloring": coloring, "hypotheses": hypotheses,
            "bad_counts": [len(b) for b in bad], "delta": delta}
    if min_margin is not None:
        info["min_margin"] = min_margin
    return Embedding(f, H, G, info)


# ---------------------------------------------------------------------------
# embedder for nearly complete multipartite hosts


def multipartite_greedy_embed(H: Graph, G: Graph, parts, d: int, ordering=None, coloring=None):
    """Greedy embedding into a host whose parts are almost completely joined.

    Preconditions (checked, ``ValueError`` otherwise): the parts have equal
    size at least ``4 |V(H)|``, each host vertex misses at most
    ``|Y_i| / (2d)`` vertices of the other parts, and ``ordering`` has back
    degree at most ``d``. Under these the candidate count at step ``i`` is at
    least ``|Y| - d |Y| / (2d) - (i - 1) > n``, which is asserted.
    """
    if d < 1:
        raise ValueError("d must be positive")
    parts, ordering, coloring = _prepare(H, G, parts, ordering, coloring)
    n = H.n
    size = len(parts[0])
    if any(len(P) != size for P in parts):
        raise ValueError("parts must have equal size")
    if size < 4 * n:
        raise ValueError(f"parts have {size} < 4n = {4 * n} vertices")
    masks = G.masks
    part_masks = [_mask_of(P) for P in parts]
    everything = _mask_of(set().union(*parts))
    for i, P in enumerate(parts):
        others = everything & ~part_masks[i]
        for v in P:
            missing = (others & ~masks[v]).bit_count()
            if 2 * d * missing > size:
                raise ValueError(
                    f"host vertex {v} misses {missing} vertices of other parts, budget is {size}/(2*{d})"
                )
    cert = measure_certificate(H, ordering)
    if cert.d > d:
        raise ValueError(f"ordering has back degree {cert.d} > d={d}")
    earlier, _ = _later_neighbors(H, ordering)
    f = {}
    used = 0
    for i, v in enumerate(ordering.order):
        cand = part_masks[coloring[v]] & ~used
        for u in earlier[v]:
            cand &= masks[f[u]]
        available = cand.bit_count()
        floor = size - Fraction(len(earlier[v]) * size, 2 * d) - i
        assert available >= floor, f"step {i + 1}: {available} candidates, expected at least {floor}"
        assert size - Fraction(d * size, 2 * d) - i > n, f"step {i + 1}: candidate floor dropped to n"
        if not cand:
            return EmbedFailure(i + 1, v, "no candidate (should be impossible)", {}, dict(f))
        w = (cand & -cand).bit_length() - 1
        f[v] = w
        used |= 1 << w
    return Embedding(f, H, G, {"parts": [sorted(P) for P in parts], "coloring": coloring})


# ---------------------------------------------------------------------------
# dependent random choice


@dataclass(frozen=True)
class DrcParams:
    t: int
    x: int
    trials: int = 1

    def __post_init__(self):
        if self.t < 1 or self.x < 1 or self.trials < 1:
            raise ValueError("t, x and trials must all be at least 1")


@dataclass(frozen=True)
class DrcResult:
    A: frozenset
    bad_count: float  # exact integer when bad_exact, else an unbiased estimate
    bad_exact: bool
    bad_ci: Optional[tuple]  # 95% interval for a sampled estimate
    epsilon: Fraction
    expected_size: float  # E[X] = sum over V2 of (deg/N)^(2t)
    expected_bad: float
    expected_bad_exact: bool  # False when only the union bound was affordable
    trial_sizes: tuple
    best_trial: int
    score: float

    @property
    def mean_size(self) -> float:
        return float(np.mean(self.trial_sizes))

    def to_dict(self) -> dict:
        return {
            "A": sorted(self.A), "size": len(self.A), "bad_count": self.bad_count,
            "bad_exact": self.bad_exact, "bad_ci": self.bad_ci, "epsilon": str(self.epsilon),
            "expected_size": self.expected_size, "expected_bad": self.expected_bad,
            "mean_size": self.mean_size, "best_trial": self.best_trial, "trials": len(self.trial_sizes),
        }


def _count_bad(members: list, masks, side: int, t: int, x: int, rng, exact_budget: int, samples: int):
    """Number of t-subsets of ``members`` with fewer than ``x`` common neighbours in ``side``."""
    total = math.comb(len(members), t)
    if total == 0:
        return 0, True, None
    if total <= exact_budget:
        bad = 0
        for S in itertools.combinations(members, t):
            common = side
            for s in S:
                common &= masks[s]
            if common.bit_count() < x:
                bad += 1
        return bad, True, None
    hits = 0
    arr = np.asarray(members)
    for _ in range(samples):
        S = rng.choice(arr, size=t, replace=False)
        common = side
        for s in S:
            common &= masks[int(s)]
        if common.bit_count() < x:
            hits += 1
    phat = hits / samples
    half = 1.96 * math.sqrt(max(phat * (1 - phat), 1e-12) / samples)
    return phat * total, False, (max(phat - half, 0.0) * total, min(phat + half, 1.0) * total)


def _drc(masks, V1: list, V2: list, t: int, x: int, trials: int, rng, exact_budget: int, samples: int):
    N1, N2 = len(V1), len(V2)
    m1, m2 = _mask_of(V1), _mask_of(V2)
    deg2 = np.array([(masks[v] & m1).bit_count() for v in V2], dtype=float)
    e = int(deg2.sum())
    if e == 0:
        raise ValueError("no edges between the two sides (epsilon = 0)")
    epsilon = Fraction(e, N1 * N2)
    EX = float(np.sum((deg2 / N1) ** (2 * t)))
    if math.comb(N2, t) <= exact_budget:
        EY = 0.0
        for S in itertools.combinations(V2, t):
            common = m1
            for s in S:
                common &= masks[s]
            c = common.bit_count()
            if c < x:
                EY += (c / N1) ** (2 * t)
        EY_exact = True
    else:
        EY = math.comb(N2, t) * ((x - 1) / N1) ** (2 * t)
        EY_exact = False
    V1_arr = np.asarray(V1)
    best = None
    sizes = []
    for trial in range(trials):
        T = rng.choice(V1_arr, size=2 * t, replace=True)
        A = m2
        for s in T:
            A &= masks[int(s)]
        X = A.bit_count()
        sizes.append(X)
        members = _members(A)
        Y, exact, ci = _count_bad(members, masks, m1, t, x, rng, exact_budget, samples)
        score = X if EY == 0 else X - EX / (2 * EY) * Y
        if best is None or score > best[0]:
            best = (score, trial, A, Y, exact, ci)
    score, trial, A, Y, exact, ci = best
    return DrcResult(frozenset(_members(A)), Y, exact, ci, epsilon, EX, EY, EY_exact,
                     tuple(sizes), trial, float(score))


def dependent_random_choice(G: Graph, params: DrcParams, seed: int = 0, exact_budget: int = 10 ** 6,
                            samples: int = 20000) -> DrcResult:
    """Pick ``A`` as the common neighbourhood in ``V2`` of ``2t`` random vertices of ``V1``.

    Over ``params.trials`` draws the candidate maximising
    ``X - E[X] / (2 E[Y]) Y`` is kept, where ``X = |A|`` and ``Y`` counts
    ``t``-subsets of ``A`` with fewer than ``x`` common neighbours in ``V1``.
    ``Y`` is exact when ``C(|A|, t) <= exact_budget`` and estimated from
    ``samples`` random subsets otherwise.
    """
    if G.bipartition is None:
        raise ValueError("dependent random choice needs a bipartite graph")
    V1 = sorted(G.bipartition[0])
    V2 = sorted(G.bipartition[1])
    if len(V1) != len(V2):
        raise ValueError("the two sides must have equal size")
    rng = np.random.default_rng(seed)
    return _drc(G.masks, V1, V2, params.t, params.x, params.trials, rng, exact_budget, samples)


# ---------------------------------------------------------------------------
# nested subsets in a 2-coloured complete graph


@dataclass(frozen=True)
class NestedResult:
    color: str
    chain: tuple  # A_1 <= ... <= A_q as frozensets
    round_colors: tuple
    rounds: tuple  # per round: dict of sizes and bad t-set counts
    achieved: tuple  # per level i < q: dict(size, bad, exact)
    size_floor: Fraction  # 2^(-4tq) N

    def to_dict(self) -> dict:
        return {
            "color": self.color,
            "chain": [sorted(A) for A in self.chain],
            "round_colors": list(self.round_colors),
            "rounds": list(self.rounds),
            "achieved": list(self.achieved),
            "size_floor": str(self.size_floor),
        }


def nested_subsets(coloring: TwoColoring, q: int, t: int, y: int, seed: int = 0, trials: int = 32,
                   exact_budget: int = 10 ** 6, samples: int = 20000) -> NestedResult:
    """Nested vertex sets ``A_1 <= ... <= A_q`` in one colour of ``coloring``.

    Runs ``2q - 3`` halving rounds. In each, the current set is shuffled and
    split by parity into halves of equal size, the colour with more edges
    between the halves is picked, and dependent random choice in that colour
    (with ``x = y``) extracts the next set from the second half. A colour used
    in at least ``q - 1`` rounds then yields the chain, with ``A_q`` the full
    vertex set.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if t < q:
        raise ValueError("t must be at least q")
    if y < 1:
        raise ValueError("y must be positive")
    N = coloring.N
    R = 2 * q - 3
    if N < 2 ** R:
        raise ValueError(f"N={N} is too small to halve {R} times")
    rng = np.random.default_rng(seed)
    color_masks = {RED: coloring.masks(RED), BLUE: coloring.masks(BLUE)}
    B = [list(range(N))]
    colors = []
    rounds = []
    for _ in range(R):
        cur = B[-1]
        k = len(cur) // 2
        if k == 0:
            colors.append(RED)
            B.append([])
            rounds.append({"size": 0, "bad": 0, "exact": True, "note": "exhausted"})
            continue
        perm = rng.permutation(cur)
        half1 = sorted(int(v) for v in perm[0:2 * k:2])
        half2 = sorted(int(v) for v in perm[1:2 * k:2])
        h2 = _mask_of(half2)
        red = sum((color_masks[RED][u] & h2).bit_count() for u in half1)
        c = RED if 2 * red >= k * k else BLUE
        masks = color_masks[c]
        res = _drc(masks, half1, half2, t, y, trials, rng, exact_budget, samples)
        nxt = sorted(res.A)
        bad, exact, _ = _count_bad(nxt, masks, _mask_of(cur), t, y, rng, exact_budget, samples)
        colors.append(c)
        B.append(nxt)
        rounds.append({"size": len(nxt), "bad": bad, "exact": exact})
    popular = RED if colors.count(RED) >= q - 1 else BLUE
    hits = [i for i, c in enumerate(colors) if c == popular][: q - 1]
    chain = [None] * q
    chain[q - 1] = frozenset(B[0])
    for j, i in enumerate(hits, start=1):
        chain[q - 1 - j] = frozenset(B[i + 1])
    masks = color_masks[popular]
    achieved = []
    for i in range(q - 1):
        bad, exact, _ = _count_bad(sorted(chain[i]), masks, _mask_of(chain[i + 1]), t, y, rng,
                                   exact_budget, samples)
        achieved.append({"size": len(chain[i]), "bad": bad, "exact": exact})
    return NestedResult(popular, tuple(chain), tuple(colors), tuple(rounds), tuple(achieved),
                        Fraction(N, 2 ** (4 * t * q)))


# ---------------------------------------------------------------------------
# sparsity parameters


@dataclass(frozen=True)
class SparsityParams:
    alpha: Fraction
    rho: Fraction
    epsilon: Fraction
    t: int
    vacuous: bool = False  # alpha > 1: no subset is large enough, so the property holds trivially

    def __post_init__(self):
        for name in ("alpha", "rho", "epsilon"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if not 0 < self.rho <= 1:
            raise ValueError("rho must lie in (0, 1]")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.t < 2:
            raise ValueError("t must be at least 2")
        object.__setattr__(self, "vacuous", self.alpha > 1)


def sparsity_transform(params: SparsityParams, h: int) -> SparsityParams:
    """Parameters inherited by ``2^h`` parts from a two-part sparsity guarantee.

    ``(alpha, rho, eps, 2)`` becomes
    ``((2/rho)^(h-1) alpha, 2^(1-h) rho^h, 4 eps, 2^h)``.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    if params.t != 2:
        raise ValueError("the transform starts from t = 2")
    rho = params.rho
    return SparsityParams(
        alpha=(2 / rho) ** (h - 1) * params.alpha,
        rho=Fraction(2) ** (1 - h) * rho ** h,
        epsilon=4 * params.epsilon,
        t=2 ** h,
    )


@dataclass(frozen=True)
class SparseCheck:
    sparse: bool
    violating: Optional[frozenset]  # a U with no witness found
    witnesses: dict  # U -> tuple of t parts
    inspected: int
    exhaustive: bool  # every large U was inspected
    certain: bool  # every negative search was exact

    def __bool__(self):
        return self.sparse


def _cross_edges(masks, parts_masks):
    total = 0
    for a, b in itertools.combinations(parts_masks, 2):
        total += sum((masks[v] & b).bit_count() for v in _bits(a))
    return total


def _exact_pair(masks, U: list, s: int, limit: int):
    """Minimum ``e(W1, W2)`` over disjoint ``s``-sets of ``U``, or None if too many pairs."""
    n = len(U)
    if 2 * s > n:
        return None, True
    count = math.comb(n, s) * math.comb(n - s, s) // 2
    if count > limit:
        return None, False
    best = None
    for W1 in itertools.combinations(U, s):
        m1 = _mask_of(W1)
        rest = [u for u in U if u not in W1 and u > W1[0]]
        for W2 in itertools.combinations(rest, s):
            m2 = _mask_of(W2)
            e = sum((masks[v] & m2).bit_count() for v in W1)
            if best is None or e < best[0]:
                best = (e, (frozenset(W1), frozenset(W2)))
                if e == 0:
                    return best, True
    return best, True


def _heuristic_parts(masks, U: list, s: int, t: int, rng):
    """Greedy assignment followed by swap-based local search on cross edges."""
    if t * s > len(U):
        return None
    Um = _mask_of(U)
    order = sorted(U, key=lambda v: ((masks[v] & Um).bit_count(), v))
    groups = [[] for _ in range(t)]
    pm = [0] * t
    pool = list(order)
    for _ in range(s):
        for g in range(t):
            others = 0
            for h in range(t):
                if h != g:
                    others |= pm[h]
            v = min(pool, key=lambda u: ((masks[u] & others).bit_count(), (masks[u] & Um).bit_count(), u))
            pool.remove(v)
            groups[g].append(v)
            pm[g] |= 1 << v

    def cost_of(v, g):
        return sum((masks[v] & pm[h]).bit_count() for h in range(t) if h != g)

    improved = True
    rounds = 0
    while improved and rounds < 50:
        improved = False
        rounds += 1
        for g in range(t):
            for idx, v in enumerate(list(groups[g])):
                cv = cost_of(v, g)
                if cv == 0:
                    continue
                # swap with an unused vertex
                for u in pool:
                    if cost_of(u, g) < cv:
                        pool.remove(u)
                        pool.append(v)
                        groups[g][idx] = u
                        pm[g] = (pm[g] & ~(1 << v)) | (1 << u)
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
        if not improved:
            # swap across two groups
            for g, h in itertools.combinations(range(t), 2):
                base = _cross_edges(masks, pm)
                for a_i, a in enumerate(groups[g]):
                    for b_i, b in enumerate(groups[h]):
                        trial = list(pm)
                        trial[g] = (trial[g] & ~(1 << a)) | (1 << b)
                        trial[h] = (trial[h] & ~(1 << b)) | (1 << a)
                        if _cross_edges(masks, trial) < base:
                            groups[g][a_i], groups[h][b_i] = b, a
                            pm = trial
                            improved = True
                            break
                    if improved:
                        break
                if improved:
                    break
    return _cross_edges(masks, pm), tuple(frozenset(g) for g in groups)


def check_sparse(G: Graph, params: SparsityParams, samples: Optional[int] = None, seed: int = 0,
                 exact_limit: int = 200000) -> SparseCheck:
    """Test the sparsity property on every (or on ``samples`` random) large vertex set ``U``.

    For each ``U`` with ``|U| >= alpha n`` the search looks for ``t``
    disjoint parts of size ``ceil(rho |U|)`` whose multi-part density is at
    most ``epsilon``: exactly for ``t = 2`` when the number of part pairs is
    below ``exact_limit``, otherwise greedily with local search. Exhaustive
    inspection of all ``U`` is used when ``n <= 18`` and ``samples`` is None.
    """
    n = G.n
    rng = np.random.default_rng(seed)
    masks = G.masks
    min_size = math.ceil(params.alpha * n)
    t = params.t
    if samples is None and n > 18:
        raise ValueError("exhaustive mode is limited to n <= 18; pass samples for sampled mode")
    if min_size > n:
        return SparseCheck(True, None, {}, 0, True, True)
    if samples is None:
        candidates = (
            list(U) for k in range(n, max(min_size, 1) - 1, -1) for U in itertools.combinations(range(n), k)
        )
        exhaustive = True
    else:
        def sampled():
            for _ in range(samples):
                k = int(rng.integers(max(min_size, 1), n + 1))
                yield sorted(int(v) for v in rng.choice(n, size=k, replace=False))
        candidates = sampled()
        exhaustive = False
    witnesses = {}
    inspected = 0
    certain = True
    for U in candidates:
        inspected += 1
        s = math.ceil(params.rho * len(U))
        found = None
        exact = False
        if t * s <= len(U):
            if t == 2:
                best, exact = _exact_pair(masks, U, s, exact_limit)
                if best is not None:
                    found = best
            if found is None and not exact:
                found = _heuristic_parts(masks, U, s, t, rng)
        else:
            exact = True
        if found is not None:
            e, parts = found
            if Fraction(e, math.comb(t, 2) * s * s) <= params.epsilon:
                witnesses[frozenset(U)] = parts
                continue
        certain = certain and exact
        return SparseCheck(False, frozenset(U), witnesses, inspected, exhaustive, certain)
    return SparseCheck(True, None, witnesses, inspected, exhaustive, certain)


def witness_density(G: Graph, parts) -> Fraction:
    return multi_density(G, parts).multi_density
