"""Acceptance suite: one test per criterion, each reporting a single pass/fail line.

Reference values come from the brute-force helpers in ``oracles`` wherever a
definition can be checked directly. The lines are collected by the
``acceptance`` fixture and printed in the terminal summary.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from sparse_ramsey.bounds import ramsey_bound_grr
from sparse_ramsey.embedding import (
    DrcParams,
    SparsityParams,
    dependent_random_choice,
    goodset_greedy_embed,
    greedy_coloring,
    grr_greedy_embed,
    multipartite_greedy_embed,
    proper_coloring,
    sparsity_transform,
    validate_embedding,
)
from sparse_ramsey.coloring import TwoColoring
from sparse_ramsey.graph import build_graph, complete_multipartite
from sparse_ramsey.ramsey import RamseyResult, find_mono_copy, pattern, ramsey_exact
from sparse_ramsey.random_graphs import (
    RandomGraphSpec,
    closure_F,
    cool_ordering,
    count_k23_pairs,
    random_degenerate_graph,
    sample_gnp,
)
from sparse_ramsey.sparseness import (
    degeneracy_ordering,
    find_light_vertex,
    measure_certificate,
    peel_ordering,
    random_ordering,
)

pytestmark = pytest.mark.acceptance


def random_small_graph(rng, n_max, p_max):
    n = int(rng.integers(1, n_max + 1))
    return sample_gnp(RandomGraphSpec(n, float(rng.uniform(0, p_max)), int(rng.integers(2 ** 63))))


def equal_parts(n, q, seed):
    perm = np.random.default_rng(seed).permutation(n)
    return [sorted(int(v) for v in perm[i::q]) for i in range(q)]


# 1 ------------------------------------------------------------------------------------------


def test_c01_degeneracy_matches_brute_force(acceptance):
    start = time.perf_counter()
    expected = oracles.min_back_degree_all_graphs(6)
    pairs = list(itertools.combinations(range(6), 2))
    mismatches = 0
    for code in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if code >> i & 1]
        ordering, d = degeneracy_ordering(build_graph(6, edges))
        back = oracles.certificate(edges, 6, ordering.order)[0]
        if d != expected[code] or back != d:
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 300
    acceptance(1, ok, f"{len(expected)} graphs on 6 vertices, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


# 2 ------------------------------------------------------------------------------------------


def light_vertex_ok(edges, n, w):
    """Check a light-vertex witness against the edge list alone."""
    nbrs = {u for e in edges for u in e if w.vertex in e and u != w.vertex}
    if set(w.neighbors) != nbrs:
        return False
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    if w.kind == "degree-at-most-one":
        return deg[w.vertex] <= 1
    return deg[w.vertex] == 2 and all(deg[u] == 2 for u in nbrs)


def test_c02_light_vertex_exhaustive(acceptance):
    checked = failures = 0
    for n in range(1, 7):
        for edges in oracles.all_edge_sets(n):
            if 8 * len(edges) >= 9 * n:
                continue
            checked += 1
            w = find_light_vertex(build_graph(n, edges))
            if w is None or not light_vertex_ok(edges, n, w):
                failures += 1
    ok = failures == 0
    acceptance(2, ok, f"{checked} sparse graphs on <= 6 vertices, {failures} failures")
    assert ok


# 3 ------------------------------------------------------------------------------------------


def test_c03_peel_contract(acceptance):
    rng = np.random.default_rng(3)
    successes = violations = 0
    for _ in range(10_000):
        G = random_small_graph(rng, 40, 0.15)
        s, r = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        out = peel_ordering(G, s, r)
        if not out:
            continue
        successes += 1
        d, delta, _ = oracles.certificate(list(G.edges()), G.n, out.order)
        if d > s or delta > r + 1:
            violations += 1
    ok = violations == 0
    acceptance(3, ok, f"10000 graphs, {successes} successful peels, {violations} violations")
    assert ok


# 4 ------------------------------------------------------------------------------------------


def test_c04_conversions(acceptance):
    rng = np.random.default_rng(4)
    violations = disagreements = 0
    for _ in range(10_000):
        G = random_small_graph(rng, 30, 0.5)
        ordering = random_ordering(G.n, rng)
        d, delta, p = oracles.certificate(list(G.edges()), G.n, ordering.order)
        c = measure_certificate(G, ordering)
        if (c.d, c.delta, c.p) != (d, delta, p):
            disagreements += 1
        if d >= 1 and p > delta * (d - 1) + 1:
            violations += 1
        if d > p or (p >= 1 and delta > 2 ** (p - 1)):
            violations += 1
    ok = violations == 0 and disagreements == 0
    acceptance(4, ok, f"10000 orderings, {violations} violations, {disagreements} measurement mismatches")
    assert ok


# 5 ------------------------------------------------------------------------------------------


def test_c05_closure(acceptance):
    rng = np.random.default_rng(5)
    bad = 0
    for _ in range(1000):
        G = random_small_graph(rng, 40, 0.2)
        adj = [set(a) for a in G.adj]
        k = int(rng.integers(0, G.n + 1))
        S = rng.choice(G.n, size=k, replace=False).tolist()
        T = S + rng.choice(G.n, size=int(rng.integers(0, G.n + 1)), replace=False).tolist()
        F = closure_F(G, S).closure
        if F != oracles.closure(adj, S):
            bad += 1
        if closure_F(G, F).closure != F:  # idempotent
            bad += 1
        if not F <= closure_F(G, T).closure:  # monotone
            bad += 1
        if closure_F(G, S, shuffle_seed=int(rng.integers(2 ** 32))).closure != F:  # order free
            bad += 1
    small = []
    for seed in range(20):
        G = sample_gnp(RandomGraphSpec.from_d(100_000, 10, seed))
        S = np.random.default_rng([seed, 5]).choice(G.n, size=50, replace=False).tolist()
        small.append(len(closure_F(G, S).closure) <= 200)
    frac = sum(small) / len(small)
    ok = bad == 0 and frac >= 0.95
    acceptance(5, ok, f"1000 closure cases with {bad} property failures; |F(S)| <= 4|S| in {frac:.0%} of 20 seeds")
    assert ok


# 6 ------------------------------------------------------------------------------------------


def test_c06_cool_ordering(acceptance):
    passes, slowest = 0, 0.0
    for seed in range(20):
        G = sample_gnp(RandomGraphSpec.from_d(30_000, 10, seed))
        start = time.perf_counter()
        _, cert = cool_ordering(G, 10)
        slowest = max(slowest, time.perf_counter() - start)
        passes += cert.d <= 160 and cert.delta <= 160
    frac = passes / 20
    ok = frac >= 0.9 and slowest < 120
    acceptance(6, ok, f"d', delta' <= 160 in {frac:.0%} of 20 seeds, slowest seed {slowest:.1f}s")
    assert ok


# 7 ------------------------------------------------------------------------------------------


def test_c07_no_k23(acceptance):
    counts = [count_k23_pairs(sample_gnp(RandomGraphSpec.from_d(1_000_000, 5, seed))) for seed in range(20)]
    frac = sum(c == 0 for c in counts) / 20
    ok = frac >= 0.9
    acceptance(7, ok, f"no pair with 3 common neighbours in {frac:.0%} of 20 seeds (counts {sum(counts)} total)")
    assert ok


# 8 ------------------------------------------------------------------------------------------


def test_c08_drc_expectation(acceptance):
    G = sample_gnp(RandomGraphSpec(500, 0.5, 8, bipartite=True))
    res = dependent_random_choice(G, DrcParams(t=1, x=1, trials=200), seed=8)
    sizes = np.asarray(res.trial_sizes, dtype=float)
    eps = G.m / 500 ** 2
    target = 0.9 * eps ** 2 * 500
    tol = 3 * sizes.std(ddof=1) / math.sqrt(len(sizes))
    adj = [set(a) for a in G.adj]
    exact = oracles.expected_common_size([len(adj[v]) for v in range(500, 1000)], 500, 1)
    ok = len(sizes) == 200 and sizes.mean() >= target - tol and math.isclose(res.expected_size, exact)
    acceptance(8, ok, f"mean |N(T)| {sizes.mean():.1f} vs 0.9 eps^2 N = {target:.1f} (3 sigma {tol:.1f})")
    assert ok


# 9 ------------------------------------------------------------------------------------------


def embedding_corpus():
    """Embeddings from every embedder over a spread of hosts."""
    for seed in range(20):
        H = random_degenerate_graph(30, 2, seed)
        ordering, _ = degeneracy_ordering(H)
        col = greedy_coloring(H, ordering)
        q = max(col) + 1
        parts = equal_parts(600, q, seed)
        yield grr_greedy_embed(H, sample_gnp(RandomGraphSpec(600, 0.5, seed)), parts, Fraction(1, 4),
                               ordering, col), parts
    for seed in range(20):
        H = random_degenerate_graph(6, 2, seed)
        parts = equal_parts(120, 3, seed)
        yield goodset_greedy_embed(H, sample_gnp(RandomGraphSpec(120, 0.9, seed)), parts, x=24, d=2,
                                   coloring=proper_coloring(H, 3)), parts
    for seed in range(10):
        H = random_degenerate_graph(10, 2, seed)
        parts = [list(range(i * 40, (i + 1) * 40)) for i in range(3)]
        yield multipartite_greedy_embed(H, complete_multipartite([40] * 3), parts, d=2,
                                        coloring=proper_coloring(H, 3)), parts
    for seed, name in itertools.product(range(20), ("k3", "c4", "p4", "paw")):
        yield find_mono_copy(TwoColoring.random(7, seed), pattern(name)), None


def test_c09_embeddings_validate(acceptance):
    returned = invalid = 0
    for emb, parts in embedding_corpus():
        if not emb:
            continue
        returned += 1
        coloring = emb.info.get("coloring") if parts is not None else None
        problems = oracles.embedding_problems(list(emb.pattern.edges()), list(emb.host.edges()), emb.mapping,
                                              parts, coloring)
        problems += validate_embedding(emb.pattern, emb.host, emb.mapping, parts, coloring)
        if problems or sorted(emb.mapping) != list(range(emb.pattern.n)):
            invalid += 1
    ok = returned > 0 and invalid == 0
    acceptance(9, ok, f"{returned} returned embeddings, {invalid} rejected by the validators")
    assert ok


# 10 -----------------------------------------------------------------------------------------


def test_c10_grr_monte_carlo(acceptance):
    successes = 0
    for seed in range(20):
        H = random_degenerate_graph(50, 2, seed)
        ordering, _ = degeneracy_ordering(H)
        col = greedy_coloring(H, ordering)
        assert max(col) < 3
        G = sample_gnp(RandomGraphSpec(2000, 0.5, seed))
        parts = equal_parts(2000, 3, seed)
        emb = grr_greedy_embed(H, G, parts, Fraction(1, 4), ordering, col)
        if emb and oracles.embedding_problems(list(H.edges()), list(G.edges()), emb.mapping, parts, col) == []:
            successes += 1
    frac = successes / 20
    ok = frac >= 0.95
    acceptance(10, ok, f"valid embedding of a 50-vertex 2-degenerate H in {frac:.0%} of 20 seeds")
    assert ok


# 11 -----------------------------------------------------------------------------------------


def test_c11_ramsey_values(acceptance):
    details, ok = [], True
    for name, value in (("k2", 2), ("p4", 5), ("k3", 6)):
        H = pattern(name)
        edges = list(H.edges())
        brute = oracles.ramsey_brute(edges, H.n, 6)
        start = time.perf_counter()
        r = ramsey_exact(H, N_max=8)
        elapsed = time.perf_counter() - start
        good = brute == value and isinstance(r, RamseyResult) and r.value == value and elapsed < 600
        w = r.lower_witness if good else None
        if good and value > 1:
            good = w is not None and w.N == value - 1 and not oracles.has_mono_copy(w.to_bits(), w.N, edges, H.n)
        ok &= good
        details.append(f"r({name})={getattr(r, 'value', None)} in {elapsed:.2f}s")
    acceptance(11, ok, ", ".join(details))
    assert ok


# 12 -----------------------------------------------------------------------------------------


def test_c12_bounds_and_transform(acceptance):
    grr_ok = all(ramsey_bound_grr(2, 2, 2, n) == 2 ** 31 * n for n in (1, 2, 3, 10, 12345, 10 ** 30))
    rng = np.random.default_rng(12)
    identity_bad = compose_bad = 0

    def rational():
        den = int(rng.integers(1, 1000))
        return Fraction(int(rng.integers(1, den + 1)), den)

    for _ in range(1000):
        p = SparsityParams(rational(), rational(), rational(), 2)
        one = sparsity_transform(p, 1)
        if (one.alpha, one.rho) != (p.alpha, p.rho):
            identity_bad += 1
        h1, h2 = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        first = sparsity_transform(p, h1)
        again = sparsity_transform(SparsityParams(first.alpha, first.rho, first.epsilon, 2), h2)
        once = sparsity_transform(p, h1 * h2)
        if (again.alpha, again.rho) != (once.alpha, once.rho):
            compose_bad += 1
    ok = grr_ok and identity_bad == 0 and compose_bad == 0
    acceptance(12, ok, f"grr(2,2,2,n) exact: {grr_ok}; h=1 identity failures {identity_bad}; "
                       f"composition failures {compose_bad} of 1000")
    assert ok
