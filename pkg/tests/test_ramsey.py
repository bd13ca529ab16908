import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from sparse_ramsey.coloring import BLUE, RED, TwoColoring
from sparse_ramsey.embedding import validate_embedding
from sparse_ramsey.graph import build_graph, complete_graph, cycle_graph
from sparse_ramsey.ramsey import (
    PATTERNS,
    RamseyResult,
    Unknown,
    avoiding_coloring,
    find_mono_copy,
    mono_copies,
    pattern,
    ramsey_exact,
    ramsey_lower_search,
)

PENTAGON = TwoColoring.from_red_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


def small_patterns():
    """One labelled representative per isomorphism class, 2 to 4 vertices, at least one edge."""
    seen = set()
    out = []
    for k in (2, 3, 4):
        for edges in oracles.all_edge_sets(k):
            if not edges:
                continue
            key = min(
                tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges))
                for p in itertools.permutations(range(k))
            )
            if (k, key) not in seen:
                seen.add((k, key))
                out.append((k, edges))
    return out


# monochromatic copies ------------------------------------------------------------


def test_all_red_k6_has_red_triangle():
    emb = find_mono_copy(TwoColoring.monochromatic(6), pattern("k3"))
    assert emb.info["color"] == RED
    assert validate_embedding(emb.pattern, emb.host, emb.mapping) == []


def test_pentagon_avoids_triangles():
    assert find_mono_copy(PENTAGON, pattern("k3")) is None
    assert mono_copies(PENTAGON, pattern("k3")) == []
    assert not oracles.has_mono_copy(PENTAGON.to_bits(), 5, [(0, 1), (1, 2), (0, 2)], 3)


def test_single_vertex_pattern():
    assert find_mono_copy(TwoColoring.random(3, 1), build_graph(1, [])) is not None


def test_which_color_restricts_search():
    col = TwoColoring.monochromatic(4)
    assert find_mono_copy(col, pattern("k3"), which=BLUE) is None
    assert find_mono_copy(col, pattern("k3"), which=RED) is not None


@given(st.integers(2, 7), st.integers(0, 2 ** 32), st.sampled_from(sorted(PATTERNS)))
def test_find_copy_matches_bruteforce_and_is_swap_symmetric(N, seed, name):
    H = pattern(name)
    col = TwoColoring.random(N, seed)
    found = find_mono_copy(col, H)
    expected = H.n <= N and oracles.has_mono_copy(col.to_bits(), N, list(H.edges()), H.n)
    assert (found is not None) == expected
    assert (find_mono_copy(col.swapped(), H) is not None) == expected
    if found is not None:
        host = col.graph(found.info["color"])
        assert validate_embedding(H, host, found.mapping) == []


# exact values ------------------------------------------------------------------------


@pytest.mark.parametrize("name, value", [("k2", 2), ("p3", 3), ("p4", 5), ("2k2", 5), ("c4", 6),
                                         ("star3", 6), ("k3", 6), ("paw", 7)])
def test_known_values(name, value):
    H = pattern(name)
    r = ramsey_exact(H, N_max=7)
    assert isinstance(r, RamseyResult) and r.value == value
    if value > 1:
        w = r.lower_witness
        assert w.N == value - 1 and find_mono_copy(w, H) is None


def test_k3_witness_is_pentagon_like():
    w = ramsey_exact(pattern("k3")).lower_witness
    # the only triangle-free 2-colourings of K5 are a 5-cycle and its complement
    assert w.graph(RED).m == w.graph(BLUE).m == 5
    assert sorted(w.graph(RED).degrees.tolist()) == [2] * 5


def test_unknown_when_cap_too_low():
    u = ramsey_exact(pattern("k3"), N_max=5)
    assert isinstance(u, Unknown) and not u and u.N_max == 5
    assert find_mono_copy(u.witness, pattern("k3")) is None
    assert json.loads(u.to_json())["N_max"] == 5


def test_edgeless_pattern():
    r = ramsey_exact(build_graph(3, []))
    assert r.value == 3
    with pytest.raises(ValueError):
        ramsey_exact(build_graph(0, []))


@pytest.mark.parametrize("k, edges", small_patterns())
def test_matches_unpruned_oracle(k, edges):
    H = build_graph(k, edges)
    expected = oracles.ramsey_brute(edges, k, 6)
    r = ramsey_exact(H, N_max=6)
    if expected is None:
        assert isinstance(r, Unknown)
    else:
        assert r.value == expected
        if r.lower_witness is not None:
            assert not oracles.has_mono_copy(r.lower_witness.to_bits(), expected - 1, edges, k)


@pytest.mark.parametrize("name", ["p4", "c4", "star3"])
def test_symmetry_breaking_does_not_change_answer(name):
    H = pattern(name)
    for N in range(H.n, 7):
        a, _ = avoiding_coloring(H, N, symmetry=True)
        b, _ = avoiding_coloring(H, N, symmetry=False)
        assert (a is None) == (b is None)


def test_result_json():
    r = ramsey_exact(pattern("p3"))
    d = json.loads(r.to_json())
    assert d["value"] == 3 and TwoColoring.from_bits(2, d["lower_witness"]["bits"]).N == 2


# lower-bound search ------------------------------------------------------------------


def test_lower_search_k3():
    col = ramsey_lower_search(pattern("k3"), 5, seed=1)
    assert col is not None and find_mono_copy(col, pattern("k3")) is None
    assert ramsey_lower_search(pattern("k3"), 6, restarts=5, max_steps=100) is None


def test_lower_search_impossible_k2():
    assert ramsey_lower_search(pattern("k2"), 2) is None


def test_lower_search_never_beats_exact():
    for name in ("p3", "p4", "2k2", "c4"):
        H = pattern(name)
        r = ramsey_exact(H)
        assert ramsey_lower_search(H, r.value, restarts=5, max_steps=200, seed=3) is None
        if r.value - 1 >= H.n:
            col = ramsey_lower_search(H, r.value - 1, seed=3)
            assert col is None or find_mono_copy(col, H) is None


def test_pattern_lookup():
    assert pattern("c4") == cycle_graph(4)
    assert pattern("k4") == complete_graph(4)
    with pytest.raises(ValueError):
        pattern("k9")
