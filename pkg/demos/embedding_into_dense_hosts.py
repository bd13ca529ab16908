"""Greedy embeddings of a 2-degenerate pattern into a random tripartite host.

Every result is checked by the validator before it is reported.

Run: python3 demos/embedding_into_dense_hosts.py
"""

from fractions import Fraction

import numpy as np

from sparse_ramsey import (
    RandomGraphSpec,
    degeneracy_ordering,
    grr_greedy_embed,
    random_degenerate_graph,
    sample_gnp,
    validate_embedding,
)
from sparse_ramsey.embedding import greedy_coloring

H = random_degenerate_graph(50, 2, seed=0)
ordering, d = degeneracy_ordering(H)
coloring = greedy_coloring(H, ordering)
print(f"pattern: {H.n} vertices, {H.m} edges, degeneracy {d}, {max(coloring) + 1} colours")

for p in (0.5, 0.3, 0.1):
    G = sample_gnp(RandomGraphSpec(2000, p, seed=0))
    perm = np.random.default_rng(0).permutation(G.n)
    parts = [sorted(int(v) for v in perm[i::3]) for i in range(3)]
    out = grr_greedy_embed(H, G, parts, Fraction(1, 4), ordering, coloring)
    if out:
        problems = validate_embedding(H, G, out.mapping, parts, coloring)
        print(f"p={p}: embedded, validator problems: {len(problems)}")
    else:
        print(f"p={p}: stuck at step {out.step} ({out.reason})")
