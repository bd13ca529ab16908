"""Compare the degeneracy ordering with the closure-based ordering on G(n, d/n).

Run: python3 demos/orderings_on_random_graphs.py [n] [d]
"""

import sys

from sparse_ramsey import RandomGraphSpec, cool_ordering, degeneracy_ordering, measure_certificate, sample_gnp


def main(n=20000, d=8):
    G = sample_gnp(RandomGraphSpec.from_d(n, d, seed=1))
    print(f"G({n}, {d}/{n}): {G.m} edges, max degree {int(G.degrees.max())}")

    order, k = degeneracy_ordering(G)
    cert = measure_certificate(G, order)
    print(f"degeneracy order: d={cert.d} Delta={cert.delta} p={cert.p}")

    _, cool = cool_ordering(G, d)
    meta = cool.metadata
    print(f"closure order:    d={cool.d} Delta={cool.delta} p={cool.p}")
    print(f"  {meta['high_degree']} vertices above degree {meta['threshold']}, closure of size {meta['closure_size']}")
    print(f"  both stay below 16d = {16 * d}: {max(cool.d, cool.delta) <= 16 * d}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:3]))
