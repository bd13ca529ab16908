"""Exact Ramsey numbers of the small built-in patterns, with a lower witness each.

Run: python3 demos/small_ramsey_numbers.py
"""

import time

from sparse_ramsey import RED, ramsey_exact
from sparse_ramsey.ramsey import PATTERNS, pattern

for name in sorted(PATTERNS):
    H = pattern(name)
    start = time.perf_counter()
    r = ramsey_exact(H, N_max=7)
    took = time.perf_counter() - start
    if not r:
        print(f"{name:6s} r > {r.N_max}  ({took:.2f}s)")
        continue
    w = r.lower_witness
    red = w.graph(RED).m if w is not None else 0
    size = w.N if w is not None else 0
    print(f"{name:6s} r = {r.value}  witness on K_{size} with {red} red edge(s)  ({took:.2f}s)")
