"""Red/blue colourings of the edges of a complete graph."""

from __future__ import annotations

import json

import numpy as np

from .graph import Graph

RED, BLUE = "red", "blue"


def pair_index(u: int, v: int, N: int) -> int:
    """Position of the pair ``{u, v}`` in lexicographic order of ``K_N``'s pairs."""
    if u > v:
        u, v = v, u
    return u * N - u * (u + 1) // 2 + (v - u - 1)


class TwoColoring:
    """A 2-colouring of ``K_N`` stored as per-vertex red-neighbourhood bitmasks.

    Every pair that is not red is blue, so the colouring is total by construction.
    """

    __slots__ = ("N", "red")

    def __init__(self, N: int, red_masks):
        red_masks = tuple(int(m) for m in red_masks)
        if len(red_masks) != N:
            raise ValueError("need one mask per vertex")
        full = (1 << N) - 1
        for v, m in enumerate(red_masks):
            if m & ~full or (m >> v) & 1:
                raise ValueError(f"bad red mask at vertex {v}")
            for u in range(N):
                if (m >> u) & 1 and not (red_masks[u] >> v) & 1:
                    raise ValueError(f"asymmetric colour on pair ({u}, {v})")
        self.N = N
        self.red = red_masks

    @classmethod
    def from_red_edges(cls, N: int, red_edges) -> "TwoColoring":
        masks = [0] * N
        for u, v in red_edges:
            if u == v or not (0 <= u < N and 0 <= v < N):
                raise ValueError(f"bad pair ({u}, {v})")
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return cls(N, masks)

    @classmethod
    def from_bits(cls, N: int, bits: str) -> "TwoColoring":
        """Inverse of :meth:`to_bits`: one character per pair, ``1`` meaning red."""
        pairs = [(u, v) for u in range(N) for v in range(u + 1, N)]
        if len(bits) != len(pairs) or set(bits) - {"0", "1"}:
            raise ValueError(f"expected {len(pairs)} binary digits")
        return cls.from_red_edges(N, [e for e, b in zip(pairs, bits) if b == "1"])

    @classmethod
    def random(cls, N: int, seed: int = 0, p_red: float = 0.5) -> "TwoColoring":
        rng = np.random.default_rng(seed)
        pairs = [(u, v) for u in range(N) for v in range(u + 1, N)]
        flips = rng.random(len(pairs)) < p_red
        return cls.from_red_edges(N, [e for e, f in zip(pairs, flips) if f])

    @classmethod
    def monochromatic(cls, N: int, color: str = RED) -> "TwoColoring":
        full = (1 << N) - 1
        if color == RED:
            return cls(N, [full & ~(1 << v) for v in range(N)])
        return cls(N, [0] * N)

    def color(self, u: int, v: int) -> str:
        return RED if (self.red[u] >> v) & 1 else BLUE

    def masks(self, color: str) -> tuple:
        if color == RED:
            return self.red
        full = (1 << self.N) - 1
        return tuple(full & ~m & ~(1 << v) for v, m in enumerate(self.red))

    def graph(self, color: str) -> Graph:
        masks = self.masks(color)
        edges = [(u, v) for u in range(self.N) for v in range(u + 1, self.N) if (masks[u] >> v) & 1]
        return Graph.from_arrays(self.N, [e[0] for e in edges], [e[1] for e in edges])

    def swapped(self) -> "TwoColoring":
        return TwoColoring(self.N, self.masks(BLUE))

    def to_bits(self) -> str:
        return "".join(
            "1" if (self.red[u] >> v) & 1 else "0" for u in range(self.N) for v in range(u + 1, self.N)
        )

    def to_json(self) -> str:
        return json.dumps({"N": self.N, "bits": self.to_bits()})

    @classmethod
    def from_json(cls, text: str) -> "TwoColoring":
        doc = json.loads(text)
        return cls.from_bits(doc["N"], doc["bits"])

    def __eq__(self, other):
        return isinstance(other, TwoColoring) and self.N == other.N and self.red == other.red

    def __hash__(self):
        return hash((self.N, self.red))

    def __repr__(self):
        return f"TwoColoring(N={self.N}, bits={self.to_bits()!r})"
