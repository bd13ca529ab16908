"""Explicit upper bounds on Ramsey numbers of sparse patterns, as exact integers.

Logarithms are base 2. When a bound is not an integer (a fractional power
of a non-power of two) the ceiling is returned, computed with mpmath at a
precision sized to the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

DEFAULT_C = 25  # constant in the exponent of 2; the exponent of Delta uses 4


def _log2_exact(k: int) -> Optional[int]:
    """``log2 k`` when ``k`` is a power of two, else None."""
    return k.bit_length() - 1 if k > 0 and k & (k - 1) == 0 else None


def _mpf(x) -> mpmath.mpf:
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def _ceil_pow2(log2_of) -> int:
    """``ceil(2^log2_of())``, re-evaluating ``log2_of`` at a precision that fits the result."""
    with mpmath.workdps(60):
        bits = float(log2_of())
    with mpmath.workdps(int(bits * 0.30103) + 40):
        return int(mpmath.ceil(mpmath.power(2, log2_of())))


def ramsey_bound_grr(d: int, Delta: int, q: int, n: int) -> int:
    """``(2^(7d+8) d^(3d+2) Delta)^(log q) n``."""
    if min(d, Delta, q) < 1 or n < 0:
        raise ValueError("d, Delta, q must be >= 1 and n >= 0")
    base = 2 ** (7 * d + 8) * d ** (3 * d + 2) * Delta
    k = _log2_exact(q)
    if k is not None:
        return base ** k * n
    a = _log2_exact(base)
    if a is not None:  # base^(log q) = q^(log base)
        return q ** a * n
    if n == 0:
        return 0
    return _ceil_pow2(lambda: mpmath.log(base, 2) * mpmath.log(q, 2) + mpmath.log(n, 2))


@dataclass(frozen=True)
class BoundParams:
    d: int
    Delta: int
    q: int
    n: int
    delta: Fraction = Fraction(1)
    c: Optional[Fraction] = None  # None: exponents 25 on the 2-term and 4 on the Delta-term

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.c is not None:
            object.__setattr__(self, "c", Fraction(self.c))
            if self.c <= 0:
                raise ValueError("c must be positive")
        if not 0 < self.delta <= 1:
            raise ValueError("delta must lie in (0, 1]")
        if min(self.d, self.Delta, self.q) < 1 or self.n < 0:
            raise ValueError("d, Delta, q must be >= 1 and n >= 0")
        if self.q > self.d + 1:
            raise ValueError("a d-degenerate pattern has chromatic number at most d + 1")

    def exponents(self):
        """``(a, b)`` such that the bound is ``2^a Delta^b n``."""
        c2 = DEFAULT_C if self.c is None else self.c
        cD = 4 if self.c is None else self.c
        a = Fraction(c2) * self.q * 3 ** self.q * self.d / self.delta
        b = Fraction(cD) * self.delta
        return a, b


def ramsey_bound_general(params: BoundParams) -> int:
    """``2^(c q 3^q d / delta) Delta^(c' delta) n`` rounded up to an integer."""
    a, b = params.exponents()
    n, Delta = params.n, params.Delta
    if n == 0:
        return 0
    kD = _log2_exact(Delta)
    if a.denominator == 1 and b.denominator == 1:
        return 2 ** int(a) * Delta ** int(b) * n
    if kD is not None:
        e = a + b * kD
        if e.denominator == 1:
            return 2 ** int(e) * n
    return _ceil_pow2(lambda: _mpf(a) + _mpf(b) * mpmath.log(Delta, 2) + mpmath.log(n, 2))


def ramsey_bound_main(d: int, Delta: int, q: int, n: int, c: Optional[Fraction] = None) -> int:
    """The general bound with ``delta = 1 / sqrt(log Delta)``, rounded up.

    Needs ``Delta >= 2``; at ``Delta = 1`` the logarithm vanishes.
    """
    if Delta < 2:
        raise ValueError("delta = 1/sqrt(log Delta) needs Delta >= 2")
    BoundParams(d, Delta, q, n, Fraction(1), c)  # validates the remaining fields
    if n == 0:
        return 0
    c2 = DEFAULT_C if c is None else c
    cD = 4 if c is None else c

    def log2_bound():
        L = mpmath.log(Delta, 2)
        delta = 1 / mpmath.sqrt(L)
        return _mpf(c2) * q * 3 ** q * d / delta + _mpf(cD) * delta * L + mpmath.log(n, 2)

    return _ceil_pow2(log2_bound)


@dataclass(frozen=True)
class MainstepParameters:
    t: Fraction
    t_seq: tuple  # t_1..t_q
    r_seq: tuple  # r_0..r_q
    log2_y: float
    log2_x: float
    feasible: bool  # x >= 2t

    def to_dict(self) -> dict:
        return {
            "t": str(self.t), "t_seq": [str(v) for v in self.t_seq], "r_seq": [str(v) for v in self.r_seq],
            "log2_y": self.log2_y, "log2_x": self.log2_x, "feasible": self.feasible,
        }


def mainstep_parameters(d: int, q: int, Delta: int, delta, N: int) -> MainstepParameters:
    """Set sizes used when passing from nested sets to the embedding parts.

    ``t = (3^q - 1) d / delta + d``, ``y = 2^(-5qt) Delta^(-delta) N`` and
    ``x = y^4 N^(-3)``; the construction needs ``x >= 2t``. The values of
    ``y`` and ``x`` are reported as base-2 logarithms since they are tiny at
    any realistic ``N``.
    """
    delta = Fraction(delta)
    if min(d, q, Delta) < 2:
        raise ValueError("d, q and Delta must be at least 2")
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if N < 1:
        raise ValueError("N must be positive")
    t = Fraction((3 ** q - 1) * d) / delta + d
    t_seq = tuple(2 * 3 ** (q - j) * d / delta for j in range(1, q + 1))
    r_seq = [t]
    for tj in t_seq:
        r_seq.append(r_seq[-1] - tj)
    log2_N = math.log2(N)
    log2_y = -5 * q * float(t) - float(delta) * math.log2(Delta) + log2_N
    log2_x = 4 * log2_y - 3 * log2_N
    return MainstepParameters(t, t_seq, tuple(r_seq), log2_y, log2_x, log2_x >= math.log2(2 * float(t)))
