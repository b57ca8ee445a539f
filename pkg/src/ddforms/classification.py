"""Diophantine search for (t, N; k) triplets of dd-modular form candidates.

A dd-modular form of weight k for Gamma_t(N) vanishes exactly to order one
on the diagonal, and comparing volumes gives

    k N prod_{p | N, p !| t} (p^2 + 1)/(p (p + 1)) * t^2 prod_{p | t} (p^2 + 1)/p^2 = 2^delta(t) 5 m

with delta(t) = 1 if t > 1 else 0.  Everything here is integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .modular_basics import prime_factors


@dataclass(frozen=True, order=True)
class Candidate:
    t: int
    N: int
    k_x2: int
    m: int = 1

    @property
    def weight(self) -> Fraction:
        return Fraction(self.k_x2, 2)

    def to_json(self) -> dict:
        return {"t": self.t, "N": self.N, "k_x2": self.k_x2, "m": self.m}


def _volume_parts(t: int, N: int) -> tuple[int, int]:
    """(numerator, denominator) of the volume factor, both integers."""
    num, den = N * t * t, 1
    tp = prime_factors(t)
    for p in prime_factors(N):
        if p not in tp:
            num *= p * p + 1
            den *= p * (p + 1)
    for p in tp:
        num *= p * p + 1
        den *= p * p
    return num, den


def _volume_factor(t: int, N: int) -> Fraction:
    return Fraction(*_volume_parts(t, N))


def weight_identity_lhs(t: int, N: int, k_x2: int) -> Fraction:
    return Fraction(k_x2, 2) * _volume_factor(t, N)


def weight_identity_rhs(t: int, m: int = 1) -> int:
    return (2 if t > 1 else 1) * 5 * m


def enumerate_dd_candidates(t_max: int = 500, N_max: int = 500, m: int = 1) -> list[Candidate]:
    """All (t, N, k) with t <= t_max, N <= N_max and 2k a positive integer."""
    if t_max < 1 or N_max < 1 or m < 1:
        raise ValueError("bounds and m must be positive")
    # 2k = 2 rhs den / num; the scan is exhaustive inside the box (the volume
    # factors for N are below 1, so no early exit in N is safe)
    out = []
    for t in range(1, t_max + 1):
        rhs = weight_identity_rhs(t, m)
        for N in range(1, N_max + 1):
            num, den = _volume_parts(t, N)
            q, r = divmod(2 * rhs * den, num)
            if r == 0 and q > 0:
                out.append(Candidate(t, N, q, m))
    return sorted(out, key=lambda c: (c.t > 1, c.t, c.N))
