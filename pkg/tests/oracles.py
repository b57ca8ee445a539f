"""Independent reference computations used by the tests.

Nothing here imports the series engine; every oracle works on plain dicts
or floats so that agreement is evidence rather than a tautology.
"""

from __future__ import annotations

import cmath
import itertools
from fractions import Fraction
from math import gcd

import sympy


def poly_mul(a: dict, b: dict, max_tau: Fraction) -> dict:
    out: dict = {}
    for (t1, z1), c1 in a.items():
        for (t2, z2), c2 in b.items():
            t = t1 + t2
            if t <= max_tau:
                out[(t, z1 + z2)] = out.get((t, z1 + z2), 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def theta_triple_product(max_tau) -> dict:
    """q^(1/8) r^(1/2) prod_{n>=1} (1 - q^n)(1 - q^n r)(1 - q^(n-1) r^-1) as {(tau, z): c}."""
    max_tau = Fraction(max_tau)
    lead = Fraction(1, 8)
    budget = max_tau - lead
    acc = {(Fraction(0), Fraction(0)): 1}
    acc = poly_mul(acc, {(Fraction(0), Fraction(0)): 1, (Fraction(0), Fraction(-1)): -1}, budget)
    n = 1
    while n <= budget:
        for fac in ({(0, 0): 1, (n, 0): -1}, {(0, 0): 1, (n, 1): -1}, {(0, 0): 1, (n, -1): -1}):
            acc = poly_mul(acc, {(Fraction(a), Fraction(b)): c for (a, b), c in fac.items()}, budget)
        n += 1
    return {(t + lead, z + Fraction(1, 2)): c for (t, z), c in acc.items()}


def partition_numbers(n: int) -> list[int]:
    return [int(sympy.functions.combinatorial.numbers.partition(k)) for k in range(n + 1)]


def eta_product_numeric(tau: complex, terms: int = 400) -> complex:
    q = cmath.exp(2j * cmath.pi * tau)
    p = 1
    for n in range(1, terms):
        p *= 1 - q**n
    return cmath.exp(2j * cmath.pi * tau / 24) * p


def dedekind_sum_sawtooth(h: int, k: int) -> Fraction:
    def saw(x: Fraction) -> Fraction:
        if x.denominator == 1:
            return Fraction(0)
        return x - (x.numerator // x.denominator) - Fraction(1, 2)

    return sum((saw(Fraction(i, k)) * saw(Fraction(h * i, k)) for i in range(1, k)), Fraction(0))


def generalized_bernoulli(k: int, chi_values: dict[int, int], N: int) -> Fraction:
    """B_{k,chi} = N^(k-1) sum_{a=1}^N chi(a) B_k(a/N) with sympy Bernoulli polynomials."""
    x = sympy.Symbol("x")
    Bk = sympy.bernoulli(k, x)
    total = sum(chi_values.get(a % N, 0) * Bk.subs(x, sympy.Rational(a, N)) for a in range(1, N + 1))
    total = sympy.nsimplify(total * N ** (k - 1))
    return Fraction(int(total.p), int(total.q))


def gamma0_index_bruteforce(N: int) -> int:
    """|P^1(Z/N)|: pairs (c, d) mod N generating Z/N, counted up to the phi(N) units."""
    pairs = sum(1 for c in range(N) for d in range(N) if gcd(gcd(c, d), N) == 1)
    units = sum(1 for u in range(N) if gcd(u, N) == 1)
    return pairs // units


def sp4_f2_index_of_siegel_congruence() -> int:
    """[Sp_4(F_2) : {C = 0}] by enumerating all 4x4 matrices over F_2."""
    J = ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0))

    def mul(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(4)) % 2 for j in range(4))
                     for i in range(4))

    def tr(a):
        return tuple(tuple(a[j][i] for j in range(4)) for i in range(4))

    total = parabolic = 0
    for bits in itertools.product((0, 1), repeat=16):
        m = tuple(tuple(bits[4 * i:4 * i + 4]) for i in range(4))
        if mul(mul(tr(m), J), m) == J:
            total += 1
            if not any(m[i][j] for i in (2, 3) for j in (0, 1)):
                parabolic += 1
    return total // parabolic


def phi01_weierstrass(max_tau: int) -> dict:
    """phi_{0,1} = 12 phi_{-2,1} * P with P = (2 pi i)^-2 wp, written without division:

    phi_{0,1} = phi_{-2,1} + 12 prod (1-q^n r)^2 (1-q^n/r)^2 / (1-q^n)^4
                + 12 phi_{-2,1} sum_{n>=1} sum_{d|n} d (r^d - 2 + r^-d) q^n
    where phi_{-2,1} = theta^2/eta^6.  Returns {(n, l): c} with integral n.
    """
    M = Fraction(max_tau)
    one = {(Fraction(0), Fraction(0)): 1}
    # prod (1 - q^n)^-4 via partitions-like power series: use repeated geometric series
    inv_eta4 = dict(one)
    for n in range(1, max_tau + 1):
        geo = {(Fraction(n * j), Fraction(0)): 1 for j in range(0, max_tau // n + 1)}
        for _ in range(4):
            inv_eta4 = poly_mul(inv_eta4, geo, M)
    prod = dict(one)
    for n in range(1, max_tau + 1):
        for fac in ({(0, 0): 1, (n, 1): -1}, {(0, 0): 1, (n, -1): -1}):
            f = {(Fraction(a), Fraction(b)): c for (a, b), c in fac.items()}
            prod = poly_mul(prod, f, M)
            prod = poly_mul(prod, f, M)
    core = poly_mul(prod, inv_eta4, M)  # theta^2 r / ((1-r)^2 eta^6)
    phi_m2 = poly_mul(core, {(Fraction(0), Fraction(1)): 1, (Fraction(0), Fraction(0)): -2,
                             (Fraction(0), Fraction(-1)): 1}, M)
    wp = {}
    for n in range(1, max_tau + 1):
        for d in sympy.divisors(n):
            for l, c in ((d, d), (0, -2 * d), (-d, d)):
                key = (Fraction(n), Fraction(l))
                wp[key] = wp.get(key, 0) + c
    out = dict(phi_m2)
    for k, v in core.items():
        out[k] = out.get(k, 0) + 12 * v
    for k, v in poly_mul(phi_m2, wp, M).items():
        out[k] = out.get(k, 0) + 12 * v
    return {k: v for k, v in out.items() if v}
