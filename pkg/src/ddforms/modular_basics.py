"""Elliptic modular basics for Gamma_0(N).

Matrices are plain 4-tuples ``(a, b, c, d)``.  Characters return their value
as a phase ``x`` in [0, 1), meaning ``exp(2 pi i x)``, so every comparison is
exact.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, isqrt
from typing import Iterable, Sequence

from .series_core import TriSeries, TruncationPolicy

Mat = tuple[int, int, int, int]

IDENTITY: Mat = (1, 0, 0, 1)
S: Mat = (0, -1, 1, 0)
T: Mat = (1, 1, 0, 1)
T_INV: Mat = (1, -1, 0, 1)
MINUS_I: Mat = (-1, 0, 0, -1)


# ------------------------------------------------------------- arithmetic
def mat_mul(x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_inv(x: Mat) -> Mat:
    a, b, c, d = x
    return (d, -b, -c, a)


def mat_mod(x: Mat, m: int) -> Mat:
    return tuple(v % m for v in x)  # type: ignore[return-value]


def in_gamma0(x: Mat, n: int) -> bool:
    return x[2] % n == 0


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def euler_phi(n: int) -> int:
    out = n
    for p in prime_factors(n):
        out = out // p * (p - 1)
    return out


def moebius(n: int) -> int:
    out = 1
    for p in prime_factors(n):
        if n % (p * p) == 0:
            return 0
        out = -out
    return out


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in divisors(n))


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def complete_to_sl2(c: int, d: int) -> Mat:
    """A matrix in SL_2(Z) with bottom row (c, d); gcd(c, d) must be 1."""
    g, x, y = ext_gcd(c, d)
    if g != 1:
        raise ValueError("bottom row (%d, %d) is not primitive" % (c, d))
    # a d - b c = 1 with a = y, b = -x
    return (y, -x, c, d)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a / n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a / n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ------------------------------------------------------------------ cusps
@dataclass(frozen=True, order=True)
class Cusp:
    """The cusp f/e of Gamma_0(N) with width ``width`` and ``N_e = N/e``."""

    e: int
    f: int
    N: int = field(compare=False)
    width: int = field(compare=False)
    N_e: int = field(compare=False)

    @property
    def is_infinity(self) -> bool:
        return self.e == self.N

    @property
    def is_zero(self) -> bool:
        return self.e == 1

    def label(self) -> str:
        if self.is_infinity:
            return "inf"
        return "%d/%d" % (self.f, self.e)

    def matrix(self) -> Mat:
        """A matrix of SL_2(Z) sending infinity to f/e."""
        if self.is_infinity:
            return (1, 0, self.N, 1) if self.N > 1 else IDENTITY
        g, x, y = ext_gcd(self.f, self.e)
        # f d - b e = 1 with d = x, b = -y
        return (self.f, -y, self.e, x)

    def to_json(self):
        return {"f": self.f, "e": self.e, "width": self.width, "N_e": self.N_e}


def cusp_width(e: int, n: int) -> int:
    return n // gcd(e * e, n)


@lru_cache(maxsize=None)
def cusps_gamma0(n: int) -> tuple[Cusp, ...]:
    """Representatives f/e: e | N, f mod gcd(e, N/e) prime to it, gcd(f, e) = 1.

    In each class the smallest nonnegative f prime to e is used; the cusp at
    infinity is 1/N.  Ordered by e.
    """
    if n < 1:
        raise ValueError("level must be positive")
    out = []
    for e in divisors(n):
        g = gcd(e, n // e)
        for f0 in range(g):
            if gcd(f0, g) != 1:
                continue
            f = f0
            while gcd(f, e) != 1:
                f += g
            out.append(Cusp(e, f, n, cusp_width(e, n), n // e))
    return tuple(out)


def gamma0_index(n: int) -> int:
    out = n
    for p in prime_factors(n):
        out = out * (p + 1) // p
    return out


def cusp_count(n: int) -> int:
    return sum(euler_phi(gcd(d, n // d)) for d in divisors(n))


def cusp_of(a: int, c: int, n: int) -> Cusp:
    """The representative equivalent to a/c under Gamma_0(N) (c = 0 is infinity)."""
    for cusp in cusps_gamma0(n):
        if cusps_equivalent((a, c), (cusp.f, cusp.e), n):
            return cusp
    raise AssertionError("no cusp found")


def cusps_equivalent(x: tuple[int, int], y: tuple[int, int], n: int) -> bool:
    """a/c ~ a'/c' under Gamma_0(N), decided on matrices: M1 T^j M2^-1 in Gamma_0(N)."""
    m1, m2 = _cusp_matrix(*x), _cusp_matrix(*y)
    inv2 = mat_inv(m2)
    return any(in_gamma0(mat_mul(mat_mul(m1, (1, j, 0, 1)), inv2), n) for j in range(n))


def _cusp_matrix(a: int, c: int) -> Mat:
    g = gcd(a, c)
    a, c = a // g, c // g
    if c == 0:
        return IDENTITY
    g, x, y = ext_gcd(a, c)
    return (a, -y, c, x)


# ----------------------------------------------------------- coset reps
def sl2_lift(x: Mat, m: int) -> Mat:
    """Lift a matrix of SL_2(Z/m) to SL_2(Z), keeping c = 0 mod m classes."""
    if m == 1:
        return IDENTITY
    a, b, c, d = (v % m for v in x)
    if (a * d - b * c) % m != 1:
        raise ValueError("matrix is not in SL_2(Z/%d)" % m)
    if c == 0:
        c = m
    dd = d
    while gcd(c, dd) != 1:
        dd += m
    g0 = complete_to_sl2(c, dd)
    for j in range(m):
        if (g0[0] + j * c - a) % m == 0 and (g0[1] + j * dd - b) % m == 0:
            return (g0[0] + j * c, g0[1] + j * dd, c, dd)
    raise AssertionError("lift failed")  # pragma: no cover


def p1_points(n: int) -> list[tuple[int, int]]:
    """Representatives (c, d) of P^1(Z/N)."""
    seen = set()
    reps = []
    units = [u for u in range(1, n + 1) if gcd(u, n) == 1] if n > 1 else [1]
    for c in range(n):
        for d in range(n):
            if gcd(gcd(c, d), n) != 1:
                continue
            orbit = frozenset(((u * c) % n, (u * d) % n) for u in units)
            if orbit in seen:
                continue
            seen.add(orbit)
            reps.append((c, d))
    if n == 1:
        return [(0, 1)]
    return reps


def coset_reps(n: int, target: int = 1) -> list[Mat]:
    """Right coset representatives of Gamma_0(N) in Gamma_0(target), target | N.

    Gamma_0(target) is the disjoint union of Gamma_0(N) g over the returned g,
    one for each point (c : d) of P^1(Z/N) with target | c.
    """
    if n % target:
        raise ValueError("target level must divide N")
    reps = []
    for c, d in p1_points(n):
        if c % target:
            continue
        cc = c if c else n
        dd = d
        while gcd(cc, dd) != 1:
            dd += n
        reps.append(complete_to_sl2(cc, dd))
    return reps


def sl2_decomposition_reps(n: int) -> list[Mat]:
    """The representatives M_{f/e} T^a (0 <= a < h_e) of Gamma_0(N) in SL_2(Z)."""
    out = []
    for cusp in cusps_gamma0(n):
        m = cusp.matrix()
        for a in range(cusp.width):
            out.append(mat_mul(m, (1, a, 0, 1)))
    return out


def same_coset(x: Mat, y: Mat, n: int) -> bool:
    """Gamma_0(N) x == Gamma_0(N) y."""
    return in_gamma0(mat_mul(x, mat_inv(y)), n)


@lru_cache(maxsize=None)
def gamma0_mod(n: int, m: int) -> tuple[Mat, ...]:
    """Lifts to SL_2(Z) of the image of Gamma_0(N) in SL_2(Z/m), for N | m."""
    if m % n:
        raise ValueError("need N | m")
    out = []
    for a, b, c, d in product(range(m), repeat=4):
        if c % n or (a * d - b * c) % m != 1 % m:
            continue
        out.append(sl2_lift((a, b, c, d), m))
    return tuple(out)


# ------------------------------------------------------- S, T decomposition
def st_decompose(x: Mat) -> list[str]:
    """Write x as a word in 'S', 'T', 'Ti' (T^-1) and '-I'.

    The product of the word, read left to right, equals x.
    """
    a, b, c, d = x
    if a * d - b * c != 1:
        raise ValueError("matrix is not in SL_2(Z)")
    word: list[str] = []
    r = x
    while r[2] != 0:
        a, b, c, d = r
        # R = R' T^k with R' = R T^-k: bottom row (c, d - k c)
        k = _round_div(d, c)
        r = mat_mul(r, (1, -k, 0, 1))
        word = (["T"] * k if k > 0 else ["Ti"] * (-k)) + word
        # R = R'' S with R'' = R S^-1
        r = mat_mul(r, (0, 1, -1, 0))
        word = ["S"] + word
    a, b, c, d = r
    if a == -1:
        r = mat_mul(MINUS_I, r)
        prefix = ["-I"]
    else:
        prefix = []
    b = r[1]
    word = prefix + (["T"] * b if b > 0 else ["Ti"] * (-b)) + word
    return word


def _round_div(d: int, c: int) -> int:
    q = d // c
    if abs(d - (q + 1) * c) < abs(d - q * c):
        q += 1
    return q


def word_product(word: Sequence[str]) -> Mat:
    gens = {"S": S, "T": T, "Ti": T_INV, "-I": MINUS_I}
    out = IDENTITY
    for g in word:
        out = mat_mul(out, gens[g])
    return out


# ------------------------------------------------------------- eta things
def eta_qexpansion(d: int = 1, exponent=1, trunc: TruncationPolicy | None = None) -> TriSeries:
    """eta(d tau) ** exponent to the tau-precision of ``trunc``."""
    exponent = Fraction(exponent)
    if trunc is None or trunc.max_tau is None:
        raise ValueError("eta needs a tau truncation")
    lead = d * exponent / 24
    tr = TruncationPolicy(trunc.max_tau - lead, None)
    s = TriSeries.one(tr)
    n = 1
    while d * n <= tr.max_tau:
        s = s.mul_one_minus(d * n, 0, 0, exponent)
        n += 1
    return s.shift(lead)


def eta_product_qexpansion(factors: dict[int, object], trunc: TruncationPolicy) -> TriSeries:
    """prod_d eta(d tau)^(r_d)."""
    out = None
    lead = sum(Fraction(d) * Fraction(r) for d, r in factors.items()) / 24
    tr = TruncationPolicy(trunc.max_tau - lead, None)
    out = TriSeries.one(tr)
    for d, r in sorted(factors.items()):
        n = 1
        while d * n <= tr.max_tau:
            out = out.mul_one_minus(d * n, 0, 0, r)
            n += 1
    return out.shift(lead)


def dedekind_sum(h: int, k: int) -> Fraction:
    """s(h, k) for k > 0, gcd(h, k) = 1, via reciprocity."""
    if k <= 0:
        raise ValueError("k must be positive")
    sign = 1
    h %= k
    acc = Fraction(0)
    while h:
        # s(h, k) = (h/k + k/h + 1/(hk))/12 - 1/4 - s(k, h)
        acc += sign * (Fraction(h, k) + Fraction(k, h) + Fraction(1, h * k)) / 12 - sign * Fraction(1, 4)
        h, k = k % h, h
        sign = -sign
    return acc


def dedekind_sum_direct(h: int, k: int) -> Fraction:
    def saw(x: Fraction) -> Fraction:
        if x.denominator == 1:
            return Fraction(0)
        return x - (x.numerator // x.denominator) - Fraction(1, 2)

    return sum((saw(Fraction(i, k)) * saw(Fraction(h * i, k)) for i in range(1, k)), Fraction(0))


def eta_multiplier(x: Mat) -> int:
    """v_eta(M) = exp(2 pi i n / 24); returns n mod 24.

    Convention: eta(M tau) = v_eta(M) (c tau + d)^(1/2) eta(tau) with the
    principal square root.
    """
    a, b, c, d = x
    if c == 0:
        if d == 1:
            return b % 24
        return (-b - 6) % 24
    if c < 0:
        return (eta_multiplier((-a, -b, -c, -d)) + 6) % 24
    num = Fraction(a + d, c) - 12 * dedekind_sum(d, c) - 3
    if num.denominator != 1:  # pragma: no cover
        raise AssertionError("non-integral eta multiplier exponent")
    return int(num) % 24


def eta_numeric(tau: complex, terms: int = 200) -> complex:
    """eta(tau) by the pentagonal series (oracle-independent of the product)."""
    q = cmath.exp(2j * cmath.pi * tau)
    s = 0
    for k in range(-terms, terms + 1):
        e = k * (3 * k - 1) // 2
        if e > 0 and abs(q) ** e < 1e-30:
            continue
        s += (-1) ** (k % 2) * q**e
    return cmath.exp(2j * cmath.pi * tau / 24) * s


def eta_order_at_cusp(factors: dict[int, object], a: int, c: int) -> Fraction:
    """Order of prod eta(d tau)^r_d at the cusp a/c, in units of q.

    ``c = 0`` means infinity.  Formula: sum r_d gcd(c, d)^2 / (24 d).
    """
    out = Fraction(0)
    for d, r in factors.items():
        g = d if c == 0 else gcd(c, d)
        out += Fraction(r) * Fraction(g * g, 24 * d)
    return out


def eta_product_multiplier(factors: dict[int, int], x: Mat) -> Fraction:
    """Phase of the multiplier of prod eta(d tau)^r_d at x in Gamma_0(lcm d)."""
    a, b, c, dd = x
    out = Fraction(0)
    for d, r in factors.items():
        if c % d:
            raise ValueError("matrix not in Gamma_0(%d)" % d)
        out += Fraction(r) * eta_multiplier((a, b * d, c // d, dd))
    return (out / 24) % 1


# ------------------------------------------------------------- characters
def sigma_a(a: int, m: int) -> Mat:
    """A matrix of SL_2(Z) congruent to diag(a^-1, a) mod m; gcd(a, m) = 1."""
    if gcd(a, m) != 1:
        raise ValueError("a must be prime to the modulus")
    if m == 1:
        return IDENTITY
    ainv = pow(a, -1, m)
    return sl2_lift((ainv, 0, 0, a % m), m)


@dataclass(frozen=True)
class CharacterId:
    """A character (or multiplier) on Gamma_0(level).

    kinds: ``trivial``, ``chi2_2``, ``chi2_2b``, ``chi4_2``, ``chi2_3``,
    ``chi2_4``, ``chi4_level2_t2``, ``eta_power`` (data = (n,)),
    ``eta_product`` (data = ((d, r_d), ...)), ``dirichlet`` (data = phase
    table indexed by d mod level, ``None`` off the units).
    """

    kind: str
    level: int = 1
    data: tuple = ()

    def value(self, x: Mat) -> Fraction:
        """Phase in [0, 1) of the character at x."""
        a, b, c, d = x
        k = self.kind
        if c % self.level:
            raise ValueError("matrix is not in Gamma_0(%d)" % self.level)
        if k == "trivial":
            return Fraction(0)
        if k == "chi2_2":
            return Fraction((b - c // 2) % 2, 2)
        if k == "chi2_2b":
            return Fraction(b % 2, 2)
        if k == "chi4_2":
            return Fraction((d * (b - c // 2)) % 4, 4)
        if k == "chi2_3":
            c3 = c // 3
            sign = (a + d + 1) if c3 % 2 else b
            leg = kronecker(d, 3)
            ph = Fraction(sign % 2, 2) + (Fraction(1, 2) if leg == -1 else 0)
            return ph % 1
        if k == "chi2_4":
            return Fraction(((d - 1) // 2) % 2, 2)
        if k == "chi4_level2_t2":
            return Fraction((b * d + d - 1) % 4, 4)
        if k == "eta_power":
            return Fraction((self.data[0] * eta_multiplier(x)) % 24, 24)
        if k == "eta_product":
            return eta_product_multiplier(dict(self.data), x)
        if k == "dirichlet":
            v = self.data[d % self.level]
            if v is None:
                raise ValueError("d not prime to the modulus")
            return Fraction(v) % 1
        raise ValueError("unknown character kind %r" % k)

    def complex_value(self, x: Mat) -> complex:
        return cmath.exp(2j * cmath.pi * float(self.value(x)))

    def at_sigma(self, a: int, modulus: int) -> Fraction:
        """chi(sigma_a) with sigma_a = diag(a^-1, a) mod ``modulus``."""
        return self.value(sigma_a(a, modulus))

    def to_json(self):
        return {"kind": self.kind, "level": self.level,
                "data": [None if v is None else str(v) if isinstance(v, Fraction) else v
                         for v in _flatten(self.data)]}


def _flatten(data):
    out = []
    for v in data:
        if isinstance(v, tuple):
            out.append(list(v))
        else:
            out.append(v)
    return out


def dirichlet(modulus: int, fn) -> CharacterId:
    """Real Dirichlet character from ``fn(d) in {1, -1}`` on units mod ``modulus``."""
    table = []
    for d in range(modulus):
        if gcd(d, modulus) != 1:
            table.append(None)
        else:
            v = fn(d)
            table.append(Fraction(0) if v == 1 else Fraction(1, 2))
    return CharacterId("dirichlet", modulus, tuple(table))


def legendre3(level: int = 3) -> CharacterId:
    return dirichlet(level, lambda d: kronecker(d % 3, 3))


def minus4(level: int = 4) -> CharacterId:
    return dirichlet(level, lambda d: kronecker(-4, d))


def trivial(level: int = 1) -> CharacterId:
    return CharacterId("trivial", level)


def eta_product_character(factors: dict[int, int]) -> CharacterId:
    level = 1
    for d in factors:
        level = level * d // gcd(level, d)
    return CharacterId("eta_product", level, tuple(sorted(factors.items())))


def dirichlet_values(chi: CharacterId, n: int) -> int:
    """chi(n) as an integer (+-1 or 0) for a real Dirichlet character."""
    if gcd(n, chi.level) != 1:
        return 0
    if chi.kind == "trivial":
        return 1
    v = chi.data[n % chi.level]
    return 1 if v == 0 else -1


# ---------------------------------------------------------------- Eisenstein
def bernoulli_generalized(k: int, chi: CharacterId) -> Fraction:
    """B_{k, chi} from the generating function sum chi(a) t e^{at} / (e^{Nt} - 1)."""
    n = chi.level
    # series of t / (e^{Nt} - 1) = 1 / (N (1 + N t/2! + N^2 t^2/3! + ...))
    prec = k + 1
    denom = [Fraction(n**j, _fact(j + 1)) for j in range(prec)]
    inv = [Fraction(0)] * prec
    inv[0] = 1 / denom[0]
    for j in range(1, prec):
        inv[j] = -sum(denom[i] * inv[j - i] for i in range(1, j + 1)) / denom[0]
    inv = [v / n for v in inv]
    total = Fraction(0)
    for a in range(1, n + 1):
        ch = dirichlet_values(chi, a) if n > 1 else 1
        if not ch:
            continue
        # coefficient of t^k in e^{at} * inv
        total += ch * sum(Fraction(a**i, _fact(i)) * inv[k - i] for i in range(k + 1))
    return total * _fact(k)


def _fact(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def eisenstein_qexpansion(k: int, chi: CharacterId, trunc: TruncationPolicy) -> TriSeries:
    """E_k(tau, chi) = L(1 - k, chi)/2 + sum_n sum_{a | n} chi(a) a^(k-1) q^n."""
    if trunc.max_tau is None:
        raise ValueError("Eisenstein series needs a tau truncation")
    const = -bernoulli_generalized(k, chi) / (2 * k)
    terms = [(0, 0, 0, const)]
    for n in range(1, int(trunc.max_tau) + 1):
        c = sum(dirichlet_values(chi, a) * a ** (k - 1) for a in divisors(n)) if chi.level > 1 \
            else sigma(k - 1, n)
        terms.append((n, 0, 0, c))
    return TriSeries.from_terms(terms, TruncationPolicy(trunc.max_tau, None))


# ------------------------------------------------------------- index formula
def index_formula(t: int, n: int) -> Fraction:
    """[Gamma_1 : Gamma_t(N)] = (Nt)^3 prod_{p | tN}(1+1/p)(1+1/p^2) prod_{p | (t, N)}(1+1/p)."""
    out = Fraction((n * t) ** 3)
    for p in prime_factors(t * n):
        out *= (1 + Fraction(1, p)) * (1 + Fraction(1, p * p))
    for p in prime_factors(gcd(t, n)):
        out *= 1 + Fraction(1, p)
    return out


def lagrangian_count(p: int) -> int:
    """Number of Lagrangian planes in F_p^4 (cosets of Gamma_0^(2)(p) in Sp_4(Z)).

    Enumerates isotropic pairs of vectors, an oracle for the t = 1, N = p case.
    """
    vecs = [v for v in product(range(p), repeat=4) if any(v)]

    def omega(u, v):
        return (u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1]) % p

    planes = set()
    for i, u in enumerate(vecs):
        for v in vecs[i + 1:]:
            if omega(u, v):
                continue
            span = {tuple((x * a + y * b) % p for a, b in zip(u, v))
                    for x in range(p) for y in range(p)}
            if len(span) == p * p:
                planes.add(frozenset(span))
    return len(planes)


def index_paramodular(t: int, n: int) -> int:
    """The index formula as an integer (it always is one)."""
    v = index_formula(t, n)
    if v.denominator != 1:
        raise ArithmeticError("index of Gamma_%d(%d) is not integral: %s" % (t, n, v))
    return v.numerator


def character_value(chi: CharacterId, x: Mat) -> Fraction:
    """chi(x) as a phase in [0, 1)."""
    return chi.value(x)
