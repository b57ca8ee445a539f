"""Hecke operators T_-(m) and the arithmetic (additive) lift to genus 2.

Exponent conventions for a lift of a Jacobi form of index t whose q-exponents
lie in 1/q + Z: the coefficient of ``q^(n/q) r^(l/2) s^(m t)`` is

    sum_{a | (n, l, m), (a, N) = 1} a^(k-1) chi(sigma_a) c(n m / a^2, l / a)

where ``c(n, l)`` is the coefficient of ``q^(n/q) r^(l/2)`` in the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .cyclotomic import Cyclo, simplify
from .modular_basics import (CharacterId, dirichlet, divisors, eisenstein_qexpansion, kronecker)
from .series_core import TriSeries, TruncationPolicy
from .theta_jacobi import JacobiForm


@dataclass
class SiegelForm:
    """A genus-2 form given by a truncated expansion in q, r, s.

    ``t`` is the paramodular parameter of the V_t symmetry
    c(a, l, b) = c(b/t, l, t a) in true exponents.
    """

    name: str
    weight: Fraction
    t: Fraction
    N: int
    series: TriSeries
    plus: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def weight_x2(self) -> int:
        return int(2 * self.weight)

    def to_json(self) -> dict:
        return {"name": self.name, "t": str(self.t), "N": self.N, "plus": self.plus,
                "weight_x2": self.weight_x2, "series": self.series.to_json()}

    @classmethod
    def from_json(cls, d) -> "SiegelForm":
        return cls(d.get("name", ""), Fraction(d["weight_x2"], 2), Fraction(d["t"]), d["N"],
                   TriSeries.from_json(d["series"]), d.get("plus", True))

    def rescaled(self, c: int, name: str | None = None) -> "SiegelForm":
        """F(cZ)."""
        return SiegelForm(name or "%s(%dZ)" % (self.name, c), self.weight, self.t, self.N * c,
                          self.series.rescale(c, c, c), self.plus)

    def __mul__(self, other: "SiegelForm") -> "SiegelForm":
        return SiegelForm("%s*%s" % (self.name, other.name), self.weight + other.weight,
                          self.t, max(self.N, other.N), self.series * other.series)

    def __pow__(self, e: int) -> "SiegelForm":
        return SiegelForm("%s^%d" % (self.name, e), self.weight * e, self.t, self.N, self.series ** e)


@dataclass(frozen=True)
class LiftSpec:
    """What to lift and how far: tau-exponent <= max_tau, omega-exponent <= max_omega."""

    form: str
    max_tau: Fraction
    max_omega: Fraction
    mu: int = 1


def _phase_to_number(ph: Fraction):
    if ph == 0:
        return 1
    if ph == Fraction(1, 2):
        return -1
    return Cyclo.root(ph.numerator, ph.denominator)


def lift_parameters(phi: JacobiForm):
    """(k, t, N, q) after checking the hypotheses of the lift."""
    if phi.weight.denominator != 1 or phi.weight <= 0:
        raise ValueError("lift needs a positive integral weight")
    q = phi.q_chi()
    t = phi.index
    if (q * t).denominator != 1:
        raise ValueError("q t must be integral")
    if phi.character is None:
        raise ValueError("lift needs the character of the input")
    return int(phi.weight), t, phi.level, q


def check_holomorphic(phi: JacobiForm, expansion: TriSeries) -> None:
    t = phi.index
    for e_tau, e_z, _, c in expansion.terms():
        if 4 * e_tau * t < e_z * e_z:
            raise ValueError("%s is not a holomorphic Jacobi form (term q^%s r^%s)"
                             % (phi.name, e_tau, e_z))


class _SigmaCache:
    def __init__(self, chi: CharacterId, modulus: int):
        self.chi, self.modulus, self.cache = chi, modulus, {}

    def __call__(self, a: int):
        if a not in self.cache:
            self.cache[a] = _phase_to_number(self.chi.at_sigma(a, self.modulus))
        return self.cache[a]


def hecke_tminus(phi: JacobiForm, m: int, max_tau) -> TriSeries:
    """phi | T_-(m): index m t, same weight; expansion to q^max_tau.

    sum_{ad = m, (a, Nq) = 1} a^(k-1) chi(sigma_a) sum c(d n, l) q^(a n/q) r^(a l/2).
    """
    k, t, N, q = lift_parameters(phi)
    if m < 1:
        raise ValueError("m must be positive")
    max_tau = Fraction(max_tau)
    chi_s = _SigmaCache(phi.character, N * q)
    need = max_tau * m  # a n/q <= max_tau with n' = d n  ->  n'/q <= m max_tau / a^2
    src = phi.expansion(need)
    out: dict[tuple[Fraction, Fraction], object] = {}
    for a in divisors(m):
        if gcd(a, N * q) != 1:
            continue
        d = m // a
        w = a ** (k - 1) * chi_s(a)
        for e_tau, e_z, _, c in src.terms():
            n1 = e_tau * q  # c(n1, l) with n1 = d n
            if n1.denominator != 1 or int(n1) % d:
                continue
            n = int(n1) // d
            tau_out = Fraction(a * n, q)
            if tau_out > max_tau:
                continue
            key = (tau_out, a * e_z)
            out[key] = out.get(key, 0) + w * c
    return TriSeries.from_terms([(k_[0], k_[1], 0, simplify(v)) for k_, v in out.items()],
                                TruncationPolicy(max_tau, None))


def arithmetic_lift(phi: JacobiForm, max_tau, max_omega, mu: int = 1,
                    name: str | None = None) -> SiegelForm:
    """F_phi = [c(0,0) E_k(tau, chi_N)] + sum_{m = mu mod q} (phi | T_-(m)) s^(m t)."""
    k, t, N, q = lift_parameters(phi)
    if mu % q != 1 % q:
        raise ValueError("only mu = 1 mod q is supported")
    max_tau, max_omega = Fraction(max_tau), Fraction(max_omega)
    base = phi.expansion(max_tau)
    check_holomorphic(phi, base)
    trunc = TruncationPolicy(max_tau, max_omega)
    total = TriSeries.zero(trunc)
    m = 1
    while m * t <= max_omega:
        if (m - mu) % q == 0:
            slice_ = hecke_tminus(phi, m, max_tau)
            total = total + slice_.shift(0, 0, m * t).truncate(trunc)
        m += 1
    c00 = base.coeff(0, 0)
    if c00:
        if q != 1:
            raise ValueError("a constant term needs q = 1")
        total = total + eisenstein_qexpansion(k, _dirichlet_of(phi.character, N), trunc).scale(c00)
    total = TriSeries(total.coeffs, total.den, trunc)
    return SiegelForm(name or "Lift(%s)" % phi.name, Fraction(k), q * t, N, total,
                      meta={"q": q, "index": str(t)})


def _dirichlet_of(chi: CharacterId, N: int) -> CharacterId:
    """The Dirichlet character a -> chi(sigma_a) mod N."""
    if N == 1:
        return CharacterId("trivial", 1)
    vals = {}
    for a in range(N):
        if gcd(a, N) == 1:
            ph = chi.at_sigma(a, N)
            if ph not in (0, Fraction(1, 2)):
                raise ValueError("only real characters are supported for the Eisenstein term")
            vals[a] = 1 if ph == 0 else -1
    return dirichlet(N, lambda d: vals[d % N])


def lift_coefficient(phi: JacobiForm, n: int, l: int, m: int) -> object:
    """Single coefficient at q^(n/q) r^(l/2) s^(m t) by the divisor sum (an oracle)."""
    k, t, N, q = lift_parameters(phi)
    chi_s = _SigmaCache(phi.character, N * q)
    src = phi.expansion(Fraction(n * m, q))
    total = 0
    for a in divisors(gcd(gcd(n, abs(l)), m) if l else gcd(n, m)):
        if gcd(a, N) != 1:
            continue
        total += a ** (k - 1) * chi_s(a) * src.coeff(Fraction(n * m, a * a * q), Fraction(l, 2 * a))
    return simplify(total)


def fourier_jacobi_slice(F: SiegelForm, omega) -> TriSeries:
    """The coefficient of s^omega as a series in q and r."""
    omega = Fraction(omega)
    top = F.series.trunc.max_omega
    if top is not None and omega > top:
        raise ValueError("s^%s lies outside the window (omega <= %s)" % (omega, top))
    return F.series.omega_slice(omega)


def vt_violations(F: SiegelForm) -> list[tuple]:
    """Violations of c(a, l, b) = c(b/t, l, t a) inside the known window."""
    s = F.series
    t = F.t
    tr = s.trunc
    bad = []
    for a, l, b, c in s.terms():
        a2, b2 = b / t, t * a
        if not tr.admits(a2, l, b2):
            continue
        c2 = s.coeff(a2, l, b2)
        if c2 != c:
            bad.append((a, l, b, c, c2))
    return bad


def vt_symmetry_check(F: SiegelForm) -> bool:
    return not vt_violations(F)


# ------------------------------------------------------------ closed forms
# Two variants are kept for nabla_2 and Q_1.  "printed" follows the published
# formulas word for word; "corrected" is what the lift (and independently the
# Borcherds product) gives.  They differ where gcd(n, l, m) has a divisor a > 1.
VARIANTS = ("printed", "corrected")


def _window_pairs(max_tau, max_omega, q_tau: int, q_omega: int):
    for n in range(1, int(Fraction(max_tau) * q_tau) + 1):
        for m in range(1, int(Fraction(max_omega) * q_omega) + 1):
            yield n, m


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError("variant must be one of %s" % (VARIANTS,))


def nabla2_closed_form(max_tau, max_omega, variant: str = "printed") -> TriSeries:
    """nabla_2 as q^(n/2) r^(l/2) s^(m/2), n, m odd, 3N^2 = 4mn - l^2, N > 0.

    printed:   N (-4/(N l)) sum_{a | (l, m, n)} a (a/3)
    corrected: N (-4/(N l)) sum_{a | (l, m, n)} (a/3)
    """
    _check_variant(variant)
    terms = []
    for n, m in _window_pairs(max_tau, max_omega, 2, 2):
        if n % 2 == 0 or m % 2 == 0:
            continue
        L = isqrt(4 * m * n)
        for l in range(-L, L + 1):
            r = 4 * m * n - l * l
            if r <= 0 or r % 3:
                continue
            NN = isqrt(r // 3)
            if NN * NN * 3 != r:
                continue
            g = gcd(gcd(abs(l), m), n)
            w = (lambda a: a) if variant == "printed" else (lambda a: 1)
            inner = sum(w(a) * kronecker(a, 3) for a in divisors(g))
            c = NN * kronecker(-4, NN * l) * inner
            if c:
                terms.append((Fraction(n, 2), Fraction(l, 2), Fraction(m, 2), c))
    return TriSeries.from_terms(terms, TruncationPolicy(max_tau, max_omega))


def q1_closed_form(max_tau, max_omega, variant: str = "printed") -> TriSeries:
    """Q_1 as q^(n/4) r^(l/2) s^(m/2), n, m = 1 mod 4, l odd, (2N + 1)^2 = 2mn - l^2.

    printed:   N > 0, coefficient (-4/l) sigma_0((n, l, m))
    corrected: N >= 0, coefficient (-4/l) sum_{a | (n, l, m)} (-4/a)
    """
    _check_variant(variant)
    n0 = 1 if variant == "printed" else 0
    terms = []
    for n, m in _window_pairs(max_tau, max_omega, 4, 2):
        if n % 4 != 1 or m % 4 != 1:
            continue
        L = isqrt(2 * m * n)
        for l in range(-L, L + 1):
            if l % 2 == 0:
                continue
            r = 2 * m * n - l * l
            if r <= 0:
                continue
            s = isqrt(r)
            if s * s != r or (s - 1) // 2 < n0:
                continue
            g = gcd(gcd(abs(l), m), n)
            if variant == "printed":
                inner = len(divisors(g))
            else:
                inner = sum(kronecker(-4, a) for a in divisors(g))
            c = kronecker(-4, l) * inner
            if c:
                terms.append((Fraction(n, 4), Fraction(l, 2), Fraction(m, 2), c))
    return TriSeries.from_terms(terms, TruncationPolicy(max_tau, max_omega))


def delta2_over_q1_closed_form(max_tau, max_omega) -> TriSeries:
    """1/2 sum over n, m = 1 mod 4, l odd, N in Z with 2nm - l^2 = N^2 of sum_{a | (n,l,m)} (-4/a)."""
    terms = []
    for n, m in _window_pairs(max_tau, max_omega, 4, 2):
        if n % 4 != 1 or m % 4 != 1:
            continue
        L = isqrt(2 * m * n)
        for l in range(-L, L + 1):
            if l % 2 == 0:
                continue
            r = 2 * m * n - l * l
            if r < 0:
                continue
            s = isqrt(r)
            if s * s != r:
                continue
            count = 2 if s else 1  # N and -N
            g = gcd(gcd(abs(l), m), n)
            c = Fraction(count, 2) * sum(kronecker(-4, a) for a in divisors(g))
            if c:
                terms.append((Fraction(n, 4), Fraction(l, 2), Fraction(m, 2), simplify(c)))
    return TriSeries.from_terms(terms, TruncationPolicy(max_tau, max_omega))


def closed_form_oracle(name: str, max_tau, max_omega, variant: str = "printed") -> TriSeries:
    """Closed divisor-sum formulas: ``nabla2``, ``q1`` or ``delta2_over_q1``."""
    if name == "nabla2":
        return nabla2_closed_form(max_tau, max_omega, variant)
    if name == "q1":
        return q1_closed_form(max_tau, max_omega, variant)
    if name == "delta2_over_q1":
        return delta2_over_q1_closed_form(max_tau, max_omega)
    raise KeyError("no closed formula for %r" % name)
