"""Jacobi theta functions, the xi-function calculus and Jacobi forms.

``xi^(N)_{a,b}(tau, z) = theta_{a,b}(tau, z) / theta_{a,b}(tau, 0)`` is a
weight-0 index-1/2 Jacobi form for Gamma(N).  Products of xi's give the
weight-0 forms whose expansions at every cusp feed the Borcherds products.
Expansions at a cusp are computed symbolically: the cusp matrix is written as a
word in S and T and each generator permutes the characteristics.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Optional, Sequence

from .cyclotomic import Cyclo, simplify
from .modular_basics import (CharacterId, Cusp, Mat, cusps_gamma0, coset_reps, gamma0_mod,
                      kronecker, mat_mul, sigma, st_decompose)
from .series_core import TriSeries, TruncationPolicy


# ----------------------------------------------------------------- thetas
def theta_series(max_tau, c: int = 1) -> TriSeries:
    """theta(c tau, c z) = sum_m (-4/m) q^(c m^2/8) r^(c m/2), to q^max_tau."""
    max_tau = Fraction(max_tau)
    terms = []
    m = 1
    while Fraction(c * m * m, 8) <= max_tau:
        for mm in (m, -m):
            terms.append((Fraction(c * mm * mm, 8), Fraction(c * mm, 2), 0, kronecker(-4, mm)))
        m += 2
    return TriSeries.from_terms(terms, TruncationPolicy(max_tau, None))


def theta_product_series(max_tau) -> TriSeries:
    """Jacobi triple product -q^(1/8) r^(-1/2) prod (1 - q^(n-1) r)(1 - q^n r^-1)(1 - q^n)."""
    max_tau = Fraction(max_tau)
    tr = TruncationPolicy(max_tau - Fraction(1, 8), None)
    s = TriSeries.one(tr).mul_one_minus(0, 1, 0, 1)
    n = 1
    while n <= tr.max_tau:
        s = s.mul_one_minus(n, 1, 0, 1).mul_one_minus(n, -1, 0, 1).mul_one_minus(n, 0, 0, 1)
        n += 1
    return -s.shift(Fraction(1, 8), Fraction(-1, 2))


def theta00_series(max_tau) -> TriSeries:
    """theta_00(tau, z) = sum_n q^(n^2/2) r^n."""
    max_tau = Fraction(max_tau)
    terms = [(0, 0, 0, 1)]
    n = 1
    while Fraction(n * n, 2) <= max_tau:
        terms += [(Fraction(n * n, 2), n, 0, 1), (Fraction(n * n, 2), -n, 0, 1)]
        n += 1
    return TriSeries.from_terms(terms, TruncationPolicy(max_tau, None))


def theta_char_series(N: int, a: int, b: int, max_tau) -> TriSeries:
    """theta^(N)_{a,b}(tau, z) with exact phases.

    Obtained from theta_00 by the substitution
    theta_{a,b} = e(ab/N^2) q^(a^2/2N^2) r^(a/N) theta_00(tau, z + a tau/N + b/N):
    the term q^(n^2/2) r^n picks up q^(na/N) e(nb/N).
    """
    max_tau = Fraction(max_tau)
    order = N * N
    terms = []
    # enough n to cover all exponents (n + a/N)^2/2 <= max_tau
    bound = int((2 * max_tau) ** 0.5) + abs(a) // N + 2
    for n in range(-bound - 1, bound + 2):
        x = Fraction(n * N + a, N)
        e_tau = x * x / 2
        if e_tau > max_tau:
            continue
        phase = Cyclo.root((a * b + n * b * N) % order, order)
        terms.append((e_tau, x, 0, phase))
    return TriSeries.from_terms(terms, TruncationPolicy(max_tau, None))


def theta_numeric(tau: complex, z: complex, terms: int = 60) -> complex:
    s = 0
    for m in range(-2 * terms - 1, 2 * terms + 2, 2):
        s += kronecker(-4, m) * cmath.exp(1j * cmath.pi * (m * m * tau / 4 + m * z))
    return s


def theta_char_numeric(N: int, a: int, b: int, tau: complex, z: complex, terms: int = 60) -> complex:
    s = 0
    for n in range(-terms, terms + 1):
        x = n + a / N
        s += cmath.exp(1j * cmath.pi * x * x * tau + 2j * cmath.pi * x * (z + b / N))
    return s


# -------------------------------------------------------------- xi symbols
@dataclass(frozen=True, order=True)
class XiSymbol:
    """xi^(N)_{a,b}(tau, c z), stored at an even level with a, b reduced mod N."""

    N: int
    a: int
    b: int
    zscale: int = 1

    @classmethod
    def make(cls, N: int, a: int, b: int, zscale: int = 1) -> "XiSymbol":
        if N % 2:
            N, a, b = 2 * N, 2 * a, 2 * b
        a, b = a % N, b % N
        if a == N // 2 and b == N // 2:
            raise ValueError("xi^(%d)_{%d,%d} is not defined" % (N, a, b))
        return cls(N, a, b, zscale)

    def at_level(self, M: int) -> "XiSymbol":
        if M % self.N:
            raise ValueError("level must be a multiple")
        k = M // self.N
        return XiSymbol(M, self.a * k, self.b * k, self.zscale)

    def transform(self, g: str) -> "XiSymbol":
        N, a, b = self.N, self.a, self.b
        h = N // 2
        if g == "S":
            return XiSymbol.make(N, b, -a, self.zscale)
        if g == "T":
            return XiSymbol.make(N, a, a + b + h, self.zscale)
        if g == "Ti":
            return XiSymbol.make(N, a, b - a - h, self.zscale)
        if g == "-I":
            return XiSymbol.make(N, -a, -b, self.zscale)
        raise ValueError("unknown generator %r" % g)

    def heisenberg_phase(self, lam: int, mu: int) -> Fraction:
        """xi | [lam, mu; 0] = e(phase) xi, phase = (a mu' - b lam')/N, scaled by c."""
        c = self.zscale
        return Fraction(self.a * c * mu - self.b * c * lam, self.N) % 1

    def label(self) -> str:
        z = "z" if self.zscale == 1 else "%dz" % self.zscale
        return "xi^(%d)_{%d,%d}(tau,%s)" % (self.N, self.a, self.b, z)


@lru_cache(maxsize=None)
def _xi_series_cached(N: int, a: int, b: int, max_tau: Fraction) -> TriSeries:
    a_c = a if 2 * a <= N else a - N
    v = Fraction(a_c * a_c, 2 * N * N)
    num = theta_char_series(N, a, b, v + max_tau)
    den = num.at_z_zero()
    out = num / den
    return out


def xi_series(sym: XiSymbol, max_tau) -> TriSeries:
    s = _xi_series_cached(sym.N, sym.a, sym.b, Fraction(max_tau))
    if sym.zscale != 1:
        s = s.rescale(1, sym.zscale, 1)
    return s


def xi_numeric(sym: XiSymbol, tau: complex, z: complex) -> complex:
    zz = z * sym.zscale
    return (theta_char_numeric(sym.N, sym.a, sym.b, tau, zz)
            / theta_char_numeric(sym.N, sym.a, sym.b, tau, 0))


# ------------------------------------------------------------- products
def _as_number(c):
    return c


@dataclass(frozen=True)
class XiProduct:
    """coeff * prod of xi factors; ``coeff`` is rational or cyclotomic."""

    coeff: object
    factors: tuple[XiSymbol, ...]

    @classmethod
    def make(cls, coeff, factors: Iterable[XiSymbol]) -> "XiProduct":
        return cls(coeff, tuple(sorted(factors)))

    @property
    def index(self) -> Fraction:
        return sum((Fraction(f.zscale * f.zscale, 2) for f in self.factors), Fraction(0))

    def transform(self, g: str) -> "XiProduct":
        return XiProduct.make(self.coeff, [f.transform(g) for f in self.factors])

    def slash(self, x: Mat) -> "XiProduct":
        out = self
        for g in st_decompose(x):
            out = out.transform(g)
        return out

    def heisenberg(self, lam: int, mu: int) -> "XiProduct":
        ph = sum((f.heisenberg_phase(lam, mu) for f in self.factors), Fraction(0)) % 1
        c = self.coeff
        if ph:
            c = c * Cyclo.root(ph.numerator, ph.denominator)
        return XiProduct(simplify(c), self.factors)

    def series(self, max_tau) -> TriSeries:
        out = TriSeries.one(TruncationPolicy(Fraction(max_tau), None))
        for f in self.factors:
            out = out * xi_series(f, max_tau)
        return out.scale(self.coeff)

    def numeric(self, tau: complex, z: complex) -> complex:
        v = complex(self.coeff) if isinstance(self.coeff, Cyclo) else complex(float(self.coeff))
        for f in self.factors:
            v *= xi_numeric(f, tau, z)
        return v

    def label(self) -> str:
        return "%s*%s" % (self.coeff, "*".join(f.label() for f in self.factors))


@dataclass(frozen=True)
class XiSum:
    """A finite sum of xi-products; like terms are merged."""

    terms: tuple[XiProduct, ...]

    @classmethod
    def make(cls, terms: Iterable[XiProduct]) -> "XiSum":
        acc: dict[tuple[XiSymbol, ...], object] = {}
        for t in terms:
            acc[t.factors] = acc.get(t.factors, 0) + t.coeff
        out = [XiProduct(simplify(c), f) for f, c in sorted(acc.items()) if c]
        return cls(tuple(out))

    def slash(self, x: Mat) -> "XiSum":
        return XiSum.make(t.slash(x) for t in self.terms)

    def heisenberg(self, lam: int, mu: int) -> "XiSum":
        return XiSum.make(t.heisenberg(lam, mu) for t in self.terms)

    def __add__(self, other: "XiSum") -> "XiSum":
        return XiSum.make(self.terms + other.terms)

    def series(self, max_tau) -> TriSeries:
        out = TriSeries.zero(TruncationPolicy(Fraction(max_tau), None))
        for t in self.terms:
            out = out + t.series(max_tau)
        return out.to_rational() if all(_rational_ok(c) for c in out.coeffs.values()) else out

    def numeric(self, tau: complex, z: complex) -> complex:
        return sum(t.numeric(tau, z) for t in self.terms)

    @property
    def index(self) -> Fraction:
        return self.terms[0].index if self.terms else Fraction(0)


def _rational_ok(c) -> bool:
    return not isinstance(c, Cyclo) or c.is_rational()


def xi_transform(p: XiProduct, word: Sequence[str]) -> XiProduct:
    for g in word:
        p = p.transform(g)
    return p


def xi_orbit(sym: XiSymbol, level: int, generators: Sequence[Mat] | None = None) -> list[XiSymbol]:
    """Orbit of a xi symbol under Gamma_0(level) (under ``generators`` if given)."""
    M = sym.N
    if generators is None:
        m = M * level // gcd(M, level)
        generators = gamma0_mod(level, m)
    words = [st_decompose(g) for g in generators]
    seen = {sym}
    frontier = [sym]
    while frontier:
        nxt = []
        for s in frontier:
            for w in words:
                t = s
                for g in w:
                    t = t.transform(g)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen)


def slash_numeric(f: Callable[[complex, complex], complex], x: Mat, index, tau: complex,
                  z: complex) -> complex:
    """(f |_{0, index} x)(tau, z)."""
    a, b, c, d = x
    j = c * tau + d
    return cmath.exp(-2j * cmath.pi * float(index) * c * z * z / j) * f((a * tau + b) / j, z / j)


def heisenberg_numeric(f, lam: int, mu: int, index, tau: complex, z: complex) -> complex:
    t = float(index)
    return cmath.exp(2j * cmath.pi * t * (lam * lam * tau + 2 * lam * z)) * f(tau, z + lam * tau + mu)


# ----------------------------------------------------------- Jacobi forms
@dataclass
class JacobiForm:
    """A Jacobi form with its expansion at infinity (and at every cusp for xi-sums).

    ``builder(max_tau)`` returns the expansion at infinity as a series in q, r.
    """

    name: str
    weight: Fraction
    index: Fraction
    level: int
    character: Optional[CharacterId] = None
    xi: Optional[XiSum] = None
    builder: Optional[Callable[[Fraction], TriSeries]] = None
    description: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def weight_x2(self) -> int:
        return int(2 * self.weight)

    @property
    def index_x2(self) -> int:
        return int(2 * self.index)

    def expansion(self, max_tau) -> TriSeries:
        max_tau = Fraction(max_tau)
        key = ("inf", max_tau)
        if key not in self._cache:
            if self.xi is not None:
                s = self.xi.series(max_tau)
            elif self.builder is not None:
                s = self.builder(max_tau)
            else:  # pragma: no cover
                raise ValueError("form has no expansion")
            self._cache[key] = s
        return self._cache[key]

    def cusp_expansion(self, cusp: Cusp, max_tau) -> TriSeries:
        """Expansion of ``self | M_{f/e}``; needs a xi-sum description."""
        if cusp.is_infinity:
            return self.expansion(max_tau)
        if self.xi is None:
            raise ValueError("cusp expansions need a xi-sum description")
        max_tau = Fraction(max_tau)
        key = (cusp.e, cusp.f, max_tau)
        if key not in self._cache:
            s = self.xi.slash(cusp.matrix()).series(max_tau)
            self._cache[key] = s.to_rational()
        return self._cache[key]

    def cusp_table(self, max_tau) -> dict[Cusp, TriSeries]:
        return {c: self.cusp_expansion(c, max_tau) for c in cusps_gamma0(self.level)}

    def q_chi(self) -> int:
        """Smallest q with tau-exponents in 1/q + Z (1 for integral exponents)."""
        s = self.expansion(Fraction(4))
        fr = {t % 1 for t, _, _, _ in s.terms()}
        if len(fr) != 1:
            raise ValueError("tau-exponents of %s lie in several classes mod 1" % self.name)
        f = fr.pop()
        if f and f.numerator != 1:
            raise ValueError("tau-exponents of %s are not in 1/q + Z" % self.name)
        return f.denominator

    def numeric(self, tau: complex, z: complex) -> complex:
        if self.xi is None:
            raise ValueError("numeric evaluation needs a xi-sum")
        return self.xi.numeric(tau, z)


def weight0_from_xi(name: str, xi: XiSum, level: int, description: str = "") -> JacobiForm:
    return JacobiForm(name, Fraction(0), xi.index, level, CharacterId("trivial", level), xi=xi,
                      description=description)


def trace_to(form: JacobiForm, target: int, name: str | None = None) -> JacobiForm:
    """Tr from Gamma_0(level) to Gamma_0(target): sum of form | g over coset reps."""
    if form.xi is None:
        raise ValueError("trace needs a xi-sum")
    reps = coset_reps(form.level, target)
    total = XiSum(())
    for g in reps:
        total = total + form.xi.slash(g)
    return weight0_from_xi(name or "Tr_%d(%s)" % (target, form.name), total, target)


def trace_coefficients_from_cusps(form: JacobiForm, max_tau) -> TriSeries:
    """sum_{f/e} h_e c_{f/e}(n, l) over integral n: the trace to SL_2(Z) at infinity."""
    total = TriSeries.zero(TruncationPolicy(Fraction(max_tau), None))
    for cusp in cusps_gamma0(form.level):
        s = form.cusp_expansion(cusp, max_tau)
        integral = TriSeries({k: c for k, c in s.coeffs.items() if k[0] % s.den[0] == 0},
                             s.den, s.trunc)
        total = total + integral.scale(cusp.width)
    return total


def weight2_constant_check(expansion: TriSeries, index) -> Fraction:
    """t sum c(0,l) - 24 t sum_{n<0} sigma_1(-n) c(n,l) - 6 sum l^2 c(0,l); zero for SL_2 forms."""
    t = Fraction(index)
    total = Fraction(0)
    for e_tau, e_z, _, c in expansion.terms():
        if e_tau == 0:
            total += t * c - 6 * e_z * e_z * c
        elif e_tau < 0:
            if e_tau.denominator != 1:
                continue
            total -= 24 * t * sigma(1, int(-e_tau)) * c
    return total


# ------------------------------------------------------ eta-theta products
def eta_theta_builder(eta: dict[int, object], thetas: dict[int, int]) -> Callable[[Fraction], TriSeries]:
    """Builder for prod eta(d tau)^r_d * prod theta(c tau, c z)^e_c."""
    from .modular_basics import eta_product_qexpansion

    def build(max_tau):
        max_tau = Fraction(max_tau)
        # leading exponents to decide the working precision of each factor
        lead_eta = sum(Fraction(d) * Fraction(r) for d, r in eta.items()) / 24
        lead_th = sum(Fraction(c, 8) * e for c, e in thetas.items())
        num = [(c, e) for c, e in thetas.items() if e > 0]
        den = [(c, -e) for c, e in thetas.items() if e < 0]
        lead_den = sum(Fraction(c, 8) * e for c, e in den)
        work = max_tau + abs(lead_eta) + abs(lead_th) + 2 * lead_den + 1
        out = eta_product_qexpansion(eta, TruncationPolicy(work, None)) if eta else \
            TriSeries.one(TruncationPolicy(work, None))
        for c, e in num:
            out = out * theta_series(work, c) ** e
        for c, e in den:
            out = out / (theta_series(work, c) ** e)
        out = out.truncate(TruncationPolicy(max_tau, None))
        if out.trunc.max_tau is None or out.trunc.max_tau < max_tau:
            raise AssertionError("insufficient working precision")
        return out

    return build


def eta_theta_form(name, weight, index, level, character, eta, thetas, description=""):
    return JacobiForm(name, Fraction(weight), Fraction(index), level, character,
                      builder=eta_theta_builder(eta, thetas), description=description)


# ------------------------------------------------------------- registry
def _xi(N, a, b, c=1):
    return XiSymbol.make(N, a, b, c)


def _p(coeff, *syms):
    return XiProduct.make(coeff, syms)


def _build_registry() -> dict[str, Callable[[], JacobiForm]]:
    from .modular_basics import CharacterId as C, legendre3, minus4, trivial

    reg: dict[str, Callable[[], JacobiForm]] = {}

    def weight0(name, level, terms, desc):
        reg[name] = lambda: weight0_from_xi(name, XiSum.make(terms), level, desc)

    weight0("phi2", 2, [_p(4, _xi(2, 1, 0), _xi(2, 1, 0))], "4 xi_{1,0}^2, Gamma_0(2), index 1")
    weight0("phi3", 3, [_p(3, _xi(6, 3, 1), _xi(6, 3, 5))], "3 xi_{3,1} xi_{3,5}, Gamma_0(3), index 1")
    weight0("phi4", 4, [_p(2, _xi(4, 2, 1), _xi(4, 2, 3))], "2 xi_{2,1} xi_{2,3}, Gamma_0(4), index 1")
    weight0("psi", 2, [_p(2, _xi(2, 1, 0, 2))], "2 xi_{1,0}(tau, 2z), Gamma_0(2), index 2")
    reg["phi01"] = lambda: trace_to(get("phi2"), 1, "phi01")
    reg["phi02"] = lambda: trace_to(get("psi"), 1, "phi02")

    def et(name, weight, index, level, chi, eta, thetas, desc):
        reg[name] = lambda: eta_theta_form(name, weight, index, level, chi, eta, thetas, desc)

    et("eta9_theta", 5, Fraction(1, 2), 1, C("eta_power", 1, (12,)), {1: 9}, {1: 1}, "eta^9 theta")
    et("eta3_theta", 2, Fraction(1, 2), 1, C("eta_power", 1, (6,)), {1: 3}, {1: 1}, "eta^3 theta")
    et("eta_theta", 1, Fraction(1, 2), 1, C("eta_power", 1, (4,)), {1: 1}, {1: 1}, "eta theta")
    et("nabla3_seed", 3, Fraction(1, 2), 2, C("chi2_2", 2), {1: 1, 2: 4}, {1: 1},
       "eta(tau) eta(2tau)^4 theta")
    et("q1_seed", 1, Fraction(1, 2), 2, C("chi4_2", 2), {1: -1, 2: 2}, {1: 1},
       "eta(2tau)^2/eta(tau) theta")
    et("nabla2_seed", 2, Fraction(1, 2), 3, C("chi2_3", 3), {3: 3}, {1: 1}, "eta(3tau)^3 theta")
    et("h32", Fraction(3, 2), Fraction(1, 2), 4, None, {1: -1, 2: 1, 4: 2}, {1: 1},
       "eta(2tau) eta(4tau)^2/eta(tau) theta")
    et("h32_sq", 3, 1, 4, C("chi2_4", 4), {1: -2, 2: 2, 4: 4}, {1: 2},
       "(eta(2tau) eta(4tau)^2/eta(tau) theta)^2")
    et("nabla3_sq_seed", 6, 1, 2, trivial(2), {1: 2, 2: 8}, {1: 2}, "eta^2 eta(2tau)^8 theta^2")
    et("nabla2_sq_seed", 4, 1, 3, trivial(3), {3: 6}, {1: 2}, "eta(3tau)^6 theta^2")
    et("q1_sq_seed", 2, 1, 2, C("chi2_2", 2), {1: -2, 2: 4}, {1: 2}, "eta(2tau)^4/eta^2 theta^2")
    et("q1_4th_seed", 4, 2, 2, trivial(2), {1: -4, 2: 8}, {1: 4}, "eta(2tau)^8/eta^4 theta^4")
    et("phi2_half", 2, Fraction(1, 2), 2, C("chi2_2b", 2), {1: -1, 2: 5}, {2: 1, 1: -1},
       "eta(2tau)^5/eta(tau) theta(2tau,2z)/theta(tau,z)")
    et("phi2_half_sq", 4, 1, 2, trivial(2), {1: -2, 2: 10}, {2: 2, 1: -2},
       "(eta(2tau)^5/eta(tau) theta(2tau,2z)/theta(tau,z))^2")
    et("phi31", 3, 1, 3, legendre3(3), {3: 6}, {3: 1, 1: -1}, "eta(3tau)^6 theta(3tau,3z)/theta(tau,z)")
    et("phi1_half", 1, Fraction(1, 2), 2, C("chi4_level2_t2", 2), {1: 1, 2: 1}, {2: 1, 1: -1},
       "eta(2tau) eta(tau) theta(2tau,2z)/theta(tau,z)")
    return reg


_REGISTRY: dict[str, Callable[[], JacobiForm]] = {}
_INSTANCES: dict[str, JacobiForm] = {}


def registry() -> dict[str, Callable[[], JacobiForm]]:
    if not _REGISTRY:
        _REGISTRY.update(_build_registry())
    return _REGISTRY


def get(name: str) -> JacobiForm:
    """A named Jacobi form (instances are shared, expansions cached)."""
    if name not in _INSTANCES:
        reg = registry()
        if name not in reg:
            raise KeyError("unknown Jacobi form %r" % name)
        _INSTANCES[name] = reg[name]()
    return _INSTANCES[name]


def eval_numeric(name: str, tau: complex, z: complex) -> complex:
    """Numerical value of a registry form given by xi-products."""
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    return get(name).numeric(tau, z)
