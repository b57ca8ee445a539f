"""Borcherds products of weight-0 Jacobi forms on Gamma_0(N).

B_phi = q^A r^B s^C prod_{f/e} prod_{(n,l,m) > 0} (1 - (q^n r^l s^(tm))^(N_e))^((h_e/N_e) c_{f/e}(nm, l))

The product is expanded exactly inside a window tau-exponent <= max_tau,
omega-exponent <= max_omega.  The traced form rebuilds the same series
from the expansions at infinity of the traces to Gamma_0(N_e) only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

from .hecke_lift import SiegelForm
from .modular_basics import (Cusp, complete_to_sl2, cusps_gamma0, divisors, eta_product_multiplier,
                      eta_product_qexpansion, moebius, sigma)
from .series_core import TriSeries, TruncationPolicy
from .theta_jacobi import JacobiForm, get, theta_series, trace_to

FormRef = Union[str, JacobiForm]


def _form(ref: FormRef) -> JacobiForm:
    return get(ref) if isinstance(ref, str) else ref


@dataclass
class CuspData:
    cusp: Cusp
    series: TriSeries

    @property
    def h(self) -> int:
        return self.cusp.width

    @property
    def N_e(self) -> int:
        return self.cusp.N_e

    @property
    def scale(self) -> Fraction:
        return Fraction(self.cusp.width, self.cusp.N_e)

    def row(self, n) -> dict[Fraction, object]:
        """{l: c(n, l)} at the q-exponent n."""
        return {l: c for tau, l, _, c in self.series.terms() if tau == n}


@dataclass
class BorcherdsInput:
    form: JacobiForm
    cusps: list[CuspData]
    max_n: Fraction

    @property
    def t(self) -> Fraction:
        return self.form.index

    @property
    def N(self) -> int:
        return self.form.level


@dataclass(frozen=True)
class WeylData:
    A: Fraction
    B: Fraction
    C: Fraction
    k_x2: int
    D0: Fraction
    D1: Fraction

    @property
    def weight(self) -> Fraction:
        return Fraction(self.k_x2, 2)

    def to_json(self) -> dict:
        return {"A": str(self.A), "B": str(self.B), "C": str(self.C), "weight_x2": self.k_x2,
                "D0": int(self.D0) if self.D0.denominator == 1 else str(self.D0),
                "D1": str(self.D1)}


def collect_cusp_data(ref: FormRef, max_n=2) -> BorcherdsInput:
    """Expansions c_{f/e}(n, l) at every cusp of Gamma_0(N) up to q^max_n."""
    phi = _form(ref)
    if phi.weight != 0:
        raise ValueError("Borcherds products need a weight-0 input")
    max_n = Fraction(max_n)
    data = [CuspData(c, phi.cusp_expansion(c, max_n)) for c in cusps_gamma0(phi.level)]
    return BorcherdsInput(phi, data, max_n)


def _as_input(x, max_n=2) -> BorcherdsInput:
    return x if isinstance(x, BorcherdsInput) else collect_cusp_data(x, max_n)


def integrality_check(inp) -> list[tuple]:
    """Violations of (h_e/N_e) c_{f/e}(n, l) in Z for 4nt - l^2 <= 0."""
    inp = _as_input(inp)
    bad = []
    for cd in inp.cusps:
        for n, l, _, c in cd.series.terms():
            if 4 * n * inp.t - l * l <= 0:
                v = cd.scale * c
                if Fraction(v).denominator != 1:
                    bad.append((cd.cusp.label(), n, l, v))
    return bad


def is_weak(inp) -> bool:
    inp = _as_input(inp)
    return all(n >= 0 for cd in inp.cusps for n, _, _, _ in cd.series.terms())


def weyl_data(inp) -> WeylData:
    inp = _as_input(inp)
    A = B = C = K = D0 = D1 = Fraction(0)
    for cd in inp.cusps:
        for n, l, _, c in cd.series.terms():
            if n == 0:
                A += cd.h * c
                C += l * l * cd.h * c
                if l > 0:
                    B += l * cd.h * c
                if l == 0:
                    K += cd.scale * c
            elif n < 0 and n.denominator == 1:
                D1 += cd.h * sigma(1, int(-n)) * c
                if l == 0:
                    D0 += cd.scale * sigma(0, int(-n)) * c
    k = K / 2
    if (2 * k).denominator != 1:
        raise ValueError("weight %s is not in Z/2" % k)
    return WeylData(A / 24, B / 2, C / 4, int(2 * k), D0, D1)


def lemma_d1_check(inp) -> Fraction:
    """t D_1 + C - t A (zero for every nearly holomorphic input)."""
    inp = _as_input(inp)
    w = weyl_data(inp)
    return inp.t * w.D1 + w.C - inp.t * w.A


def _check_expandable(inp: BorcherdsInput) -> None:
    if not is_weak(inp):
        raise ValueError("only weak Jacobi forms are expanded (no q^n with n < 0 at any cusp)")
    bad = integrality_check(inp)
    if bad:
        raise ValueError("integrality fails at %s" % (bad[:3],))


def _factor_exponents(inp: BorcherdsInput, max_tau: Fraction, max_omega: Fraction, w: WeylData):
    """Yield ((tau, z, omega), exponent) for every factor that reaches the window."""
    t = inp.t
    for cd in inp.cusps:
        Ne, sc = cd.N_e, cd.scale
        rows: dict[int, dict] = {}
        m = 0
        while t * m * Ne + w.C <= max_omega:
            n = 0
            while n * Ne + w.A <= max_tau:
                if n * m not in rows:
                    rows[n * m] = cd.row(n * m)
                for l, c in sorted(rows[n * m].items()):
                    if m == 0 and n == 0 and l >= 0:
                        continue
                    e = sc * c
                    if 4 * n * m * t - l * l < 0 and not (e > 0 and e.denominator == 1):
                        raise ValueError("factor (1 - q^%s r^%s s^%s)^%s has a pole; "
                                         "meromorphic products are not expanded"
                                         % (n * Ne, l * Ne, t * m * Ne, e))
                    yield (n * Ne, l * Ne, t * m * Ne), e
                n += 1
            m += 1


def borcherds_expand(ref, max_tau, max_omega, name: str | None = None) -> SiegelForm:
    max_tau, max_omega = Fraction(max_tau), Fraction(max_omega)
    phi = _form(ref.form if isinstance(ref, BorcherdsInput) else ref)
    need = _needed_n(phi, max_tau, max_omega)
    inp = ref if isinstance(ref, BorcherdsInput) and ref.max_n >= need else collect_cusp_data(phi, need)
    _check_expandable(inp)
    w = weyl_data(inp)
    trunc = TruncationPolicy(max_tau, max_omega)
    out = TriSeries.monomial(w.A, w.B, w.C, 1, trunc)
    factors = list(_factor_exponents(inp, max_tau, max_omega, w))
    # polynomial factors in r first, then by increasing omega and tau
    factors.sort(key=lambda f: (f[0][2], f[0][0], f[0][1]))
    for (a, b, c), e in factors:
        out = out.mul_one_minus(a, b, c, e)
    out = out.to_rational()
    if not out.is_integral():
        raise ArithmeticError("non-integral coefficient in B_%s" % phi.name)
    return SiegelForm(name or "B(%s)" % phi.name, w.weight, phi.index, phi.level, out,
                      plus=(w.D0 % 2 == 0), meta={"weyl": w.to_json()})


def _needed_n(phi: JacobiForm, max_tau: Fraction, max_omega: Fraction) -> Fraction:
    """Largest n m whose coefficient can enter the window."""
    t = phi.index
    return Fraction(int(max_tau) * int(max_omega / t) + 1)


def leading_fj_factor(ref, max_tau) -> TriSeries:
    """prod eta(N_e tau)^(s c(0,0)) prod_{l>0} (theta(N_e tau, N_e l z)/eta(N_e tau))^(s c(0,l)),
    s = h_e/N_e, as a series in q and r (the factor s^C is not included)."""
    inp = _as_input(ref)
    max_tau = Fraction(max_tau)
    work = max_tau + 2
    wt = TruncationPolicy(work, None)
    eta: dict[int, Fraction] = {}
    thetas: list[tuple[int, int, int]] = []
    for cd in inp.cusps:
        row = cd.row(0)
        Ne, sc = cd.N_e, cd.scale
        eta[Ne] = eta.get(Ne, 0) + sc * row.get(0, 0)
        for l, c in row.items():
            if l > 0:
                e = sc * c
                if e.denominator != 1:
                    raise ValueError("non-integral theta exponent")
                eta[Ne] = eta.get(Ne, 0) - e
                thetas.append((Ne, int(l), int(e)))
    out = eta_product_qexpansion({d: r for d, r in eta.items() if r}, wt)
    for Ne, l, e in thetas:
        th = theta_series(work, Ne).rescale(1, l, 1)
        out = out * th ** e if e > 0 else out / th ** (-e)
    out = out.truncate(TruncationPolicy(max_tau, None))
    if out.trunc.max_tau is None or out.trunc.max_tau < max_tau:
        raise AssertionError("insufficient working precision for the leading factor")
    return out.to_rational()


def traced_expand(ref: FormRef, max_tau, max_omega, name: str | None = None) -> SiegelForm:
    """T_phi^(0) * prod over e | N, b | N_e of (1 - x^(be))^(mu(b) f_{N_e}(nm, l)/(be)),
    f_{N_e} the coefficients at infinity of Tr_{Gamma_0(N_e)} phi."""
    phi = _form(ref)
    max_tau, max_omega = Fraction(max_tau), Fraction(max_omega)
    t, N = phi.index, phi.level
    inp = collect_cusp_data(phi, 1)
    w = weyl_data(inp)
    trunc = TruncationPolicy(max_tau, max_omega)
    agg: dict[tuple, Fraction] = {}
    need = _needed_n(phi, max_tau, max_omega)
    for e in divisors(N):
        Ne = N // e
        psi = phi if Ne == N else trace_to(phi, Ne)
        f = psi.expansion(need)
        for b in divisors(Ne):
            mu = moebius(b)
            if not mu:
                continue
            j = b * e
            m = 1
            while t * m * j + w.C <= max_omega:
                n = 0
                while n * j + w.A <= max_tau:
                    for tau, l, _, c in f.terms():
                        if tau == n * m:
                            key = (n * j, l * j, t * m * j)
                            agg[key] = agg.get(key, 0) + Fraction(mu * c, j)
                    n += 1
                m += 1
    bad = [(k, v) for k, v in agg.items() if v.denominator != 1]
    if bad:
        raise ValueError("non-integral aggregate exponents: %s" % bad[:3])
    lead = leading_fj_factor(inp, max_tau)
    out = TriSeries(lead.coeffs, lead.den, TruncationPolicy(max_tau, None)).shift(0, 0, w.C)
    out = TriSeries(out.coeffs, out.den, trunc).truncate(trunc)
    for (a, b, c) in sorted(agg, key=lambda k: (k[2], k[0], k[1])):
        if agg[(a, b, c)]:
            out = out.mul_one_minus(a, b, c, agg[(a, b, c)])
    out = out.to_rational()
    return SiegelForm(name or "Btr(%s)" % phi.name, w.weight, t, N, out)


def _gamma0_sample(N: int, size: int = 12) -> list:
    out = [(1, 1, 0, 1), (-1, 0, 0, -1)]
    for k in range(1, size + 1):
        c = N * k
        for d in range(-size - 1, size + 2):
            if d and gcd(c, d) == 1:
                out.append(complete_to_sl2(c, d))
                out.append(complete_to_sl2(-c, d))
    return out


def character_data(ref) -> dict:
    """Eta-product exponents, Heisenberg parities, central value and the order of the character."""
    inp = _as_input(ref)
    w = weyl_data(inp)
    eta: dict[int, Fraction] = {}
    heis: dict[int, Fraction] = {}
    for cd in inp.cusps:
        row = cd.row(0)
        eta[cd.N_e] = eta.get(cd.N_e, 0) + cd.scale * sum(row.values())
        heis[cd.N_e] = heis.get(cd.N_e, 0) + cd.scale * sum(l * c for l, c in row.items() if l > 0)
    eta = {d: r for d, r in eta.items() if r}
    phases = {eta_product_multiplier(eta, g) for g in _gamma0_sample(inp.N)} if eta else {Fraction(0)}
    center = (w.C / inp.t) % 1
    order = 1
    for ph in list(phases) + [center] + [Fraction(h % 2, 2) for h in heis.values()]:
        d = Fraction(ph).denominator
        order = order * d // gcd(order, d)
    return {"eta": {str(d): str(r) for d, r in sorted(eta.items())},
            "heisenberg": {str(d): str(r) for d, r in sorted(heis.items())},
            "center": str(center), "vt_sign": 1 if w.D0 % 2 == 0 else -1, "order": order}
