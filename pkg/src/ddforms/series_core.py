"""Truncated Laurent series in q = e(tau), r = e(z), s = e(omega).

A :class:`TriSeries` stores exact coefficients on scaled integer exponents:
the monomial ``q^(n/den_tau) r^(l/den_z) s^(m/den_omega)`` sits under the key
``(n, l, m)``.  Zero coefficients are never stored.  Every series carries a
:class:`TruncationPolicy` saying up to which tau- and omega-exponent its
coefficients are known; the operations below propagate those bounds so that a
result never claims coefficients it cannot know.

Coefficients are ``int``, :class:`fractions.Fraction`, or
:class:`~ddforms.cyclotomic.Cyclo` (for theta functions with characteristics).
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, floor
from typing import Iterable, Iterator, Optional

from .cyclotomic import Cyclo, simplify

Key = tuple[int, int, int]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _min_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_opt(a, b):
    if a is None or b is None:
        return None
    return a + b


@dataclass(frozen=True)
class TruncationPolicy:
    """Precision of a series.

    ``max_tau`` and ``max_omega`` are inclusive bounds on the true exponents of
    q and s (``None`` means exact in that variable).  ``max_abs_z`` bounds
    ``|exponent of r|``; a z-truncated series is a display object only and
    refuses multiplication, because truncating a Laurent variable does not
    commute with products.
    """

    max_tau: Optional[Fraction] = None
    max_omega: Optional[Fraction] = None
    max_abs_z: Optional[Fraction] = None

    def __post_init__(self):
        for name in ("max_tau", "max_omega", "max_abs_z"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))

    def meet(self, other: "TruncationPolicy") -> "TruncationPolicy":
        return TruncationPolicy(_min_opt(self.max_tau, other.max_tau),
                                _min_opt(self.max_omega, other.max_omega),
                                _min_opt(self.max_abs_z, other.max_abs_z))

    def scaled(self, c_tau, c_omega, c_z=1) -> "TruncationPolicy":
        mul = lambda v, c: None if v is None else v * c
        return TruncationPolicy(mul(self.max_tau, c_tau), mul(self.max_omega, c_omega),
                                mul(self.max_abs_z, abs(c_z)))

    def admits(self, tau, z, omega) -> bool:
        return ((self.max_tau is None or tau <= self.max_tau)
                and (self.max_omega is None or omega <= self.max_omega)
                and (self.max_abs_z is None or abs(z) <= self.max_abs_z))

    def to_json(self):
        s = lambda v: None if v is None else str(v)
        return {"max_tau": s(self.max_tau), "max_omega": s(self.max_omega),
                "max_abs_z": s(self.max_abs_z)}

    @classmethod
    def from_json(cls, d):
        g = lambda k: None if d.get(k) is None else Fraction(d[k])
        return cls(g("max_tau"), g("max_omega"), g("max_abs_z"))


EXACT = TruncationPolicy()


def _clean_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class TriSeries:
    """Exact truncated series in q, r, s."""

    __slots__ = ("den", "coeffs", "trunc")

    def __init__(self, coeffs: dict[Key, object] | None = None, den=(1, 1, 1),
                 trunc: TruncationPolicy = EXACT):
        den = tuple(int(d) for d in den)
        if min(den) < 1:
            raise ValueError("denominators must be positive")
        self.trunc = trunc
        bn = None if trunc.max_tau is None else floor(trunc.max_tau * den[0])
        bm = None if trunc.max_omega is None else floor(trunc.max_omega * den[2])
        bl = None if trunc.max_abs_z is None else floor(trunc.max_abs_z * den[1])
        clean = {}
        for (n, l, m), c in (coeffs or {}).items():
            if not c:
                continue
            if (bn is not None and n > bn) or (bm is not None and m > bm) or \
                    (bl is not None and abs(l) > bl):
                continue
            clean[(n, l, m)] = _clean_coeff(c)
        # keep denominators minimal so that equal series serialize equally
        g = [den[0], den[1], den[2]]
        for key in clean:
            for i in range(3):
                if g[i] > 1:
                    g[i] = gcd(g[i], key[i])
        if g != [1, 1, 1]:
            clean = {(n // g[0], l // g[1], m // g[2]): c for (n, l, m), c in clean.items()}
            den = (den[0] // g[0], den[1] // g[1], den[2] // g[2])
        self.den = den
        self.coeffs = clean

    # ------------------------------------------------------------------ build
    @classmethod
    def from_terms(cls, terms: Iterable[tuple], trunc: TruncationPolicy = EXACT) -> "TriSeries":
        """Build from ``(tau, z, omega, coeff)`` tuples with rational exponents.

        Repeated monomials are summed.
        """
        terms = [(_frac(t), _frac(z), _frac(w), c) for t, z, w, c in terms]
        den = [1, 1, 1]
        for t, z, w, _ in terms:
            den[0] = _lcm(den[0], t.denominator)
            den[1] = _lcm(den[1], z.denominator)
            den[2] = _lcm(den[2], w.denominator)
        out: dict[Key, object] = {}
        for t, z, w, c in terms:
            key = (int(t * den[0]), int(z * den[1]), int(w * den[2]))
            out[key] = out.get(key, 0) + c
        return cls(out, den, trunc)

    @classmethod
    def monomial(cls, tau=0, z=0, omega=0, coeff=1, trunc: TruncationPolicy = EXACT):
        return cls.from_terms([(tau, z, omega, coeff)], trunc)

    @classmethod
    def zero(cls, trunc: TruncationPolicy = EXACT):
        return cls({}, (1, 1, 1), trunc)

    @classmethod
    def one(cls, trunc: TruncationPolicy = EXACT):
        return cls({(0, 0, 0): 1}, (1, 1, 1), trunc)

    # ---------------------------------------------------------------- access
    @property
    def den_tau(self):
        return self.den[0]

    @property
    def den_z(self):
        return self.den[1]

    @property
    def den_omega(self):
        return self.den[2]

    def sort_key(self, key: Key):
        return (key[2], key[0], key[1])

    def keys_sorted(self) -> list[Key]:
        return sorted(self.coeffs, key=self.sort_key)

    def terms(self) -> Iterator[tuple[Fraction, Fraction, Fraction, object]]:
        """Yield ``(tau, z, omega, coeff)`` in key order (omega, tau, z)."""
        dt, dz, dw = self.den
        for n, l, m in self.keys_sorted():
            yield Fraction(n, dt), Fraction(l, dz), Fraction(m, dw), self.coeffs[(n, l, m)]

    def coeff(self, tau=0, z=0, omega=0):
        tau, z, omega = _frac(tau), _frac(z), _frac(omega)
        dt, dz, dw = self.den
        n, l, m = tau * dt, z * dz, omega * dw
        if n.denominator != 1 or l.denominator != 1 or m.denominator != 1:
            return 0
        return self.coeffs.get((int(n), int(l), int(m)), 0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return self.terms()

    def is_zero(self) -> bool:
        return not self.coeffs

    def val_tau(self) -> Optional[Fraction]:
        if not self.coeffs:
            return None
        return Fraction(min(k[0] for k in self.coeffs), self.den[0])

    def val_omega(self) -> Optional[Fraction]:
        if not self.coeffs:
            return None
        return Fraction(min(k[2] for k in self.coeffs), self.den[2])

    def max_tau_present(self) -> Optional[Fraction]:
        if not self.coeffs:
            return None
        return Fraction(max(k[0] for k in self.coeffs), self.den[0])

    # --------------------------------------------------------- denominators
    def with_den(self, den) -> "TriSeries":
        """Same series with keys scaled to the (multiple) denominators ``den``."""
        f = [d // s for d, s in zip(den, self.den)]
        if any(d % s for d, s in zip(den, self.den)):
            raise ValueError("new denominators must be multiples of the old ones")
        obj = TriSeries.__new__(TriSeries)
        obj.den = tuple(den)
        obj.trunc = self.trunc
        obj.coeffs = {(n * f[0], l * f[1], m * f[2]): c for (n, l, m), c in self.coeffs.items()}
        return obj

    @staticmethod
    def common_den(*series: "TriSeries"):
        den = [1, 1, 1]
        for s in series:
            den = [_lcm(a, b) for a, b in zip(den, s.den)]
        return tuple(den)

    # ------------------------------------------------------------ arithmetic
    def _binary_prepare(self, other):
        if not isinstance(other, TriSeries):
            other = TriSeries.one(EXACT).scale(other)
        den = TriSeries.common_den(self, other)
        return self.with_den(den), other.with_den(den), den

    def __add__(self, other):
        if not isinstance(other, TriSeries):
            if other == 0:
                return self
            other = TriSeries.one().scale(other)
        a, b, den = self._binary_prepare(other)
        out = dict(a.coeffs)
        for k, c in b.coeffs.items():
            out[k] = out.get(k, 0) + c
        return TriSeries(out, den, self.trunc.meet(other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return TriSeries({k: -c for k, c in self.coeffs.items()}, self.den, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TriSeries":
        """Multiply every coefficient by the scalar ``c``."""
        if not c:
            return TriSeries({}, self.den, self.trunc)
        return TriSeries({k: v * c for k, v in self.coeffs.items()}, self.den, self.trunc)

    def map_coeffs(self, f) -> "TriSeries":
        return TriSeries({k: f(v) for k, v in self.coeffs.items()}, self.den, self.trunc)

    def shift(self, tau=0, z=0, omega=0) -> "TriSeries":
        """Multiply by the monomial q^tau r^z s^omega (truncation moves along)."""
        m = TriSeries.monomial(tau, z, omega)
        return self * m

    def _slices(self):
        out: dict[tuple[int, int], dict[int, object]] = {}
        for (n, l, m), c in self.coeffs.items():
            out.setdefault((n, m), {})[l] = c
        return out

    def _product_trunc(self, other) -> TruncationPolicy:
        if self.trunc.max_abs_z is not None or other.trunc.max_abs_z is not None:
            raise ValueError("z-truncated series cannot be multiplied")
        vt_a, vt_b = self.val_tau(), other.val_tau()
        vw_a, vw_b = self.val_omega(), other.val_omega()
        if vt_a is None or vt_b is None:
            # an exact or truncated zero factor
            zero_side = self if vt_a is None else other
            rest = other if vt_a is None else self
            return TruncationPolicy(
                _add_opt(zero_side.trunc.max_tau, rest.val_tau()) if rest.coeffs else zero_side.trunc.max_tau,
                _add_opt(zero_side.trunc.max_omega, rest.val_omega()) if rest.coeffs else zero_side.trunc.max_omega)
        return TruncationPolicy(
            _min_opt(_add_opt(self.trunc.max_tau, vt_b), _add_opt(other.trunc.max_tau, vt_a)),
            _min_opt(_add_opt(self.trunc.max_omega, vw_b), _add_opt(other.trunc.max_omega, vw_a)))

    def __mul__(self, other):
        if not isinstance(other, TriSeries):
            return self.scale(other)
        trunc = self._product_trunc(other)
        a, b, den = self._binary_prepare(other)
        if not a.coeffs or not b.coeffs:
            return TriSeries({}, den, trunc)
        bn = None if trunc.max_tau is None else floor(trunc.max_tau * den[0])
        bm = None if trunc.max_omega is None else floor(trunc.max_omega * den[2])
        sa = sorted(a._slices().items())
        sb = sorted(b._slices().items(), key=lambda kv: (kv[0][1], kv[0][0]))
        out: dict[tuple[int, int], dict[int, object]] = {}
        for (n1, m1), la in sa:
            for (n2, m2), lb in sb:
                n, m = n1 + n2, m1 + m2
                if bm is not None and m > bm:
                    break
                if bn is not None and n > bn:
                    continue
                tgt = out.setdefault((n, m), {})
                for l1, c1 in la.items():
                    for l2, c2 in lb.items():
                        l = l1 + l2
                        tgt[l] = tgt.get(l, 0) + c1 * c2
        flat = {(n, l, m): c for (n, m), row in out.items() for l, c in row.items()}
        return TriSeries(flat, den, trunc)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TriSeries":
        if not isinstance(e, int):
            return self.pow_rational(e)
        if e < 0:
            return TriSeries.one(self.trunc) / (self ** (-e))
        result = TriSeries.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def pow_rational(self, alpha) -> "TriSeries":
        """``self ** alpha`` by the binomial series; needs constant term 1."""
        alpha = _frac(alpha)
        if alpha.denominator == 1 and alpha >= 0:
            return self ** int(alpha)
        if self.coeffs.get((0, 0, 0)) != 1:
            raise ValueError("pow_rational needs constant term 1")
        v = self - 1
        self._check_nilpotent(v)
        return self._binomial_sum(v, alpha, self.trunc)

    @staticmethod
    def _check_nilpotent(v: "TriSeries"):
        for n, l, m in v.coeffs:
            if n < 0 or m < 0 or (n == 0 and m == 0):
                raise ValueError("variable part must have positive valuation")
            if (n > 0 and v.trunc.max_tau is not None) or (m > 0 and v.trunc.max_omega is not None):
                continue
            raise ValueError("binomial series does not terminate without truncation")

    @staticmethod
    def _binomial_sum(v: "TriSeries", alpha: Fraction, trunc: TruncationPolicy) -> "TriSeries":
        result = TriSeries.one(trunc)
        term = TriSeries.one(trunc)
        coef = Fraction(1)
        k = 0
        while True:
            k += 1
            term = (term * v).truncate(trunc)
            if term.is_zero():
                break
            coef = coef * (alpha - k + 1) / k
            if coef:
                result = result + term.scale(coef)
        return TriSeries(result.coeffs, result.den, trunc)

    def mul_one_minus(self, tau, z, omega, power, coeff=1) -> "TriSeries":
        """Multiply by ``(1 - coeff * q^tau r^z s^omega) ** power``.

        The workhorse of infinite products.  Integral powers use repeated
        multiplication or geometric division, so the cost is linear in the
        size of ``self`` per unit of power.
        """
        power = _frac(power)
        if power == 0 or self.is_zero():
            return self
        tau, z, omega = _frac(tau), _frac(z), _frac(omega)
        positive = (tau >= 0 and omega >= 0 and (tau > 0 or omega > 0))
        if not positive and not (power.denominator == 1 and power > 0):
            raise ValueError("(1 - x)^c with c not a positive integer needs x of positive valuation")
        den = [self.den[0], self.den[1], self.den[2]]
        den[0] = _lcm(den[0], tau.denominator)
        den[1] = _lcm(den[1], z.denominator)
        den[2] = _lcm(den[2], omega.denominator)
        base = self.with_den(tuple(den))
        dn, dl, dm = int(tau * den[0]), int(z * den[1]), int(omega * den[2])
        tr = self.trunc
        bn = None if tr.max_tau is None else floor(tr.max_tau * den[0])
        bm = None if tr.max_omega is None else floor(tr.max_omega * den[2])

        def inside(n, m):
            return (bn is None or n <= bn) and (bm is None or m <= bm)

        cur = dict(base.coeffs)
        if power.denominator == 1:
            p = int(power)
            for _ in range(abs(p)):
                if p > 0:
                    new = dict(cur)
                    for (n, l, m), c in cur.items():
                        k = (n + dn, l + dl, m + dm)
                        if inside(k[0], k[2]):
                            new[k] = new.get(k, 0) - coeff * c
                    cur = new
                else:
                    # divide by (1 - x): T = S + x T, keys visited in increasing order
                    if not ((dn > 0 and bn is not None) or (dm > 0 and bm is not None)):
                        raise ValueError("geometric series does not terminate")
                    new = dict(cur)
                    heap = [((k[2], k[0], k[1]), k) for k in new]
                    heapq.heapify(heap)
                    seen = set()
                    while heap:
                        _, k = heapq.heappop(heap)
                        if k in seen:
                            continue
                        seen.add(k)
                        c = new.get(k, 0)
                        if not c:
                            continue
                        k2 = (k[0] + dn, k[1] + dl, k[2] + dm)
                        if not inside(k2[0], k2[2]):
                            continue
                        new[k2] = new.get(k2, 0) + coeff * c
                        heapq.heappush(heap, ((k2[2], k2[0], k2[1]), k2))
                    cur = new
            return TriSeries(cur, tuple(den), tr)
        # rational power: binomial series in x
        x = TriSeries({(dn, dl, dm): -coeff}, tuple(den), tr)
        factor = TriSeries._binomial_sum(x, power, tr)
        return base * factor

    def __truediv__(self, other):
        if not isinstance(other, TriSeries):
            if isinstance(other, (int, Fraction)):
                return self.scale(Fraction(1) / other)
            return self.scale(1 / other)
        return series_div(self, other)

    # -------------------------------------------------------------- reshape
    def rescale(self, c_tau=1, c_z=1, c_omega=1) -> "TriSeries":
        """Substitute (tau, z, omega) -> (c_tau tau, c_z z, c_omega omega)."""
        c_tau, c_z, c_omega = _frac(c_tau), _frac(c_z), _frac(c_omega)
        if c_tau <= 0 or c_omega <= 0 or c_z == 0:
            raise ValueError("scale factors must be positive (z: nonzero)")
        terms = [(t * c_tau, z * c_z, w * c_omega, c) for t, z, w, c in self.terms()]
        return TriSeries.from_terms(terms, self.trunc.scaled(c_tau, c_omega, c_z))

    def truncate(self, trunc: TruncationPolicy) -> "TriSeries":
        return TriSeries(self.coeffs, self.den, self.trunc.meet(trunc))

    def at_z_zero(self) -> "TriSeries":
        """Set r = 1."""
        out: dict[Key, object] = {}
        for (n, l, m), c in self.coeffs.items():
            k = (n, 0, m)
            out[k] = out.get(k, 0) + c
        return TriSeries(out, (self.den[0], 1, self.den[2]), self.trunc)

    def omega_slice(self, omega) -> "TriSeries":
        """Fourier-Jacobi coefficient at s^omega, as a series in q and r."""
        omega = _frac(omega)
        m = omega * self.den[2]
        if m.denominator != 1:
            return TriSeries({}, (self.den[0], self.den[1], 1),
                             TruncationPolicy(self.trunc.max_tau, None))
        m = int(m)
        out = {(n, l, 0): c for (n, l, mm), c in self.coeffs.items() if mm == m}
        return TriSeries(out, (self.den[0], self.den[1], 1),
                         TruncationPolicy(self.trunc.max_tau, None))

    def omega_exponents(self) -> list[Fraction]:
        return sorted({Fraction(m, self.den[2]) for (_, _, m) in self.coeffs})

    def to_rational(self) -> "TriSeries":
        """Convert cyclotomic coefficients to rationals (raises if impossible)."""
        out = {}
        for k, c in self.coeffs.items():
            c = simplify(c)
            if isinstance(c, Cyclo):
                raise ValueError("coefficient %r at %r is not rational" % (c, k))
            out[k] = c
        return TriSeries(out, self.den, self.trunc)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs.values())

    # ----------------------------------------------------------- comparison
    def window_diff(self, other: "TriSeries", trunc: TruncationPolicy | None = None):
        """Terms of ``self - other`` inside the common window (and ``trunc``)."""
        window = self.trunc.meet(other.trunc)
        if trunc is not None:
            window = window.meet(trunc)
        diff = (self - other)
        return [(t, z, w, c) for t, z, w, c in diff.terms() if window.admits(t, z, w)]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TriSeries.one().scale(other) if other else TriSeries.zero()
        if not isinstance(other, TriSeries):
            return NotImplemented
        return not self.window_diff(other)

    __hash__ = None

    def __repr__(self):
        return "TriSeries(%s, den=%r, trunc=%r)" % (self.pretty(12), self.den, self.trunc)

    def pretty(self, limit: int | None = None) -> str:
        parts = []
        for i, (t, z, w, c) in enumerate(self.terms()):
            if limit is not None and i >= limit:
                parts.append("...")
                break
            mono = "".join("%s^%s" % (v, e) for v, e in (("q", t), ("r", z), ("s", w)) if e)
            parts.append("(%s)%s" % (c, mono) if mono else "(%s)" % c)
        return " + ".join(parts) or "0"

    # ------------------------------------------------------------------ JSON
    def to_json(self) -> dict:
        rows = []
        for key in self.keys_sorted():
            c = simplify(self.coeffs[key])
            if isinstance(c, Cyclo):
                raise ValueError("only rational series serialize to JSON")
            rows.append([key[0], key[1], key[2], str(c)])
        return {"den_tau": self.den[0], "den_z": self.den[1], "den_omega": self.den[2],
                "coeffs": rows, "trunc": self.trunc.to_json()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "TriSeries":
        if isinstance(data, str):
            data = json.loads(data)
        trunc = TruncationPolicy.from_json(data["trunc"]) if data.get("trunc") else EXACT
        coeffs = {(int(n), int(l), int(m)): _clean_coeff(Fraction(c)) for n, l, m, c in data["coeffs"]}
        return cls(coeffs, (data["den_tau"], data["den_z"], data["den_omega"]), trunc)


# ---------------------------------------------------------------- division
def _laurent_div(a: dict[int, object], b: dict[int, object], b_lead_inv) -> dict[int, object]:
    """Exact division of Laurent polynomials in r; raises if inexact."""
    bmax = max(b)
    bmin = min(b)
    rem = dict(a)
    q: dict[int, object] = {}
    amax, amin = max(a), min(a)
    steps = (amax - amin) - (bmax - bmin) + 1
    for _ in range(max(steps, 0)):
        if not rem:
            break
        d = max(rem)
        c = rem[d] * b_lead_inv
        k = d - bmax
        q[k] = c
        for e, be in b.items():
            key = e + k
            v = rem.get(key, 0) - c * be
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    if rem:
        raise ArithmeticError("series division is not exact in the r-variable")
    return q


def _inverse(c):
    if isinstance(c, Cyclo):
        return c.inverse()
    return Fraction(1) / c


def series_div(a: TriSeries, b: TriSeries) -> TriSeries:
    """Quotient ``a / b`` with ``a = result * b`` on the known window.

    The lowest (tau, omega) slice of ``b`` must sit at (val_tau, val_omega)
    and every monomial of ``b`` must dominate it; that slice, a Laurent
    polynomial in r, must divide the successive remainders exactly.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by a zero series")
    if a.trunc.max_abs_z is not None or b.trunc.max_abs_z is not None:
        raise ValueError("z-truncated series cannot be divided")
    den = TriSeries.common_den(a, b)
    A, B = a.with_den(den), b.with_den(den)
    bs = B._slices()
    vn = min(n for n, _ in bs)
    vm = min(m for _, m in bs)
    if (vn, vm) not in bs:
        raise ValueError("divisor has no leading slice dominating its support")
    b0 = bs[(vn, vm)]
    inv = _inverse(b0[max(b0)])
    vt_b, vw_b = Fraction(vn, den[0]), Fraction(vm, den[2])
    vt_a, vw_a = a.val_tau(), a.val_omega()

    def bound(ta, tb, va, vb):
        if va is None:
            return None if ta is None else ta - vb
        return _min_opt(None if ta is None else ta - vb,
                        None if tb is None else tb + va - 2 * vb)

    trunc = TruncationPolicy(bound(a.trunc.max_tau, b.trunc.max_tau, vt_a, vt_b),
                             bound(a.trunc.max_omega, b.trunc.max_omega, vw_a, vw_b))
    if A.is_zero():
        return TriSeries({}, den, trunc)
    if trunc.max_tau is None or trunc.max_omega is None:
        # allowed only when b is a single slice (exact quotient by a polynomial)
        if len(bs) != 1 and ((trunc.max_tau is None and any(n != vn for n, _ in bs))
                             or (trunc.max_omega is None and any(m != vm for _, m in bs))):
            raise ValueError("exact division by a non-monomial series needs a truncation")
    bn = None if trunc.max_tau is None else floor(trunc.max_tau * den[0])
    bm = None if trunc.max_omega is None else floor(trunc.max_omega * den[2])
    a_sl = A._slices()
    n_lo = min(n for n, _ in a_sl) - vn
    m_lo = min(m for _, m in a_sl) - vm
    n_hi = bn if bn is not None else max(n for n, _ in a_sl) - vn
    m_hi = bm if bm is not None else max(m for _, m in a_sl) - vm
    others = [((n - vn, m - vm), row) for (n, m), row in bs.items() if (n, m) != (vn, vm)]
    for (dn, dm), _ in others:
        if dn < 0 or dm < 0:
            raise ValueError("divisor has no leading slice dominating its support")
    q: dict[tuple[int, int], dict[int, object]] = {}
    for m in range(m_lo, m_hi + 1):
        for n in range(n_lo, n_hi + 1):
            rem = dict(a_sl.get((n + vn, m + vm), {}))
            for (dn, dm), row in others:
                src = q.get((n - dn, m - dm))
                if not src:
                    continue
                for l1, c1 in src.items():
                    for l2, c2 in row.items():
                        key = l1 + l2
                        v = rem.get(key, 0) - c1 * c2
                        if v:
                            rem[key] = v
                        else:
                            rem.pop(key, None)
            if rem:
                q[(n, m)] = _laurent_div(rem, b0, inv)
    flat = {(n, l, m): c for (n, m), row in q.items() for l, c in row.items()}
    return TriSeries(flat, den, trunc)


def series_mul(a: TriSeries, b: TriSeries) -> TriSeries:
    return a * b


def series_pow_rational(u: TriSeries, alpha) -> TriSeries:
    return u.pow_rational(alpha)


def rescale(a: TriSeries, c_tau=1, c_z=1, c_omega=1) -> TriSeries:
    return a.rescale(c_tau, c_z, c_omega)
