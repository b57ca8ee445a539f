"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Elements are stored in the power basis 1, z, ..., z^(phi(M)-1) with integer
numerators over a common positive denominator, so equality is structural.
Theta functions with characteristics have coefficients in these fields; the
weight-0 products built from them are rational, and :meth:`Cyclo.to_fraction`
is how that is checked.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

Number = Union[int, Fraction, "Cyclo"]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("order must be positive")
    # x^m - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = a[:]
    out = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // lead
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Reductions of z^k, 0 <= k < m, to the power basis of Q(zeta_m)."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by z
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _degree(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


class Cyclo:
    """An element of Q(zeta_order)."""

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, num, den: int = 1):
        deg = _degree(order)
        num = list(num)
        if len(num) > deg:
            num = _reduce(order, num)
        else:
            num = num + [0] * (deg - len(num))
        if den < 0:
            num = [-x for x in num]
            den = -den
        g = den
        for x in num:
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            num = [x // g for x in num]
            den //= g
        self.order = order
        self.num = tuple(num)
        self.den = den

    # construction -------------------------------------------------------
    @classmethod
    def root(cls, k: int, m: int) -> "Cyclo":
        """zeta_m ** k."""
        return cls(m, _power_table(m)[k % m])

    @classmethod
    def from_rational(cls, x, m: int = 1) -> "Cyclo":
        x = Fraction(x)
        return cls(m, [x.numerator], x.denominator)

    def lift(self, m: int) -> "Cyclo":
        """Embed into Q(zeta_m); requires self.order | m."""
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError("cannot embed Q(zeta_%d) in Q(zeta_%d)" % (self.order, m))
        step = m // self.order
        table = _power_table(m)
        out = [0] * _degree(m)
        for i, c in enumerate(self.num):
            if c:
                row = table[(i * step) % m]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return Cyclo(m, out, self.den)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("cyclotomic number %r is not rational" % (self,))
        return Fraction(self.num[0], self.den)

    def __complex__(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(c * z**i for i, c in enumerate(self.num)) / self.den

    def conjugate_by(self, j: int) -> "Cyclo":
        """Galois conjugate zeta -> zeta**j, gcd(j, order) = 1."""
        table = _power_table(self.order)
        out = [0] * len(self.num)
        for i, c in enumerate(self.num):
            if c:
                for k, r in enumerate(table[(i * j) % self.order]):
                    if r:
                        out[k] += c * r
        return Cyclo(self.order, out, self.den)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclo):
            if other.order == self.order:
                return self, other
            m = self.order * other.order // gcd(self.order, other.order)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclo.from_rational(other, self.order)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        den = a.den * b.den // gcd(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return Cyclo(a.order, [x * fa + y * fb for x, y in zip(a.num, b.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.order, [-x for x in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclo(self.order, [x * other.numerator for x in self.num],
                         self.den * other.denominator)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        prod = [0] * (2 * len(a.num) - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        return Cyclo(a.order, prod, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.order
        if self.is_rational():
            return Cyclo(m, [self.den], self.num[0])
        # product of the non-trivial conjugates divided by the norm
        acc = Cyclo(m, [1])
        for j in range(2, m):
            if gcd(j, m) == 1:
                acc = acc * self.conjugate_by(j)
        norm = (acc * self).to_fraction()
        return acc * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclo):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> "Cyclo":
        if e < 0:
            return self.inverse() ** (-e)
        out = Cyclo(self.order, [1])
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if isinstance(other, Cyclo):
            a, b = self._coerce(other)
            return a.num == b.num and a.den == b.den
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.order, self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        terms = ["%d*z^%d" % (c, i) if i else str(c) for i, c in enumerate(self.num) if c]
        body = " + ".join(terms) or "0"
        if self.den != 1:
            body = "(%s)/%d" % (body, self.den)
        return "Cyclo[%d](%s)" % (self.order, body)


def _reduce(m: int, coeffs: list[int]) -> list[int]:
    deg = _degree(m)
    table = _power_table(m)
    out = list(coeffs[:deg]) + [0] * max(0, deg - len(coeffs))
    for k in range(deg, len(coeffs)):
        c = coeffs[k]
        if c:
            for j, r in enumerate(table[k % m]):
                if r:
                    out[j] += c * r
    return out


def simplify(x: Number) -> Number:
    """Collapse a rational cyclotomic number to a Fraction or int."""
    if isinstance(x, Cyclo) and x.is_rational():
        x = Fraction(x.num[0], x.den)
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x
