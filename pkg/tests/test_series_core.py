from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ddforms.cyclotomic import Cyclo, simplify
from ddforms.modular_basics import eta_qexpansion
from ddforms.series_core import (TriSeries, TruncationPolicy, rescale, series_div, series_mul,
                                 series_pow_rational)
from ddforms.theta_jacobi import theta_series

from oracles import partition_numbers, theta_triple_product

W = TruncationPolicy(F(3), F(2))


def q(e=1):
    return TriSeries.monomial(e, 0, 0)


terms = st.lists(st.tuples(st.integers(0, 6), st.integers(-3, 3), st.integers(0, 4),
                           st.integers(-4, 4)), max_size=6)


def build(ts):
    return TriSeries.from_terms([(F(n, 2), F(l, 2), F(m, 2), c) for n, l, m, c in ts], W)


@settings(max_examples=40, deadline=None)
@given(terms, terms, terms)
def test_ring_laws(x, y, z):
    a, b, c = build(x), build(y), build(z)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TriSeries.zero(W)


@settings(max_examples=25, deadline=None)
@given(terms, st.integers(-3, 3), st.integers(-3, 3))
def test_pow_rational_adds_exponents(x, p, r):
    u = TriSeries.one(W) + build([t for t in x if t[0] > 0 or t[2] > 0])
    a, b = F(p, 2), F(r, 3)
    assert series_pow_rational(u, a) * series_pow_rational(u, b) == series_pow_rational(u, a + b)


@settings(max_examples=25, deadline=None)
@given(terms, terms)
def test_div_inverts_mul(x, y):
    a = build(x)
    b = TriSeries.one(W) + build([t for t in y if t[0] > 0 or t[2] > 0])
    assert series_div(series_mul(a, b), b) == a


def test_telescoping():
    t = TruncationPolicy(F(3), None)
    s = (TriSeries.one(t) - q()) * TriSeries.from_terms([(i, 0, 0, 1) for i in range(4)], t)
    assert s.coeff(0) == 1 and all(s.coeff(i) == 0 for i in (1, 2, 3))
    assert s.trunc.max_tau == 3


def test_binomials():
    x = TriSeries.from_terms([(0, F(1, 2), 0, 1), (0, F(-1, 2), 0, 1)])
    assert x * x == TriSeries.from_terms([(0, 1, 0, 1), (0, 0, 0, 2), (0, -1, 0, 1)])
    t = TruncationPolicy(F(4), None)
    half = (TriSeries.one(t) + q()).pow_rational(F(1, 2))
    assert [half.coeff(i) for i in range(3)] == [1, F(1, 2), F(-1, 8)]
    geo = (TriSeries.one(t) - q()).pow_rational(-1)
    assert all(geo.coeff(i) == 1 for i in range(5))
    u = TriSeries.one(W).mul_one_minus(1, 1, 1, 2)
    assert u.pow_rational(F(1, 2)) == TriSeries.one(W).mul_one_minus(1, 1, 1, 1)


def test_pow_rational_needs_unit():
    with pytest.raises(ValueError):
        (q() + q(2)).pow_rational(F(1, 2))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        series_div(q(), TriSeries.zero(W))


def test_theta_matches_triple_product():
    s = theta_series(F(5))
    oracle = theta_triple_product(F(5))
    assert {(t, z): c for t, z, _, c in s.terms()} == oracle
    sq = s * s
    oracle_sq = {}
    for (t1, z1), c1 in oracle.items():
        for (t2, z2), c2 in oracle.items():
            if t1 + t2 <= sq.trunc.max_tau:
                oracle_sq[(t1 + t2, z1 + z2)] = oracle_sq.get((t1 + t2, z1 + z2), 0) + c1 * c2
    assert {(t, z): c for t, z, _, c in sq.terms()} == {k: v for k, v in oracle_sq.items() if v}


def test_inverse_eta_gives_partitions():
    t = TruncationPolicy(F(12), None)
    inv = TriSeries.one(t) / eta_qexpansion(1, 1, t).shift(F(-1, 24))
    assert inv.trunc.max_tau == F(287, 24)
    assert [inv.coeff(n) for n in range(12)] == partition_numbers(11)


def test_eta_quotient_is_half_theta_constant():
    t = TruncationPolicy(F(8), None)
    quot = eta_qexpansion(2, 2, t) / eta_qexpansion(1, 1, t)
    expect = {F((2 * n + 1) ** 2, 8) for n in range(6)}
    got = {e for e, _, _, c in quot.terms()}
    assert got == {e for e in expect if e <= quot.trunc.max_tau}
    assert all(c == 1 for *_, c in quot.terms())


def test_theta_quotient_divides_exactly():
    a, b = theta_series(F(4), 2), theta_series(F(4))
    quot = series_div(a, b)
    assert quot * b == a


def test_rescale():
    s = TriSeries.from_terms([(0, 1, 0, 1), (1, 0, 0, 1)])
    assert rescale(s, 2, 1, 1) == TriSeries.from_terms([(0, 1, 0, 1), (2, 0, 0, 1)])
    assert rescale(s, 1, 1, 1) == s
    lead = TriSeries.monomial(F(1, 2), F(1, 2), F(1, 2)).rescale(2, 2, 2)
    assert list(lead.terms()) == [(1, 1, 1, 1)]


def test_json_round_trip():
    s = build([(1, 1, 1, 3), (2, -1, 0, -2)])
    assert TriSeries.from_json(s.dumps()) == s
    assert TriSeries.from_json(s.dumps()).dumps() == s.dumps()


def test_z_truncated_refuses_products():
    s = TriSeries.one(TruncationPolicy(F(2), None, F(1)))
    with pytest.raises(ValueError):
        s * s


def test_cyclotomic_arithmetic():
    z = Cyclo.root(1, 8)
    assert z ** 8 == 1
    assert (z ** 2) ** 2 == -1
    assert simplify(z * z.inverse()) == 1
    s = Cyclo.root(1, 3) + Cyclo.root(2, 3)
    assert simplify(s) == -1
    assert abs(complex(z) - complex(2 ** -0.5, 2 ** -0.5)) < 1e-12
