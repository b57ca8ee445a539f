import cmath
import random
from fractions import Fraction as F
from math import gcd

import pytest

from ddforms import modular_basics as mb
from ddforms.series_core import TruncationPolicy

from oracles import (dedekind_sum_sawtooth, eta_product_numeric, gamma0_index_bruteforce,
                     generalized_bernoulli, sp4_f2_index_of_siegel_congruence)


def random_gamma0(n, rng, size=40):
    while True:
        c = n * rng.randint(-size, size)
        d = rng.randint(-size, size)
        if gcd(c, d) == 1 and c:
            m = mb.complete_to_sl2(c, d)
            k = rng.randint(-5, 5)
            return mb.mat_mul((1, k, 0, 1), m)


@pytest.mark.parametrize("n", range(1, 201))
def test_cusps_and_widths(n):
    cusps = mb.cusps_gamma0(n)
    assert len(cusps) == mb.cusp_count(n)
    assert sum(c.width for c in cusps) == mb.gamma0_index(n) == gamma0_index_bruteforce(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8, 9, 12, 16, 18])
def test_cusp_classes_are_distinct_and_complete(n):
    cusps = mb.cusps_gamma0(n)
    for i, x in enumerate(cusps):
        for y in cusps[i + 1:]:
            assert not mb.cusps_equivalent((x.f, x.e), (y.f, y.e), n)
    for a in range(-6, 7):
        for c in range(1, 3 * n):
            if gcd(a, c) == 1:
                mb.cusp_of(a, c, n)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 12])
def test_coset_decomposition(n):
    reps = mb.sl2_decomposition_reps(n)
    assert len(reps) == mb.gamma0_index(n)
    for i, x in enumerate(reps):
        assert not any(mb.same_coset(x, y, n) for y in reps[i + 1:])
    assert len(mb.coset_reps(n)) == mb.gamma0_index(n)


def test_level_four_cusp_labels():
    assert [c.label() for c in mb.cusps_gamma0(4)] == ["0/1", "1/2", "inf"]
    assert [(c.width, c.N_e) for c in mb.cusps_gamma0(4)] == [(4, 4), (1, 2), (1, 1)]


def test_dedekind_sums():
    for k in range(1, 60):
        for h in range(-k, 2 * k):
            if gcd(h, k) == 1:
                assert mb.dedekind_sum(h, k) == dedekind_sum_sawtooth(h, k)


def test_eta_multiplier_numeric():
    rng = random.Random(7)
    tau = complex(0.13, 0.9)
    for _ in range(60):
        a, b, c, d = random_gamma0(1, rng, 12)
        image = (a * tau + b) / (c * tau + d)
        if c == 0 or image.imag < 0.05:
            continue
        lhs = eta_product_numeric((a * tau + b) / (c * tau + d))
        v = cmath.exp(2j * cmath.pi * mb.eta_multiplier((a, b, c, d)) / 24)
        rhs = v * cmath.sqrt(c * tau + d) * eta_product_numeric(tau)
        assert abs(lhs - rhs) < 1e-8 * abs(lhs)


def test_eta_series_matches_numeric():
    s = mb.eta_qexpansion(1, 1, TruncationPolicy(F(30), None))
    tau = complex(0.21, 0.8)
    val = sum(float(c) * cmath.exp(2j * cmath.pi * float(e) * tau) for e, _, _, c in s.terms())
    assert abs(val - eta_product_numeric(tau)) < 1e-12
    assert abs(mb.eta_numeric(tau) - eta_product_numeric(tau)) < 1e-12


@pytest.mark.parametrize("chi", [mb.CharacterId("chi2_2", 2), mb.CharacterId("chi2_2b", 2),
                                 mb.CharacterId("chi4_2", 2), mb.CharacterId("chi2_3", 3),
                                 mb.CharacterId("chi2_4", 4), mb.legendre3(), mb.minus4(),
                                 mb.CharacterId("eta_power", 1, (8,)),
                                 mb.eta_product_character({1: 3, 3: 3})])
def test_characters_are_homomorphisms(chi):
    rng = random.Random(chi.kind)
    for _ in range(60):
        x, y = random_gamma0(chi.level, rng), random_gamma0(chi.level, rng)
        assert chi.value(mb.mat_mul(x, y)) == (chi.value(x) + chi.value(y)) % 1


def test_character_rejects_wrong_level():
    with pytest.raises(ValueError):
        mb.CharacterId("chi2_3", 3).value((1, 0, 1, 1))


def test_generalized_bernoulli():
    for k in (1, 3, 5):
        vals = {1: 1, 3: -1}
        assert mb.bernoulli_generalized(k, mb.minus4()) == generalized_bernoulli(k, vals, 4)
    for k in (1, 3, 5):
        assert mb.bernoulli_generalized(k, mb.legendre3()) == generalized_bernoulli(k, {1: 1, 2: -1}, 3)
    for k in (2, 4, 6):
        assert mb.bernoulli_generalized(k, mb.trivial()) == generalized_bernoulli(k, {0: 1}, 1)


def test_eisenstein_constant_terms():
    tr = TruncationPolicy(F(3), None)
    assert mb.eisenstein_qexpansion(4, mb.trivial(), tr).coeff(0) == F(1, 240)
    e3 = mb.eisenstein_qexpansion(3, mb.minus4(), tr)
    assert [e3.coeff(n) for n in range(4)] == [F(-1, 4), 1, 1, -8]


def test_index_formula():
    assert mb.index_formula(1, 2) == 15 == sp4_f2_index_of_siegel_congruence()
    assert mb.index_formula(1, 3) == mb.lagrangian_count(3)
    assert mb.index_formula(1, 2) == mb.lagrangian_count(2)
    for t in range(1, 31):
        for n in range(1, 31):
            assert mb.index_paramodular(t, n) > 0


def test_st_decompose_round_trip():
    rng = random.Random(3)
    for _ in range(200):
        x = random_gamma0(1, rng, 200)
        assert mb.word_product(mb.st_decompose(x)) == x
    with pytest.raises(ValueError):
        mb.st_decompose((1, 1, 1, 1))


def test_sigma_a():
    for m in (3, 4, 8, 12):
        for a in range(1, m):
            if gcd(a, m) == 1:
                s = mb.sigma_a(a, m)
                assert mb.mat_mod(s, m) == mb.mat_mod((pow(a, -1, m), 0, 0, a), m)
    with pytest.raises(ValueError):
        mb.sigma_a(2, 4)
