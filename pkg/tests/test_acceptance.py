"""Acceptance suite: one test per criterion, summarised as PASS/FAIL lines at the end."""
import cmath
import random
import time
from fractions import Fraction as F

import pytest

from ddforms import borcherds as bo
from ddforms import modular_basics as mb
from ddforms import theta_jacobi as tj
from ddforms.classification import enumerate_dd_candidates
from ddforms.hecke_lift import arithmetic_lift, closed_form_oracle, vt_violations
from ddforms.identities import Context, compare, run_case

from oracles import eta_product_numeric, gamma0_index_bruteforce, sp4_f2_index_of_siegel_congruence
from printed import EXPANSIONS, TRACE_PHI2_LEADING

NINE = {(1, 1, F(5)), (2, 1, F(2)), (3, 1, F(1)), (4, 1, F(1, 2)), (1, 2, F(3)),
        (1, 3, F(2)), (1, 4, F(3, 2)), (2, 2, F(1)), (2, 4, F(1, 2))}


@pytest.fixture(scope="module")
def ctx2():
    return Context(2)


@pytest.fixture(scope="module")
def ctx3():
    return Context(3)


def case(ctx, cid):
    r = run_case(cid, ctx)
    assert r.ok, "%s: %s" % (cid, r.detail)
    return r


def test_criterion_01_classification():
    start = time.perf_counter()
    found = enumerate_dd_candidates(500, 500, 1)
    assert time.perf_counter() - start < 5
    assert {(c.t, c.N, c.weight) for c in found} == NINE


def test_criterion_02_cusp_data():
    start = time.perf_counter()
    assert sorted(c.width for c in mb.cusps_gamma0(2)) == [1, 2]
    assert [c.width for c in mb.cusps_gamma0(4)] == [4, 1, 1]
    for n in range(1, 201):
        assert sum(c.width for c in mb.cusps_gamma0(n)) == mb.gamma0_index(n)
    assert time.perf_counter() - start < 5
    assert all(mb.gamma0_index(n) == gamma0_index_bruteforce(n) for n in range(1, 201, 7))


def test_criterion_03_printed_expansions():
    start = time.perf_counter()
    for label, (form, matrix, order, expect) in EXPANSIONS.items():
        f = tj.get(form)
        s = f.expansion(order) if matrix is None else f.xi.slash(matrix).series(order)
        got = {(t, z): c for t, z, _, c in s.terms() if t <= order}
        assert got == expect, label
    tr = tj.trace_to(tj.get("phi2"), 1)
    assert {(t, z): c for t, z, _, c in tr.expansion(0).terms()} == TRACE_PHI2_LEADING
    assert time.perf_counter() - start < 30


def test_criterion_04_lift_equals_product(ctx3):
    start = time.perf_counter()
    for cid in ("nabla3_lift_eq_product", "nabla2_lift_eq_product", "q1_lift_eq_product",
                "delta5_eq_Bphi01"):
        case(ctx3, cid)
    assert time.perf_counter() - start < 300


@pytest.mark.xfail(strict=True, reason="the printed divisor-sum formulas disagree with the lift "
                   "(and with the product) at coefficients with gcd(n, l, m) > 1, and the printed "
                   "Q1 formula omits the terms with 2mn - l^2 = 1")
def test_criterion_05_closed_formulas_as_printed():
    P = 3
    lift = arithmetic_lift(tj.get("nabla2_seed"), P, P).series
    ok1, d1, _ = compare(lift, closed_form_oracle("nabla2", P, P, "printed"))
    lift = arithmetic_lift(tj.get("q1_seed"), P, 2 * P).series
    ok2, d2, _ = compare(lift, closed_form_oracle("q1", P, 2 * P, "printed"))
    assert ok1 and ok2, "nabla2: %s; Q1: %s" % (d1, d2)


def test_criterion_06_nabla32_square(ctx2):
    case(ctx2, "nabla32_sq_eq_F3")


def test_criterion_07_square_and_fourth_power_lifts(ctx2):
    for i in range(1, 5):
        case(ctx2, "dd_powers_%d" % i)


def test_criterion_08_lemma_and_constant_term(ctx2):
    for p in ("phi2", "phi3", "phi4", "psi", "phi01"):
        case(ctx2, "lemma_d1_%s" % p)
    case(ctx2, "eq_zero_phi01")
    case(ctx2, "eq_zero_phi02")


def test_criterion_09_weyl_and_weight():
    expect = {"phi2": (F(1, 2), F(1, 2), F(1, 2), F(3)), "phi3": (F(1, 2), F(1, 2), F(1, 2), F(2)),
              "phi4": (F(1, 2), F(1, 2), F(1, 2), F(3, 2)), "psi": (F(1, 4), F(1, 2), F(1, 2), F(1)),
              "phi01": (F(1, 2), F(1, 2), F(1, 2), F(5))}
    for name, v in expect.items():
        w = bo.weyl_data(name)
        assert (w.A, w.B, w.C, w.weight) == v, name


def test_criterion_10_reflective_identities(ctx2):
    start = time.perf_counter()
    for cid in ("reflective_5_2", "reflective_5_3", "reflective_q1"):
        case(ctx2, cid)
    assert time.perf_counter() - start < 300


def test_criterion_11_vt_symmetry(ctx2, ctx3):
    forms = ctx2.siegel_outputs() + ctx3.siegel_outputs()
    assert len(forms) >= 10
    for f in forms:
        assert not vt_violations(f), f.name


def _random_point(rng):
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5)), \
        complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2))


def test_criterion_12_numeric_transformations():
    rng = random.Random(12)
    worst = 0.0
    f = tj.get("phi2")
    count = 0
    while count < 20:
        c, d = rng.randint(-5, 5), rng.randint(-5, 5)
        if c == 0 or mb.ext_gcd(c, d)[0] != 1:
            continue
        g = mb.complete_to_sl2(c, d)
        tau, z = _random_point(rng)
        a, b = g[0], g[1]
        image = (a * tau + b) / (c * tau + d)
        if image.imag < 0.1:
            continue
        lhs = tj.slash_numeric(f.numeric, g, f.index, tau, z)
        rhs = f.xi.slash(g).numeric(tau, z)
        worst = max(worst, abs(lhs - rhs))
        v = cmath.exp(2j * cmath.pi * mb.eta_multiplier(g) / 24)
        eta_l = eta_product_numeric(image, 2000)
        eta_r = v * cmath.sqrt(c * tau + d) * eta_product_numeric(tau, 2000)
        worst = max(worst, abs(eta_l - eta_r))
        count += 1
    assert worst < 1e-9


def test_criterion_13_index_formula():
    assert mb.index_paramodular(1, 2) == 15 == sp4_f2_index_of_siegel_congruence()
    for t in range(1, 31):
        for n in range(1, 31):
            assert isinstance(mb.index_paramodular(t, n), int)
