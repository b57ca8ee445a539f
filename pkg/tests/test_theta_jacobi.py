import cmath
import random
from fractions import Fraction as F

import pytest

from ddforms import theta_jacobi as tj
from ddforms.modular_basics import complete_to_sl2, mat_mul

from oracles import phi01_weierstrass, theta_triple_product
from printed import EXPANSIONS, TRACE_PHI2_LEADING


def table(series, order):
    return {(t, z): c for t, z, _, c in series.terms() if t <= order}


def expansion_of(form, matrix, order):
    f = tj.get(form)
    s = f.expansion(order) if matrix is None else f.xi.slash(matrix).series(order)
    return table(s, order)


@pytest.mark.parametrize("label", sorted(EXPANSIONS))
def test_printed_expansions(label):
    form, matrix, order, expect = EXPANSIONS[label]
    assert expansion_of(form, matrix, order) == expect


def test_trace_of_phi2_is_phi01():
    tr = tj.trace_to(tj.get("phi2"), 1)
    lead = {k: v for k, v in table(tr.expansion(0), 0).items()}
    assert lead == TRACE_PHI2_LEADING
    assert table(tr.expansion(4), 4) == table(tj.get("phi01").expansion(4), 4)


def test_phi01_against_weierstrass():
    s = tj.get("phi01").expansion(5)
    got = {(int(t), int(z)): c for t, z, _, c in s.terms()}
    oracle = phi01_weierstrass(5)
    assert got == {k: v for k, v in oracle.items() if v}


def test_theta_numeric_matches_series():
    tau, z = complex(0.1, 0.7), complex(0.23, 0.11)
    s = tj.theta_series(F(12))
    val = sum(float(c) * cmath.exp(2j * cmath.pi * (float(t) * tau + float(l) * z))
              for t, l, _, c in s.terms())
    assert abs(val - tj.theta_numeric(tau, z)) < 1e-10
    assert len(theta_triple_product(F(12))) == len(list(s.terms()))


def random_sl2(rng, size=6):
    while True:
        c, d = rng.randint(-size, size), rng.randint(-size, size)
        try:
            m = complete_to_sl2(c, d)
        except (ValueError, ZeroDivisionError):
            continue
        return mat_mul((1, rng.randint(-3, 3), 0, 1), m)


@pytest.mark.parametrize("name", ["phi2", "phi3", "phi4", "psi"])
def test_xi_slash_rules_numeric(name):
    """Symbolic slash of the xi-sum against the numerical slash, 20 random points."""
    f = tj.get(name)
    rng = random.Random(name)
    worst = 0.0
    for _ in range(20):
        g = random_sl2(rng)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2))
        a, b, c, d = g
        if ((a * tau + b) / (c * tau + d)).imag < 0.15:
            continue
        lhs = tj.slash_numeric(f.numeric, g, f.index, tau, z)
        rhs = f.xi.slash(g).numeric(tau, z)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    assert worst < 1e-9


@pytest.mark.parametrize("name", ["phi2", "phi4", "psi"])
def test_heisenberg_invariance_numeric(name):
    f = tj.get(name)
    rng = random.Random(1)
    for _ in range(20):
        lam, mu = rng.randint(-2, 2), rng.randint(-2, 2)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 1.4))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.1, 0.1))
        lhs = tj.heisenberg_numeric(f.numeric, lam, mu, f.index, tau, z)
        assert abs(lhs - f.numeric(tau, z)) < 1e-9 * max(1.0, abs(lhs))


@pytest.mark.parametrize("name,level", [("phi2", 2), ("phi3", 3), ("phi4", 4), ("psi", 2)])
def test_invariant_under_gamma0(name, level):
    f = tj.get(name)
    for c, d in [(level, 1), (level, -1), (2 * level, 1), (level, 2 * level + 1)]:
        g = complete_to_sl2(c, d)
        assert f.xi.slash(g).series(2) == f.expansion(2)


def test_unknown_form():
    with pytest.raises(KeyError):
        tj.get("phi_nonexistent")


def test_eval_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        tj.eval_numeric("phi2", complex(0, -1), 0)


def test_xi_undefined_symbol():
    with pytest.raises(ValueError):
        tj.XiSymbol.make(2, 1, 1)


@pytest.mark.parametrize("name,q", [("nabla3_seed", 2), ("nabla2_seed", 2), ("q1_seed", 4),
                                    ("eta9_theta", 2)])
def test_seed_exponent_classes(name, q):
    assert tj.get(name).q_chi() == q
