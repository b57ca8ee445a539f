"""Build nabla_3 twice and watch the coefficients line up.

The additive lift of eta(tau) eta(2tau)^4 theta(tau, z) and the Borcherds
product of the weak Jacobi form phi_2 on Gamma_0(2) give the same Siegel
form.  Run with ``python demos/lift_vs_product.py``.
"""
from fractions import Fraction

from ddforms import arithmetic_lift, borcherds_expand, jacobi_form, weyl_data

P = 3
seed, phi = jacobi_form("nabla3_seed"), jacobi_form("phi2")

print("phi_2 at infinity:")
print(phi.expansion(1).pretty(12))

w = weyl_data("phi2")
print("\nWeyl vector (A, B, C) = (%s, %s, %s), weight %s" % (w.A, w.B, w.C, w.weight))

lift = arithmetic_lift(seed, P, P).series
prod = borcherds_expand("phi2", P, P).series
print("\nfirst Fourier-Jacobi coefficient of the lift:")
print(lift.omega_slice(Fraction(1, 2)).pretty(10))

same = lift == prod
print("\nlift == product on tau <= %d, omega <= %d: %s (%d coefficients)"
      % (P, P, same, sum(1 for _ in lift.terms())))
