"""Where the printed divisor-sum formulas for nabla_2 and Q_1 go wrong.

The lift and the Borcherds product agree with each other everywhere; the
printed closed formulas disagree with both exactly at coefficients where
gcd(n, l, m) has a nontrivial divisor (and, for Q_1, where 2mn - l^2 = 1).
"""
from ddforms import arithmetic_lift, borcherds_expand, jacobi_form
from ddforms.hecke_lift import closed_form_oracle

P = 3
for name, seed, phi, tw in (("nabla2", "nabla2_seed", "phi3", 1), ("q1", "q1_seed", "psi", 2)):
    lift = arithmetic_lift(jacobi_form(seed), P, tw * P).series
    prod = borcherds_expand(phi, P, tw * P).series
    printed = closed_form_oracle(name, P, tw * P, "printed")
    fixed = closed_form_oracle(name, P, tw * P, "corrected")
    print("%s: lift == product %s, lift == corrected formula %s" % (name, lift == prod, lift == fixed))
    for t, z, w, _ in lift.window_diff(printed)[:4]:
        print("   q^%s r^%s s^%s  lift %s  printed %s"
              % (t, z, w, lift.coeff(t, z, w), printed.coeff(t, z, w)))
