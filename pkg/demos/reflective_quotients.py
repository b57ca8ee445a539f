"""Reflective identities checked multiplicatively.

Delta_5(3Z) is compared with Lift(phi_{3,1}) * nabla_2(Z) instead of dividing
Siegel series; the same goes for Delta_2(2Z) = Lift(phi_{1,1/2}) Q_1(Z).
"""
from ddforms.identities import Context, run_case

ctx = Context(2)
for cid in ("reflective_5_2", "reflective_5_3", "reflective_q1"):
    r = run_case(cid, ctx)
    print("%-16s %-4s %6.2fs  %s" % (cid, "ok" if r.ok else "FAIL", r.seconds, r.detail))
