"""The identity registry behind ``ddforms verify``.

Every case builds both sides from scratch (or from the cache) and compares
them exactly on their common window.  A case that compares nothing fails.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .borcherds import borcherds_expand, collect_cusp_data, lemma_d1_check
from .cache import Cache, cache_key
from .classification import enumerate_dd_candidates
from .hecke_lift import SiegelForm, arithmetic_lift, closed_form_oracle, vt_violations
from .series_core import TriSeries
from .theta_jacobi import XiSum, _p, _xi, get, trace_coefficients_from_cusps, trace_to, \
    weight2_constant_check


class WindowTooSmall(ValueError):
    pass


@dataclass
class CaseResult:
    id: str
    ok: bool
    detail: str
    seconds: float = 0.0
    compared: int = 0

    def to_json(self) -> dict:
        return {"id": self.id, "ok": self.ok, "detail": self.detail,
                "seconds": round(self.seconds, 3), "compared": self.compared}


@dataclass
class Context:
    """Shared state for a verification run: precision, memo and optional disk cache."""

    prec: Fraction = Fraction(2)
    cache: Optional[Cache] = None
    memo: dict = field(default_factory=dict)

    def __post_init__(self):
        self.prec = Fraction(self.prec)
        if self.prec < 1:
            raise WindowTooSmall("precision must be at least 1 (got %s)" % self.prec)

    def _build(self, kind: str, name: str, max_tau, max_omega,
               make: Callable[[], SiegelForm]) -> SiegelForm:
        window = {"max_tau": str(Fraction(max_tau)), "max_omega": str(Fraction(max_omega))}
        mk = (kind, name, window["max_tau"], window["max_omega"])
        if mk in self.memo:
            return self.memo[mk]
        key = cache_key(kind, name, window)
        F = None
        if self.cache is not None:
            d = self.cache.get(key)
            if d is not None:
                F = SiegelForm.from_json(d["form"])
                F.meta = d.get("meta", {})
        if F is None:
            F = make()
            if self.cache is not None:
                self.cache.put(key, {"kind": kind, "name": name, "window": window,
                                     "form": F.to_json(), "meta": F.meta})
        self.memo[mk] = F
        return F

    def lift(self, seed: str, max_tau, max_omega) -> SiegelForm:
        return self._build("lift", seed, max_tau, max_omega,
                           lambda: arithmetic_lift(get(seed), max_tau, max_omega))

    def product(self, phi: str, max_tau, max_omega) -> SiegelForm:
        return self._build("borcherds", phi, max_tau, max_omega,
                           lambda: borcherds_expand(phi, max_tau, max_omega))

    def siegel_outputs(self) -> list[SiegelForm]:
        return list(self.memo.values())


def compare(a: TriSeries, b: TriSeries) -> tuple[bool, str, int]:
    """Exact comparison on the common window; (ok, detail, nonzero coefficients compared)."""
    window = a.trunc.meet(b.trunc)
    diff = a.window_diff(b)
    n = sum(1 for t, z, w, _ in a.terms() if window.admits(t, z, w))
    if diff:
        t, z, w, c = diff[0]
        return False, ("first mismatch at q^%s r^%s s^%s: %s vs %s (%d differences)"
                       % (t, z, w, a.coeff(t, z, w), b.coeff(t, z, w), len(diff))), n
    if n == 0:
        return False, "empty comparison window", 0
    return True, "%d coefficients agree (tau <= %s, omega <= %s)" % (
        n, window.max_tau, window.max_omega), n


# ------------------------------------------------------------------ cases
@dataclass(frozen=True)
class IdentityCase:
    id: str
    anchor: str
    run: Callable[[Context], tuple]


def _lift_eq_product(seed: str, phi: str):
    def run(ctx: Context):
        t = get(phi).index
        P = ctx.prec
        return compare(ctx.lift(seed, P, t * P).series, ctx.product(phi, P, t * P).series)
    return run


def _power(seed: str, phi: str, e: int):
    def run(ctx: Context):
        t = get(phi).index
        P = ctx.prec
        return compare(ctx.lift(seed, P, t * P).series, ctx.product(phi, P, t * P).series ** e)
    return run


def _f3(ctx: Context):
    P = ctx.prec
    return compare(ctx.product("phi4", P, P).series ** 2, ctx.lift("h32_sq", P, P).series)


def _lemma(phi: str):
    def run(ctx: Context):
        v = lemma_d1_check(collect_cusp_data(phi, 1))
        return v == 0, "t D1 + C - t A = %s" % v, 1
    return run


def _eq_zero(phi: str):
    def run(ctx: Context):
        f = get(phi)
        v = weight2_constant_check(f.expansion(ctx.prec), f.index)
        return v == 0, "constant term = %s" % v, 1
    return run


def _trace_case(src: str, target: int, expected: Callable[[Fraction], TriSeries], label: str):
    def run(ctx: Context):
        tr = trace_to(get(src), target)
        P = ctx.prec
        ok, detail, n = compare(tr.expansion(P), expected(P))
        if ok and target == 1:
            ok2, detail2, _ = compare(tr.expansion(P), trace_coefficients_from_cusps(get(src), P))
            if not ok2:
                return False, "cusp-sum trace differs: " + detail2, n
        return ok, "%s: %s" % (label, detail), n
    return run


def _phi01_xi(P):
    return XiSum.make([_p(4, _xi(2, 1, 0), _xi(2, 1, 0)), _p(4, _xi(2, 0, 1), _xi(2, 0, 1)),
                       _p(4, _xi(2, 0, 0), _xi(2, 0, 0))]).series(P)


def _phi02_xi(P):
    return XiSum.make([_p(2, _xi(2, 1, 0, 2)), _p(2, _xi(2, 0, 1, 2)),
                       _p(2, _xi(2, 0, 0, 2))]).series(P)


def _reflective(left: Callable[[Context], TriSeries], right: Callable[[Context], TriSeries]):
    def run(ctx: Context):
        return compare(left(ctx), right(ctx))
    return run


def _r52_left(ctx):
    P = ctx.prec
    return ctx.lift("eta9_theta", P, P).rescaled(3).series


def _r52_right(ctx):
    W = 3 * ctx.prec
    return ctx.lift("phi31", W, W).series * ctx.product("phi3", W, W).series


def _r53_left(ctx):
    P = ctx.prec
    return ctx.lift("eta9_theta", P, P).rescaled(2).series ** 2


def _r53_right(ctx):
    W = 2 * ctx.prec
    return ctx.lift("phi2_half_sq", W, W).series * ctx.product("phi2", W, W).series ** 2


def _rq1_left(ctx):
    P = ctx.prec
    return ctx.lift("eta3_theta", P, 2 * P).rescaled(2).series


def _rq1_right(ctx):
    W = 2 * ctx.prec
    return ctx.lift("phi1_half", W, 2 * W).series * ctx.product("psi", W, 2 * W).series


def _closed(name: str, seed: str, t_omega: int):
    def run(ctx: Context):
        P = ctx.prec
        return compare(ctx.lift(seed, P, t_omega * P).series,
                       closed_form_oracle(name, P, t_omega * P, "corrected"))
    return run


def _vt(ctx: Context):
    forms = ctx.siegel_outputs()
    if not forms:
        for seed in ("nabla3_seed", "nabla2_seed", "q1_seed", "eta9_theta"):
            ctx.lift(seed, ctx.prec, ctx.prec * (2 if seed == "q1_seed" else 1))
        forms = ctx.siegel_outputs()
    bad = [(F.name, vt_violations(F)[:1]) for F in forms if vt_violations(F)]
    if bad:
        return False, "V_t symmetry fails: %s" % bad[:3], len(forms)
    return True, "%d Siegel tables are V_t symmetric" % len(forms), len(forms)


def _q1_slot(ctx: Context):
    found = [(c.t, c.N, c.k_x2) for c in enumerate_dd_candidates(50, 50, 1)]
    ok = (2, 4, 1) in found and len(found) == 9
    return ok, ("(2,4;1/2) is a candidate slot among %d; no form exists there (the divisor of a "
                "would-be form forces a non-holomorphic Fourier-Jacobi coefficient)" % len(found)), 1


CASES: list[IdentityCase] = [
    IdentityCase("nabla3_lift_eq_product", "Lift(eta eta(2tau)^4 theta) = B(phi2)",
                 _lift_eq_product("nabla3_seed", "phi2")),
    IdentityCase("nabla2_lift_eq_product", "Lift(eta(3tau)^3 theta) = B(phi3)",
                 _lift_eq_product("nabla2_seed", "phi3")),
    IdentityCase("q1_lift_eq_product", "Lift(eta(2tau)^2/eta theta) = B(psi)",
                 _lift_eq_product("q1_seed", "psi")),
    IdentityCase("delta5_eq_Bphi01", "Lift(eta^9 theta) = B(phi01)",
                 _lift_eq_product("eta9_theta", "phi01")),
    IdentityCase("nabla32_sq_eq_F3", "B(phi4)^2 = Lift(h32^2)", _f3),
    IdentityCase("dd_powers_1", "Lift(eta^2 eta(2tau)^8 theta^2) = nabla3^2",
                 _power("nabla3_sq_seed", "phi2", 2)),
    IdentityCase("dd_powers_2", "Lift(eta(3tau)^6 theta^2) = nabla2^2",
                 _power("nabla2_sq_seed", "phi3", 2)),
    IdentityCase("dd_powers_3", "Lift(eta(2tau)^4/eta^2 theta^2) = Q1^2",
                 _power("q1_sq_seed", "psi", 2)),
    IdentityCase("dd_powers_4", "Lift(eta(2tau)^8/eta^4 theta^4) = Q1^4",
                 _power("q1_4th_seed", "psi", 4)),
] + [
    IdentityCase("lemma_d1_%s" % p, "t D1 + C - t A = 0 for %s" % p, _lemma(p))
    for p in ("phi2", "phi3", "phi4", "psi", "phi01")
] + [
    IdentityCase("eq_zero_phi01", "weight-2 constant term of phi01", _eq_zero("phi01")),
    IdentityCase("eq_zero_phi02", "weight-2 constant term of phi02", _eq_zero("phi02")),
    IdentityCase("trace_phi2", "Tr_SL2 phi2 = 4(xi10^2 + xi01^2 + xi00^2)",
                 _trace_case("phi2", 1, _phi01_xi, "phi01")),
    IdentityCase("trace_phi3", "Tr_SL2 phi3 = phi01", _trace_case("phi3", 1, _phi01_xi, "phi01")),
    IdentityCase("trace_phi4", "Tr_Gamma0(2) phi4 = phi2",
                 _trace_case("phi4", 2, lambda P: get("phi2").expansion(P), "phi2")),
    IdentityCase("trace_phi4_sl2", "Tr_SL2 phi4 = phi01", _trace_case("phi4", 1, _phi01_xi, "phi01")),
    IdentityCase("trace_psi", "Tr_SL2 psi = psi + 2 xi01(tau,2z) + 2 xi00(tau,2z)",
                 _trace_case("psi", 1, _phi02_xi, "phi02")),
    IdentityCase("reflective_5_3", "Delta5(2Z)^2 = Lift(phi_{2,1/2}^2) nabla3^2",
                 _reflective(_r53_left, _r53_right)),
    IdentityCase("reflective_5_2", "Delta5(3Z) = Lift(phi_{3,1}) nabla2",
                 _reflective(_r52_left, _r52_right)),
    IdentityCase("reflective_q1", "Delta2(2Z) = Lift(phi_{1,1/2}) Q1",
                 _reflective(_rq1_left, _rq1_right)),
    IdentityCase("nabla2_closed_form", "Lift(eta(3tau)^3 theta) = divisor-sum formula",
                 _closed("nabla2", "nabla2_seed", 1)),
    IdentityCase("q1_closed_form", "Lift(eta(2tau)^2/eta theta) = divisor-sum formula",
                 _closed("q1", "q1_seed", 2)),
    IdentityCase("delta2_over_q1_closed_form", "Lift(phi_{1,1/2}) = divisor-sum formula",
                 _closed("delta2_over_q1", "phi1_half", 2)),
    IdentityCase("vt_symmetry", "every Siegel table is V_t symmetric", _vt),
    IdentityCase("q1_nonexistence_slot", "classification lists (2,4;1/2)", _q1_slot),
]

CASE_IDS = [c.id for c in CASES]


def run_case(case: IdentityCase | str, ctx: Context) -> CaseResult:
    if isinstance(case, str):
        matches = [c for c in CASES if c.id == case]
        if not matches:
            raise KeyError("unknown identity %r" % case)
        case = matches[0]
    t0 = time.perf_counter()
    try:
        ok, detail, n = case.run(ctx)
    except (ArithmeticError, ValueError, AssertionError) as exc:
        if isinstance(exc, WindowTooSmall):
            raise
        ok, detail, n = False, "%s: %s" % (type(exc).__name__, exc), 0
    return CaseResult(case.id, bool(ok), detail, time.perf_counter() - t0, n)


def verify_all(ctx: Context, ids: list[str] | None = None) -> list[CaseResult]:
    chosen = ids or CASE_IDS
    # vt_symmetry looks at everything built so far, so it runs last
    chosen = [i for i in chosen if i != "vt_symmetry"] + [i for i in chosen if i == "vt_symmetry"]
    return [run_case(i, ctx) for i in chosen]
