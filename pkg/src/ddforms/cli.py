"""Command-line front end: ``ddforms <command> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors (unknown form, bad window, malformed arguments).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .borcherds import borcherds_expand, character_data, collect_cusp_data, weyl_data
from .cache import Cache
from .classification import enumerate_dd_candidates
from .hecke_lift import SiegelForm, lift_parameters
from .identities import CASES, CASE_IDS, Context, WindowTooSmall, verify_all
from .modular_basics import cusps_gamma0, gamma0_index
from .series_core import TriSeries
from .theta_jacobi import eval_numeric, get, registry, trace_to


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output
def _series_rows(s: TriSeries):
    for t, z, w, c in s.terms():
        yield [str(t), str(z), str(w), str(c)]


def _emit(args, payload, rows=None, header=None, text=None) -> None:
    out = sys.stdout
    if args.format == "json":
        json.dump(payload, out, sort_keys=True, indent=1)
        out.write("\n")
    elif args.format == "csv":
        if rows is None:
            raise UsageError("csv output is not available for this command")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write((text if text is not None else json.dumps(payload, indent=1)) + "\n")


def _emit_series(args, s: TriSeries, payload: dict, title: str) -> None:
    _emit(args, payload, list(_series_rows(s)), ["tau", "z", "omega", "coeff"],
          "%s\n%s" % (title, s.pretty(args.limit)))


# --------------------------------------------------------------- helpers
def _prec(args) -> Fraction:
    try:
        P = Fraction(args.prec)
    except (ValueError, ZeroDivisionError):
        raise UsageError("--prec must be a rational number")
    if P <= 0:
        raise UsageError("--prec must be positive (window too small)")
    return P


def _form(name: str):
    try:
        return get(name)
    except KeyError:
        raise UsageError("unknown form %r (see `ddforms registry list`)" % name)


def _cache(args):
    return Cache(args.cache_dir) if args.cache_dir else Cache()


def _parse_cusp(text: str, level: int):
    for c in cusps_gamma0(level):
        if c.label() == text:
            return c
    raise UsageError("no cusp %r for Gamma_0(%d); cusps: %s"
                     % (text, level, ", ".join(c.label() for c in cusps_gamma0(level))))


# -------------------------------------------------------------- commands
def cmd_cusps(args) -> int:
    if args.level < 1:
        raise UsageError("level must be positive")
    cs = cusps_gamma0(args.level)
    payload = {"level": args.level, "index": gamma0_index(args.level),
               "cusps": [dict(c.to_json(), label=c.label()) for c in cs]}
    rows = [[c.label(), c.e, c.width, c.N_e] for c in cs]
    text = "\n".join(["cusp  e  width  N_e"] + ["%-5s %2d %6d %4d" % tuple(r) for r in rows]
                     + ["sum of widths = %d = index" % sum(c.width for c in cs)])
    _emit(args, payload, rows, ["cusp", "e", "width", "N_e"], text)
    return 0


def cmd_classify(args) -> int:
    if args.m < 1 or args.max < 1:
        raise UsageError("--m and --max must be positive")
    found = enumerate_dd_candidates(args.max, args.max, args.m)
    payload = [c.to_json() for c in found]
    rows = [[c.t, c.N, c.k_x2, c.m] for c in found]
    text = "\n".join("(t, N; k) = (%d, %d; %s)" % (c.t, c.N, c.weight) for c in found)
    _emit(args, payload, rows, ["t", "N", "k_x2", "m"], text)
    return 0


def cmd_expand(args) -> int:
    f = _form(args.form)
    P = _prec(args)
    if args.cusp:
        c = _parse_cusp(args.cusp, f.level)
        s = f.cusp_expansion(c, P)
        title = "%s | M_%s" % (f.name, c.label())
    else:
        s = f.expansion(P)
        title = f.name
    s = s.to_rational()
    payload = {"form": f.name, "weight_x2": f.weight_x2, "index": str(f.index), "level": f.level,
               "cusp": args.cusp or "inf", "series": s.to_json()}
    _emit_series(args, s, payload, title)
    return 0


def _siegel_payload(F: SiegelForm, extra: dict | None = None) -> dict:
    d = F.to_json()
    if extra:
        d.update(extra)
    return d


def cmd_lift(args) -> int:
    f = _form(args.form)
    P = _prec(args)
    try:
        k, t, N, q = lift_parameters(f)
    except ValueError as exc:
        raise UsageError(str(exc))
    ctx = Context(max(P, Fraction(1)), cache=None if args.no_cache else _cache(args))
    F = ctx.lift(f.name, P, q * t * P)
    _emit_series(args, F.series, _siegel_payload(F), "%s, weight %s, V_t with t = %s"
                 % (F.name, F.weight, F.t))
    return 0


def cmd_borcherds(args) -> int:
    f = _form(args.form)
    P = _prec(args)
    if f.weight != 0:
        raise UsageError("%s has weight %s; products need weight 0" % (f.name, f.weight))
    ctx = Context(max(P, Fraction(1)), cache=None if args.no_cache else _cache(args))
    F = ctx.product(f.name, P, f.index * P)
    inp = collect_cusp_data(f, 1)
    w = weyl_data(inp)
    extra = {"weyl": w.to_json(), "character": character_data(inp)}
    _emit_series(args, F.series, _siegel_payload(F, extra),
                 "B(%s): A, B, C = %s, %s, %s; weight %s" % (f.name, w.A, w.B, w.C, w.weight))
    return 0


def cmd_trace(args) -> int:
    f = _form(args.form)
    P = _prec(args)
    if f.level % args.to:
        raise UsageError("target level must divide %d" % f.level)
    try:
        tr = trace_to(f, args.to)
    except ValueError as exc:
        raise UsageError(str(exc))
    s = tr.expansion(P).to_rational()
    payload = {"form": tr.name, "level": args.to, "index": str(tr.index), "series": s.to_json()}
    _emit_series(args, s, payload, tr.name)
    return 0


def cmd_verify(args) -> int:
    if args.list:
        _emit(args, [{"id": c.id, "anchor": c.anchor} for c in CASES],
              [[c.id, c.anchor] for c in CASES], ["id", "anchor"],
              "\n".join("%-28s %s" % (c.id, c.anchor) for c in CASES))
        return 0
    unknown = [i for i in args.ids if i not in CASE_IDS]
    if unknown:
        raise UsageError("unknown identity %s" % ", ".join(unknown))
    P = _prec(args)
    try:
        ctx = Context(P, cache=None if args.no_cache else _cache(args))
    except WindowTooSmall as exc:
        raise UsageError(str(exc))
    results = verify_all(ctx, args.ids or None)
    payload = {"prec": str(P), "results": [r.to_json() for r in results],
               "ok": all(r.ok for r in results)}
    rows = [[r.id, "pass" if r.ok else "FAIL", "%.2f" % r.seconds, r.detail] for r in results]
    text = "\n".join("%-4s %-28s %6.2fs  %s" % ("ok" if r.ok else "FAIL", r.id, r.seconds, r.detail)
                     for r in results)
    _emit(args, payload, rows, ["id", "status", "seconds", "detail"], text)
    return 0 if payload["ok"] else 1


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError("cannot read %r as a complex number" % text)


def cmd_eval(args) -> int:
    f = _form(args.form)
    tau, z = _complex(args.tau), _complex(args.z)
    if tau.imag <= 0:
        raise UsageError("tau must have positive imaginary part")
    try:
        v = eval_numeric(f.name, tau, z)
    except ValueError as exc:
        raise UsageError(str(exc))
    payload = {"form": f.name, "tau": [tau.real, tau.imag], "z": [z.real, z.imag],
               "value": [v.real, v.imag]}
    _emit(args, payload, [[f.name, repr(tau), repr(z), repr(v)]], ["form", "tau", "z", "value"],
          "%s(%s, %s) = %r" % (f.name, tau, z, v))
    return 0


def cmd_cache(args) -> int:
    c = _cache(args)
    if args.action == "clear":
        n = c.clear()
        _emit(args, {"removed": n}, [[n]], ["removed"], "removed %d entries from %s" % (n, c.root))
        return 0
    entries = c.entries()
    rows = [[e["key"], e.get("kind"), e.get("name"), json.dumps(e.get("window")), e.get("bytes")]
            for e in entries]
    text = "\n".join(["%s (%d entries)" % (c.root, len(entries))]
                     + ["%s %-9s %-14s %s" % tuple(r[:4]) for r in rows])
    _emit(args, {"root": str(c.root), "entries": entries}, rows,
          ["key", "kind", "name", "window", "bytes"], text)
    return 0


def cmd_registry(args) -> int:
    rows = []
    for name in registry():
        f = get(name)
        rows.append([name, str(f.weight), str(f.index), f.level, f.description])
    _emit(args, [dict(zip(["name", "weight", "index", "level", "description"], r)) for r in rows],
          rows, ["name", "weight", "index", "level", "description"],
          "\n".join("%-15s k=%-4s t=%-4s N=%d  %s" % tuple(r) for r in rows))
    return 0


# ----------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", default=argparse.SUPPRESS,
                        help="window: tau-exponent <= P, omega-exponent <= t P (default 2)")
    common.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", default=argparse.SUPPRESS,
                        help="cache directory (default $DDFORMS_CACHE or ~/.cache/ddforms)")
    common.add_argument("--seed-free", action="store_true", default=argparse.SUPPRESS,
                        help="accepted for compatibility; every computation is deterministic")
    common.add_argument("--limit", type=int, default=argparse.SUPPRESS,
                        help="terms shown in text output")

    p = argparse.ArgumentParser(prog="ddforms", parents=[common],
                                description="Exact Fourier expansions of dd-modular Siegel forms.")
    p.add_argument("--version", action="version", version="ddforms " + __version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cusps", parents=[common], help="cusps and widths of Gamma_0(N)")
    s.add_argument("--level", type=int, required=True)
    s.set_defaults(func=cmd_cusps)

    s = sub.add_parser("classify", parents=[common], help="(t, N; k) candidate triplets")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--max", type=int, default=500)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("expand", parents=[common], help="expansion of a Jacobi form")
    s.add_argument("form")
    s.add_argument("--cusp", help="cusp label such as 0, 1/2 or inf")
    s.set_defaults(func=cmd_expand)

    for name, func, helptext in (("lift", cmd_lift, "arithmetic lift of a Jacobi form"),
                                 ("borcherds", cmd_borcherds, "Borcherds product of a weight-0 form")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("form")
        s.add_argument("--no-cache", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("trace", parents=[common], help="trace to Gamma_0(M)")
    s.add_argument("form")
    s.add_argument("--to", type=int, default=1)
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("verify", parents=[common], help="run identity checks")
    s.add_argument("ids", nargs="*")
    s.add_argument("--list", action="store_true")
    s.add_argument("--no-cache", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("eval", parents=[common], help="numerical value of a xi-form")
    s.add_argument("form")
    s.add_argument("--tau", required=True)
    s.add_argument("--z", default="0")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("cache", parents=[common], help="inspect or clear the cache")
    s.add_argument("action", choices=("ls", "clear"))
    s.set_defaults(func=cmd_cache)

    s = sub.add_parser("registry", parents=[common], help="list the named Jacobi forms")
    s.add_argument("action", choices=("list",))
    s.set_defaults(func=cmd_registry)
    return p


_DEFAULTS = {"prec": "2", "format": "text", "cache_dir": None, "seed_free": False, "limit": 40}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        return args.func(args)
    except UsageError as exc:
        print("ddforms: error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
