"""Command-line front door: ``cdiffkit <verb> [options]``.

Exit status is 0 on success, 1 when a verification or an asserted
property fails, and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import families, report
from .cdiff import cddt_table, cdu
from .cubic import classify_cubic
from .funcspec import SpecError, is_permutation, parse_element, parse_func
from .gf import FieldError, parse_field
from .walsh import boolean_part, walsh_point, walsh_spectrum

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- helpers ------------------------------------------------------------------

def _field(args, required=True):
    lines = getattr(args, "field", None) or []
    if not lines:
        if required:
            raise UsageError("this command needs --field p,n[,modulus]")
        return None
    return parse_field(lines[-1])


def _emit(args, payload, text):
    if args.json:
        print(report.to_json(payload))
    else:
        print(text)


def _elem_text(ctx, v):
    v = int(v)
    if v == 0:
        return "0"
    return f"g^{int(ctx.log_table[v])}"


def _c_values(ctx, specs):
    """Expand --c arguments: all, subfield:m, or single elements."""
    out = []
    for spec in specs or ["all"]:
        spec = spec.strip()
        if spec == "all":
            out.extend(range(ctx.q))
        elif spec.startswith("subfield:"):
            out.extend(int(c) for c in ctx.subfield_elements(int(spec.split(":", 1)[1])))
        else:
            out.append(parse_element(ctx, spec).value)
    return list(dict.fromkeys(out))


def _func(ctx, args):
    bindings = {}
    if getattr(args, "m", None) is not None:
        bindings["m"] = args.m
    if getattr(args, "delta", None) is not None:
        bindings["d"] = parse_element(ctx, args.delta).value
    return parse_func(ctx, args.func, **bindings)


# -- verbs --------------------------------------------------------------------

def cmd_field(args):
    ctx = _field(args)
    payload = {
        "field": ctx.describe(),
        "p": ctx.p,
        "n": ctx.n,
        "q": ctx.q,
        "modulus": list(ctx.modulus),
        "g": int(ctx.g),
        "g_coords": [int(c) for c in ctx.coords(ctx.g)],
    }
    _emit(args, payload, "\n".join(f"{k}: {v}" for k, v in payload.items()))
    return EXIT_OK


def cmd_func(args):
    ctx = _field(args)
    f = _func(ctx, args)
    table = f.compile()
    perm, witness = is_permutation(table)
    payload = {"field": ctx.describe(), "spec": str(f), "permutation": perm,
               "collision": list(witness) if witness else None}
    if args.x is not None:
        x = parse_element(ctx, args.x).value
        payload["x"] = x
        payload["value"] = int(table.values[x])
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "F(x)"])
            w.writerows((x, int(v)) for x, v in enumerate(table.values))
    text = f"F(X) = {f}\npermutation: {perm}"
    if witness:
        text += f" (F({witness[0]}) = F({witness[1]}))"
    if args.x is not None:
        text += f"\nF({args.x}) = {_elem_text(ctx, payload['value'])}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_cubic(args):
    ctx = _field(args)
    a = parse_element(ctx, args.a)
    verdict = classify_cubic(a)
    payload = {"field": ctx.describe(), "a": a.value, **verdict.to_dict()}
    roots = ", ".join(_elem_text(ctx, r) for r in verdict.roots) or "none"
    _emit(args, payload, f"X^3 + X + {_elem_text(ctx, a.value)}: {verdict.root_count} roots "
                         f"({verdict.criterion}); roots: {roots}")
    return EXIT_OK


def cmd_walsh(args):
    ctx = _field(args)
    values = _func(ctx, args).compile().values
    # GF(p)-valued expressions are used as they are; others through Tr(F(x))
    f = values if (values < ctx.p).all() else boolean_part(ctx, values)
    if args.v is not None:
        points = [walsh_point(ctx, f, parse_element(ctx, args.v).value)]
    else:
        spec = walsh_spectrum(ctx, f)
        points = [spec[v] for v in range(ctx.q)]
    payload = {"field": ctx.describe(), "points": [p.to_dict() for p in points]}
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["v"] + [f"N{j}" for j in range(ctx.p)] + ["sq_magnitude"])
            for p in points:
                w.writerow([p.v, *p.counts, p.sq_magnitude])
    lines = [f"v={p.v} counts={list(p.counts)} |W|^2={p.sq_magnitude}" for p in points]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_cdu(args):
    ctx = _field(args)
    table = _func(ctx, args).compile()
    cs = _c_values(ctx, args.c)
    summaries = [cdu(table, c, witnesses=args.witnesses) for c in cs]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["c", "a", "b", "count"])
            for c in cs:
                full = cddt_table(table, c)
                a0 = 1 if c == 1 else 0
                for i, row in enumerate(full):
                    w.writerows((c, i + a0, b, int(n)) for b, n in enumerate(row))
    payload = {"field": ctx.describe(), "summaries": [s.to_dict() for s in summaries]}
    lines = [f"c={_elem_text(ctx, s.c)}: uniformity {s.uniformity} ({s.label})" for s in summaries]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_family(args):
    fid = args.id.upper()
    ctx = _field(args, required=False) or families.family_field(fid, args.m)
    if args.action == "qualifying":
        deltas = [int(d) for d in families.qualifying_deltas(fid, args.m, ctx)]
        payload = {"family": fid, "m": args.m, "field": ctx.describe(), "deltas": deltas}
        _emit(args, payload, " ".join(_elem_text(ctx, d) for d in deltas))
        return EXIT_OK
    if args.delta is None:
        raise UsageError("family build needs --delta")
    inst = families.build(fid, args.m, parse_element(ctx, args.delta).value, ctx)
    perm, witness = is_permutation(inst.spec.compile())
    payload = inst.to_dict()
    payload["permutation"] = perm
    lines = [f"{fid} m={args.m} over {ctx.describe()}", f"F(X) = {inst.spec}"]
    for c in inst.precond_report:
        tag = "" if c.gating else " (informational)"
        lines.append(f"  [{'x' if c.holds else ' '}] {c.name}{tag}" + (f": {c.evidence}" if c.evidence else ""))
    lines.append(f"preconditions: {'pass' if inst.passes else 'fail'}; permutation: {perm}")
    _emit(args, payload, "\n".join(lines))
    # a passing instance that is not a bijection contradicts the family lemma
    return EXIT_FAIL if inst.passes and not perm else EXIT_OK


def cmd_verify(args):
    fields = report.fields_from_lines(args.field)
    reps = [report.verify(args.theorem, m, threads=args.threads, fields=fields, timing=args.timing)
            for m in args.m]
    payload = {"reports": [r.to_dict() for r in reps], "passed": all(r.passed for r in reps)}
    _emit(args, payload, "\n".join(r.summary() for r in reps))
    return EXIT_OK if payload["passed"] else EXIT_FAIL


def cmd_run_all(args):
    fields = report.fields_from_lines(args.field)
    progress = None if args.json else (lambda r: print(r.summary(), flush=True))
    agg = report.run_all(args.profile, threads=args.threads, fields=fields, timing=args.timing,
                         progress=progress)
    if args.json:
        print(agg.to_json())
    else:
        failed = [f"{r.theorem_id} m={r.m}" for r in agg.reports if not r.passed]
        print(f"run-all {args.profile}: {'PASS' if agg.passed else 'FAIL'}"
              + (f" (failed: {', '.join(failed)})" if failed else ""))
    return EXIT_OK if agg.passed else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def _global_flags(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--field", action="append", default=d if suppress else [],
                        help="field description p,n[,c0,...,cn]; repeatable for verify/run-all")
    parser.add_argument("--json", action="store_true", default=d if suppress else False,
                        help="emit JSON instead of text")
    parser.add_argument("--csv", metavar="PATH", default=d, help="also write a CSV table")
    parser.add_argument("--threads", type=int, default=d,
                        help=f"worker threads (default from ${report.THREADS_ENV} or 1)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cdiffkit", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help):
        p = sub.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        p.set_defaults(handler=func)
        return p

    verb("field", cmd_field, "describe a field")

    p = verb("func", cmd_func, "parse, render and test a function for bijectivity")
    p.add_argument("--func", required=True, help="function expression, e.g. '(X^pm + X + d)^19 + X'")
    p.add_argument("--m", type=int, help="binds m (used by pm)")
    p.add_argument("--delta", help="binds d, e.g. g^43")
    p.add_argument("--x", help="evaluate at this element")

    p = verb("cubic", cmd_cubic, "root count of X^3 + X + a over GF(2^n)")
    p.add_argument("--a", required=True)

    p = verb("walsh", cmd_walsh, "Walsh counts and squared magnitudes")
    p.add_argument("--func", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--delta")
    p.add_argument("--v", help="single point; default is the full spectrum")

    p = verb("cdu", cmd_cdu, "c-differential uniformity")
    p.add_argument("--func", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--delta")
    p.add_argument("--c", action="append", help="all | subfield:m | g^k | [coords]; repeatable")
    p.add_argument("--witnesses", type=int, default=4)

    p = verb("family", cmd_family, "build a family instance or list qualifying delta")
    p.add_argument("action", choices=["build", "qualifying"])
    p.add_argument("--id", required=True, choices=sorted(families.BUILDERS), type=str.upper)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta")

    p = verb("verify", cmd_verify, "run one theorem driver")
    p.add_argument("theorem", choices=sorted(report.DRIVERS))
    p.add_argument("--m", type=int, action="append", required=True)
    p.add_argument("--timing", action="store_true", help="include runtime_ms (breaks byte-identity)")

    p = verb("run-all", cmd_run_all, "every driver over a profile")
    p.add_argument("--profile", choices=["quick", "full"], default="quick")
    p.add_argument("--timing", action="store_true", help="include runtime_ms (breaks byte-identity)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = report.default_threads()
    try:
        return args.handler(args)
    except (UsageError, SpecError, FieldError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
