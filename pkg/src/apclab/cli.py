"""Command-line front end.

Exit codes: 0 success or agreement, 1 mismatch (or a positivity witness
where nonpositivity was expected), 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import boxsign, eschenburg, geomcheck, topology, torus
from .exactpoly import rational_str

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

SCAN_FIELDS = ("p", "q1", "q2", "theorem", "poly", "agree")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fmt: str = "text"
    output: str | None = None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def emit_report(report, config: RunConfig) -> None:
    """Write ``report`` (a string, or a list of JSON rows) to the configured sink."""
    if isinstance(report, str):
        text = report if report.endswith("\n") else report + "\n"
    elif config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SCAN_FIELDS, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(report)
        text = buf.getvalue()
    elif config.fmt == "json":
        text = _dump(report) + "\n"
    else:
        text = "".join(_dump(row) + "\n" for row in report)
    if config.output is None:
        sys.stdout.write(text)
        return
    try:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {config.output}: {exc.strerror}") from exc


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _triple(args) -> eschenburg.Triple:
    t = eschenburg.Triple(args.p, args.q1, args.q2)
    if not eschenburg.is_admissible(t) and tuple(t) not in eschenburg.TABULATED:
        raise UsageError(f"{t} is not admissible")
    return t


def _workers(args) -> int:
    return args.workers or eschenburg.default_workers()


def _add_triple(sp) -> None:
    for name in ("p", "q1", "q2"):
        sp.add_argument(name, type=int)


def _text_or_json(args, obj: dict, lines: list[str]) -> str:
    return _dump(obj) if args.json else "\n".join(lines)


# --- commands ---------------------------------------------------------------

def cmd_classify(args, config):
    t = _triple(args)
    out, verdicts = {"triple": list(t)}, []
    if args.method in ("theorem", "both"):
        c = eschenburg.classify_theorem(t)
        out["theorem"] = {"verdict": c.verdict.value, "detail": c.detail}
        verdicts.append(c.verdict)
    if args.method in ("poly", "both"):
        try:
            c = eschenburg.classify_polynomial(t, args.budget)
        except eschenburg.BudgetExhausted as exc:
            emit_report(_text_or_json(args, {**out, "poly": None, "error": str(exc)},
                                      [f"{t}: {exc}"]), config)
            return EXIT_BUDGET
        out["poly"] = {"verdict": c.verdict.value, "provenance": c.provenance.value,
                       "detail": c.detail}
        verdicts.append(c.verdict)
    lines = [f"{t} {k}: {v['verdict']} ({v['detail']})" for k, v in out.items() if k != "triple"]
    emit_report(_text_or_json(args, out, lines), config)
    return EXIT_OK if len(set(verdicts)) == 1 else EXIT_MISMATCH


def cmd_certify(args, config):
    t = _triple(args)
    cert = boxsign.decide_nonpositive(eschenburg.build_f(t), budget=args.budget)
    emit_report(cert.dumps(), config)
    if cert.budget_exhausted and not cert.is_positive:
        return EXIT_BUDGET
    if tuple(t) in eschenburg.TABULATED:
        return EXIT_OK
    expected = eschenburg.classify_theorem(t).almost_positive
    return EXIT_MISMATCH if expected and cert.is_positive else EXIT_OK


def cmd_scan(args, config):
    report = eschenburg.cross_validate(args.bound, args.budget, _workers(args))
    emit_report([r.to_json() for r in report.rows], config)
    print(f"scanned {len(report.rows)} admissible triples (bound {args.bound}), "
          f"{len(report.mismatches)} mismatches, {len(report.exhausted)} exhausted",
          file=sys.stderr)
    if report.mismatches:
        return EXIT_MISMATCH
    return EXIT_BUDGET if report.exhausted else EXIT_OK


def cmd_invariants(args, config):
    inv = topology.invariants(args.n, (args.p, args.q1, args.q2))
    order = inv.h2n_order if inv.h2n_order is not None else "undetermined (ell = 0)"
    lines = [f"dim = {inv.dim}", f"ell = {inv.ell}", f"|H^{2 * args.n}| = {order}"]
    emit_report(_text_or_json(args, inv.to_json(), lines), config)
    return EXIT_OK


def cmd_inhom(args, config):
    t = _triple(args)
    cert = topology.inhomogeneity_certificate(args.n, t, args.search_bound)
    body = cert.to_json()
    lines = [f"{k}: {body[k]}" for k in sorted(body)]
    emit_report(_text_or_json(args, body, lines), config)
    return EXIT_OK


def cmd_inhom_search(args, config):
    if args.n % 2 == 0:
        raise UsageError("inhom-search needs odd n")
    ps = topology.prime_search(args.n, args.count)
    body = {"n": args.n, "p": ps, "ell": [str(topology.ell(args.n, (p, 1, 1))) for p in ps]}
    emit_report(_text_or_json(args, body, [" ".join(map(str, ps))]), config)
    return EXIT_OK


def cmd_torus(args, config):
    if args.normalize:
        a = torus.TorusAction(*args.normalize)
        nf = torus.normalize_action(a)
        body = {"input": list(a.as_tuple()), "normal_form": list(nf.as_tuple()),
                "free": torus.is_free(a)}
        emit_report(_text_or_json(args, body, [str(nf.as_tuple())]), config)
        return EXIT_OK
    e = torus.enumerate_free(args.bound)
    body = {"bound": e.bound, "tested": e.tested, "survivors": e.survivors,
            "classes": sorted(list(c.as_tuple()) for c in e.classes),
            "unreached": sorted(list(a.as_tuple()) for a in e.unreached),
            "ps_violations": sorted(list(a.as_tuple()) for a in e.ps_violations),
            "canonical_only": e.canonical_only}
    lines = [f"tested {e.tested}, free {e.survivors}"] + [f"class {tuple(c)}" for c in body["classes"]]
    emit_report(_text_or_json(args, body, lines), config)
    return EXIT_OK if e.canonical_only and not e.ps_violations else EXIT_MISMATCH


def _seeded_params(seed: int) -> geomcheck.MetricParams:
    if seed == 0:
        return geomcheck.DEFAULT_PARAMS
    rng = random.Random(seed)
    return geomcheck.MetricParams(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9))


def cmd_verify_geometry(args, config):
    t = _triple(args)
    if tuple(t) in geomcheck.EXCLUDED:
        raise UsageError(f"{t} is excluded from the plane construction")
    params = _seeded_params(args.seed)
    rows = geomcheck.verify_grid(t, args.grid, params, args.n, _workers(args))
    bad = [g for g in rows if not g.consistent]
    body = {"triple": list(t), "grid": args.grid, "n": args.n, "seed": args.seed,
            "lambda1": params.lambda1, "lambda2": params.lambda2,
            "points": [g.to_json() for g in rows], "inconsistent": len(bad)}
    built = sum(g.constructed for g in rows)
    worst = max((g.max_residual for g in rows if g.constructed), default=0.0)
    lines = [f"{t}: {built}/{len(rows)} points carry a zero plane, "
             f"max residual {worst:.2e}, {len(bad)} inconsistent"]
    emit_report(_text_or_json(args, body, lines), config)
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_verify_a0(args, config):
    rep = geomcheck.quasipositive_A0_check()
    body = rep.to_json()
    lines = [f"Im(y3) candidates: {rep.im_y3_roots_mirrored}",
             f"Re(y3)^2 values: {rep.re_y3_squared}",
             f"contradiction: {rep.contradiction}"]
    emit_report(_text_or_json(args, body, lines), config)
    ok = rep.contradiction and rep.printed_solution_gap < 1e-10
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_poly(args, config):
    t = _triple(args)
    f = eschenburg.build_f(t)
    if args.dump_grid:
        d = args.dump_grid
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "f", "f_float"])
        for i in range(d + 1):
            for j in range(d + 1):
                x, y = Fraction(i, d), Fraction(j, d)
                v = f(x, y)
                w.writerow([rational_str(x), rational_str(y), rational_str(v), repr(float(v))])
        emit_report(buf.getvalue(), config)
        return EXIT_OK
    try:
        g = eschenburg.build_g(t)
    except ValueError:
        g = None
    body = {"triple": list(t), "f": f.to_json(), "g": g.to_json() if g is not None else None}
    lines = [f"f = {f}", f"g = {g}" if g is not None else "g undefined (p = q1 + 2 q2)"]
    emit_report(_text_or_json(args, body, lines), config)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apclab", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("text", "json", "jsonl", "csv"), default=None,
                        dest="fmt")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, triple=True, json_flag=True):
        sp = sub.add_parser(name, help=help_)
        if triple:
            _add_triple(sp)
        if json_flag:
            sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=fn)
        return sp

    sp = add("classify", cmd_classify, "classify one triple")
    sp.add_argument("--method", choices=("theorem", "poly", "both"), default="both")
    sp.add_argument("--budget", type=_positive_int, default=boxsign.DEFAULT_BUDGET)

    sp = add("certify", cmd_certify, "emit a sign certificate for f", json_flag=False)
    sp.add_argument("--budget", type=_positive_int, default=boxsign.DEFAULT_BUDGET)

    sp = add("scan", cmd_scan, "cross-validate both classifiers", triple=False, json_flag=False)
    sp.add_argument("--bound", type=_positive_int, default=eschenburg.DEFAULT_SCAN_BOUND)
    sp.add_argument("--budget", type=_positive_int, default=boxsign.DEFAULT_BUDGET)
    sp.add_argument("--workers", type=_positive_int)

    for name, fn, help_ in (("invariants", cmd_invariants, "dimension and ell"),
                            ("inhom", cmd_inhom, "strong-inhomogeneity certificate")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("n", type=int)
        _add_triple(sp)
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=fn)
        if name == "inhom":
            sp.add_argument("--search-bound", type=_positive_int, default=20)

    sp = add("inhom-search", cmd_inhom_search, "primes 4kn-1 in the (4k+1, 1, 1) family",
             triple=False)
    sp.add_argument("n", type=int)
    sp.add_argument("--count", type=_positive_int, default=10)

    sp = add("torus-enumerate", cmd_torus, "free T^2 actions up to a bound", triple=False)
    sp.add_argument("--bound", type=int, default=5)
    sp.add_argument("--normalize", type=int, nargs=5, metavar=("P", "Q1", "Q2", "S1", "S2"))

    sp = add("verify-geometry", cmd_verify_geometry, "build zero planes on a grid")
    sp.add_argument("--grid", type=_positive_int, default=12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--workers", type=_positive_int)

    add("verify-a0", cmd_verify_a0, "positive curvature check at the fixed frame", triple=False)

    sp = add("poly", cmd_poly, "print f and g")
    sp.add_argument("--dump-grid", type=_positive_int, metavar="G",
                    help="CSV of exact f samples on a (G+1)x(G+1) grid")
    return parser


def _validate(parser, args) -> None:
    if getattr(args, "n", 2) < 2:
        parser.error("n must be at least 2")
    if args.command == "torus-enumerate" and args.bound < 2:
        parser.error("--bound must be at least 2")


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    fmt = args.fmt or ("jsonl" if args.command == "scan" else "text")
    config = RunConfig(args.command, fmt, args.output)
    try:
        return args.func(args, config)
    except UsageError as exc:
        print(f"apclab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"apclab {args.command}: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


def main() -> None:
    try:
        code = run()
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    sys.exit(code)


if __name__ == "__main__":
    main()
