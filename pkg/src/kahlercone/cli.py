"""Command-line interface: ``kahlercone <command> ...``.

Exit codes: 0 when every check passes, 1 when any check fails or an input
is rejected, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, convex, hodge_metric, inequalities, suite
from .algebra import FIXTURES, AlgebraError, fixture as make_fixture, load_algebra
from .lefschetz import is_polarized
from .report import Record, VerificationReport, fmt_point
from .scalars import EXACT, FLOAT, fmt_rational, parse_rational


class UsageError(Exception):
    pass


def _algebra(args):
    if getattr(args, "file", None):
        return load_algebra(args.file)
    if not getattr(args, "fixture", None):
        raise UsageError("one of --fixture or --file is required")
    try:
        return make_fixture(args.fixture)
    except ValueError as exc:
        raise UsageError(f"{exc}; known fixtures: {', '.join(FIXTURES)}") from None


def _fixture_label(args, alg) -> str:
    return args.fixture if getattr(args, "fixture", None) else alg.name


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_report(rep: VerificationReport, args) -> int:
    text = rep.to_csv() if args.format == "csv" else rep.to_json()
    _emit(text, args.out)
    s = rep.summary()
    print(f"{s['passed']}/{s['total']} checks passed", file=sys.stderr)
    for r in rep.failures()[:20]:
        print(f"FAIL {r.fixture} {' '.join(r.point)} {r.identity} {r.detail} residual={r.residual}",
              file=sys.stderr)
    return 0 if rep.passed else 1


def _coords(text: str) -> list:
    try:
        return [parse_rational(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad coordinate list {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_fixtures_list(args) -> int:
    rows = [("name", "n", "N", "rank")]
    for key, make in FIXTURES.items():
        a = make()
        rows.append((key, str(a.n), str(a.N), str(a.rank)))
    if args.dir:
        d = Path(args.dir)
        if not d.is_dir():
            raise UsageError(f"{args.dir} is not a directory")
        for f in sorted(d.glob("*.json")):
            try:
                a = load_algebra(f)
                rows.append((f.name, str(a.n), str(a.N), str(a.rank)))
            except AlgebraError as exc:
                rows.append((f.name, "-", "-", f"invalid: {exc}"))
    width = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = ["  ".join(r[i].ljust(width[i]) for i in range(3)) + "  " + r[3] for r in rows]
    _emit("\n".join(lines) + "\n", None)
    return 0


def cmd_verify(args) -> int:
    alg = _algebra(args)
    label = _fixture_label(args, alg)
    try:
        rep = suite.verify(alg, args.points, args.seed, args.mode, fixture=label)
    except suite.SamplingError as exc:
        rep = VerificationReport(seed=args.seed)
        rep.add(Record(label, [], "sampling", str(exc), args.mode, 0.0, False))
    return _emit_report(rep, args)


def _s_values(steps: int) -> list:
    if steps <= 0:
        return []
    if steps == 1:
        return [Fraction(0)]
    return [Fraction(i, steps - 1) for i in range(steps)]


def _segment(args, alg):
    a = _coords(args.start) if args.start else list(alg.sample_point)
    b = _coords(args.end) if args.end else [2 * x for x in alg.sample_point]
    if len(a) != alg.N or len(b) != alg.N:
        raise UsageError(f"segment endpoints need {alg.N} coordinates")
    return a, b


def cmd_scan(args) -> int:
    alg = _algebra(args)
    label = _fixture_label(args, alg)
    a, b = _segment(args, alg)
    ok = True
    if args.kind == "hsc":
        flavor = hodge_metric.canonical_flavor(args.flavor)
        if flavor == hodge_metric.WP:
            raise UsageError("HSC scans need --flavor lu or lu-h0 (no bound is attached to wp)")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(hodge_metric.CSV_COLUMNS)
        for s in _s_values(args.steps):
            t = [(1 - s) * x + s * y for x, y in zip(a, b)]
            tm = [float(x) for x in t] if args.mode == FLOAT else t
            if not is_polarized(alg, tm, args.mode):
                w.writerow([label, " ".join(fmt_point(t)), flavor, "", "", "", "", args.mode + " (outside cone)"])
                ok = False
                continue
            samples = []
            rep = hodge_metric.bound_check(alg, tm, args.directions, args.seed, args.mode,
                                           flavors=(flavor,), bisectional=False, fixture=label,
                                           samples=samples)
            ok = ok and rep.passed
            for smp in samples:
                w.writerow(smp.row())
        _emit(buf.getvalue(), args.out)
        return 0 if ok else 1
    # log-convexity of V(w(s), w(s), fixed) along the segment
    fixed = [list(alg.sample_point)] * (alg.n - 2)
    rows = inequalities.log_convexity_scan(alg, a, b, fixed, s_values=_s_values(args.steps))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fixture", "start", "end", "s", "V", "neg_log_V_second", "kt_defect", "pass"])
    for r in rows:
        if not r.in_cone:
            w.writerow([label, " ".join(fmt_point(a)), " ".join(fmt_point(b)), fmt_rational(r.s), "", "", "", 0])
            ok = False
            continue
        val = r.neg_log_second
        passed = val >= 0 and r.kt_defect >= 0
        ok = ok and passed
        w.writerow([label, " ".join(fmt_point(a)), " ".join(fmt_point(b)), fmt_rational(r.s),
                    fmt_rational(r.V), fmt_rational(val), fmt_rational(r.kt_defect), int(passed)])
    _emit(buf.getvalue(), args.out)
    return 0 if ok else 1


def cmd_ineq(args) -> int:
    alg = _algebra(args)
    label = _fixture_label(args, alg)
    rep = VerificationReport(seed=args.seed)
    try:
        pts = suite.random_points(alg, 2 * args.points, args.seed)
    except suite.SamplingError as exc:
        rep.add(Record(label, [], "sampling", str(exc), EXACT, 0.0, False))
        return _emit_report(rep, args)
    fixed = [list(alg.sample_point)] * (alg.n - 2)
    for i in range(args.points):
        w1, w2 = pts[2 * i], pts[2 * i + 1]
        rep.extend(inequalities.kt_check(alg, w1, w2, fixed, fixture=label))
        rep.extend(inequalities.kt_check(alg, w1, [3 * x for x in w1], fixed, fixture=label))
        rep.extend(inequalities.log_convexity_check(alg, w1, w2, fixed, args.steps, fixture=label))
        lhs, rhs = inequalities.effective_bm(alg, w1, suite.random_directions(alg.N, 1, args.seed + i)[0])
        rep.add(Record(label, fmt_point(w1), "effective_bm", f"lhs={lhs}", EXACT, 0.0 if lhs == rhs else 1.0,
                       lhs == rhs))
    return _emit_report(rep, args)


def _bodies(args):
    bodies = []
    for spec in args.box or []:
        bodies.append(convex.Box(_coords(spec)))
    if args.polygons:
        bodies.extend(convex.read_polygons(Path(args.polygons).read_text(encoding="utf-8")))
    return bodies


def cmd_convex(args) -> int:
    try:
        bodies = _bodies(args)
    except convex.ConvexError as exc:
        print(f"invalid body: {exc}", file=sys.stderr)
        return 1
    rep = VerificationReport()
    if not bodies:
        sq, tr = convex.unit_square(), convex.standard_triangle()
        rep.extend(convex.bm_check(sq, sq.scaled(2), label="squares"))
        rep.extend(convex.bm_check(sq, tr, label="square+triangle"))
        rep.extend(convex.af_check(convex.box(1, 1, 1), convex.box(1, 2, 1), convex.box(2, 1, 1), label="boxes"))
        rep.extend(convex.log_convexity_check(sq, tr, args.steps, label="square+triangle"))
        return _emit_report(rep, args)
    try:
        if len(bodies) >= 2:
            rep.extend(convex.bm_check(bodies[0], bodies[1]))
            rep.extend(convex.log_convexity_check(bodies[0], bodies[1], args.steps))
            n = bodies[0].dim
            af = (bodies + [bodies[-1]] * n)[:n] if len(bodies) < n else bodies[:n]
            if n >= 2:
                rep.extend(convex.af_check(*af))
        else:
            v = convex.volume(bodies[0])
            rep.add(Record("bodies", [str(bodies[0])], "volume", fmt_rational(v), EXACT, 0.0, True))
    except convex.ConvexError as exc:
        print(f"invalid bodies: {exc}", file=sys.stderr)
        return 1
    return _emit_report(rep, args)


def cmd_load_check(args) -> int:
    try:
        alg = load_algebra(args.path)
    except AlgebraError as exc:
        print(f"invalid algebra: {exc}", file=sys.stderr)
        return 1
    pol = is_polarized(alg, alg.sample_point)
    info = {
        "name": alg.name,
        "n": alg.n,
        "N": alg.N,
        "rank": alg.rank,
        "dims": {f"{p},{q}": d for (p, q), d in sorted(alg.dims().items())},
        "sample_point": fmt_point(alg.sample_point),
        "sample_point_polarized": bool(pol),
        "failures": pol.failures,
    }
    _emit(json.dumps(info, indent=1, sort_keys=True), None)
    return 0 if pol else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kahlercone", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--fixture", help=f"built-in algebra ({', '.join(FIXTURES)})")
        g.add_argument("--file", help="algebra JSON file")

    def output(sp, default="json"):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default=default)

    fx = sub.add_parser("fixtures", help="built-in fixtures")
    fx_sub = fx.add_subparsers(dest="action", required=True)
    fl = fx_sub.add_parser("list", help="list fixtures with n, N and Rank H")
    fl.add_argument("--dir", help="also list algebra files in this directory")
    fl.set_defaults(func=cmd_fixtures_list)

    v = sub.add_parser("verify", help="run every identity at random polarized points")
    source(v)
    v.add_argument("--points", type=_nonneg, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mode", choices=(EXACT, FLOAT), default=EXACT)
    output(v)
    v.set_defaults(func=cmd_verify)

    sc = sub.add_parser("scan", help="HSC or log-convexity scan along a segment (CSV)")
    source(sc)
    sc.add_argument("--kind", choices=("hsc", "logconv"), default="hsc")
    sc.add_argument("--start", help="segment start, comma separated rationals (default: sample point)")
    sc.add_argument("--end", help="segment end (default: twice the sample point)")
    sc.add_argument("--steps", type=_nonneg, default=5, help="number of points on the segment")
    sc.add_argument("--directions", type=_nonneg, default=8, help="HSC directions per point")
    sc.add_argument("--flavor", default="lu", help="lu | lu-h0 | wp")
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--mode", choices=(EXACT, FLOAT), default=EXACT)
    sc.add_argument("--out")
    sc.add_argument("--format", choices=("csv",), default="csv")
    sc.set_defaults(func=cmd_scan)

    iq = sub.add_parser("ineq", help="Khovanskii-Teissier, log-convexity and effective Brunn-Minkowski")
    source(iq)
    iq.add_argument("--points", type=_nonneg, default=10)
    iq.add_argument("--seed", type=int, default=0)
    iq.add_argument("--steps", type=_nonneg, default=4)
    output(iq)
    iq.set_defaults(func=cmd_ineq)

    cv = sub.add_parser("convex", help="Brunn-Minkowski and Alexandrov-Fenchel on boxes or polygons")
    cv.add_argument("--box", action="append", help="box side lengths, e.g. 1,2,3 (repeatable)")
    cv.add_argument("--polygons", help="text file of polygon vertices ('x y' lines, blank line between)")
    cv.add_argument("--steps", type=_nonneg, default=4)
    output(cv)
    cv.set_defaults(func=cmd_convex)

    lc = sub.add_parser("load-check", help="validate an algebra file")
    lc.add_argument("path")
    lc.set_defaults(func=cmd_load_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except AlgebraError as exc:
        print(f"invalid algebra: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
