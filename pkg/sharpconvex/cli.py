"""Command-line front end.

Every command writes a report (JSON by default, CSV on request) to ``--out``
or stdout, prints a coloured PASS/FAIL line on stderr and exits 0 when every
requested verification passes, 1 when one fails or the numerics break down
and 2 on invalid input.
"""
import argparse
import csv
from contextlib import contextmanager
import json
import logging
import math
import sys

import numpy as np
from termcolor import colored

from . import convexity, logsobolev, ultraspherical
from .exceptions import ArgumentError, DomainError, SharpConvexError
from .internals import DEFAULT_TOLERANCE, check_tolerance
from .quadrature import expectation, resolve_order
from .spherical_means import sphere_mean
from .utils import content_hash, log_grid, parse_grid

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

FIG1_PS = (0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0)
FIG1_POINTS = 200
FIG1_STEP = 1e-6
FIG2_YS = (0.5, 0.3)
FIG2_QS = tuple(np.round(np.linspace(1.0, 2.0, 11), 10))
FIG2_POINTS = 500

ACCEPTANCE_NS = (2, 3, 4, 5)
ACCEPTANCE_PS = (0.5, 1.0, 1.5, 2.0)
SHARP_TUPLES = (
    (-1.0, 2.0, 4.0), (0.0, 1.0, 2.0), (0.0, 2.0, 4.0),
    (0.0, 6.0, 8.0), (1.0, 6.0, 8.0), (2.0, 6.0, 8.0)
)
SHARP_TOLERANCE = 5e-3


def _clean(value):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as text."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _fieldnames(rows):
    names = []
    for row in rows:
        for key in row:
            if key not in names:
                names.append(key)
    return names


def _write_csv(stream, rows):
    writer = csv.DictWriter(
        stream, fieldnames=_fieldnames(rows), restval="",
        lineterminator="\n"
    )
    writer.writeheader()
    for row in rows:
        writer.writerow({
            k: json.dumps(v) if isinstance(v, (list, dict)) else v
            for k, v in _clean(row).items()
        })


def write_report(payload, fmt, out=None):
    rows = payload["rows"]

    def emit(stream):
        if fmt == "csv":
            _write_csv(stream, rows)
        else:
            json.dump(_clean(payload), stream, sort_keys=True, indent=2)
            stream.write("\n")

    if out is None:
        emit(sys.stdout)
        return

    with open(out, "w", newline="") as f:
        emit(f)


def _figure1_rows():
    rows = []
    for p in FIG1_PS:
        for t in np.linspace(1.0, 3 / (2 - p), FIG1_POINTS):
            t = float(t)
            slope = (
                convexity.phi(p, t + FIG1_STEP)
                - convexity.phi(p, t - FIG1_STEP)
            ) / (2 * FIG1_STEP)
            rows.append({
                "p": p, "t": t,
                "phi": convexity.phi(p, t), "phi_prime": slope
            })
    return rows


def _figure2_rows():
    rows = []
    x = np.linspace(0.0, 1.0, FIG2_POINTS)
    for y in FIG2_YS:
        for q in FIG2_QS:
            q = float(q)
            top = 1 - y - (1 - y * y) * (1 - x)
            bottom = 1 - y + q * (1 - x) * (x - y)
            with np.errstate(divide="ignore", invalid="ignore"):
                value = np.where(bottom != 0, x ** q - top / bottom, np.nan)
            rows.extend(
                {"y": y, "q": q, "x": float(xi), "value": float(vi)}
                for xi, vi in zip(x, value)
            )
    return rows


_FIGURES = {"fig1": _figure1_rows, "fig2": _figure2_rows}


def figure_rows(which):
    if which not in _FIGURES:
        raise ArgumentError("unknown figure %r, expected one of %s"
                            % (which, sorted(_FIGURES)))
    return _FIGURES[which]()


def emit_figure_data(which, output_path):
    """Write the data behind a figure as CSV; returns the row count."""
    rows = figure_rows(which)
    with open(output_path, "w", newline="") as f:
        _write_csv(f, rows)
    return len(rows)


def _grid(text, default):
    return default if text is None else parse_grid(text)


@contextmanager
def _inputs():
    """Domain errors while checking command-line inputs are usage errors."""
    try:
        yield
    except DomainError as e:
        raise ArgumentError(str(e)) from e


def _report_row(report, **extra):
    row = dict(extra)
    row.update(report.as_dict())
    return row


def _verify_theorem(args, order, tol):
    with _inputs():
        lam = args.lam
        if lam is None:
            lam = convexity.sharp_lambda(args.n, args.p)

        params = convexity.TheoremParams(
            args.n, args.p, lam, _grid(args.a_grid, None)
        )

    report = convexity.verify_theorem(params, tol, order, args.jobs)
    return report.passed, [_report_row(report, n=args.n, p=args.p,
                                       **{"lambda": lam})]


def _best_lambda(args, order, tol):
    with _inputs():
        sharp = convexity.sharp_lambda(args.n, args.p)

    result = convexity.best_lambda(
        args.n, args.p, _grid(args.a_grid, None), order, args.jobs
    )
    row = {"n": args.n, "p": args.p, "sharp_lambda": sharp}
    row.update(result.as_dict())
    passed = result.consistent and (
        abs(result.limit_at_zero - sharp) <= result.tolerance
    )
    return passed, [row]


def _r_star_row(m, p, q, r, precision):
    try:
        bound = ultraspherical.necessary_r(m, p, q)
    except DomainError:
        bound = None

    return {
        "m": m, "p": p, "q": q, "r_star": r,
        "necessary_r": bound,
        "ratio": None if bound is None else r / bound,
        "precision": precision
    }


def _r_star(args, order, tol):
    with _inputs():
        ultraspherical.HypTuple(args.m, args.p, args.q, 0.0)

    r = ultraspherical.r_star(
        args.m, args.p, args.q, args.precision,
        _grid(args.b_grid, None), tol, order
    )
    row = _r_star_row(args.m, args.p, args.q, r, args.precision)
    bound = row["necessary_r"]
    return bound is None or r <= bound + args.precision, [row]


def _check_hyp(args, order, tol):
    with _inputs():
        r = args.r
        if r is None:
            r = ultraspherical.necessary_r(args.m, args.p, args.q)

        hyp = ultraspherical.HypTuple(args.m, args.p, args.q, r)

    report = ultraspherical.check_hyp(
        hyp, _grid(args.b_grid, None), tol, order, args.jobs
    )
    return report.passed, [_report_row(report, **hyp.as_dict())]


def _scan(args, order, tol):
    rows = ultraspherical.scan_region(
        parse_grid(args.m_grid), parse_grid(args.p_grid),
        parse_grid(args.q_grid), args.precision,
        _grid(args.b_grid, None), tol, order, args.jobs
    )
    bad = (ultraspherical.FAILED, ultraspherical.ABOVE)
    return not any(row["status"] in bad for row in rows), rows


def _logsobolev(args, order, tol):
    lams = _grid(args.lambda_grid, logsobolev.DEFAULT_LAMBDAS)
    ss = _grid(args.s_grid, logsobolev.DEFAULT_SS)
    bts = _grid(args.btilde_grid, logsobolev.DEFAULT_BTILDES)
    with _inputs():
        for lam in lams:
            for b in bts:
                logsobolev.LogSobParams(lam, 1.0, b)

    rows = [
        dict(check="chain", **row) for row in logsobolev.verify_chain(
            lams, ss, bts, tol, order, args.jobs
        )
    ]
    passed = all(
        row["mw"] and row["log"] and row["in02"] and row["consistent"]
        for row in rows
    )

    for lam in lams:
        for s in ss:
            for a in logsobolev.DEFAULT_MOMENT_AS:
                report = logsobolev.verify_moment_comparison(
                    lam, s, a, tol, order
                )
                passed = passed and report.passed
                rows.append(_report_row(
                    report, check="moment", s=s, a=a, **{"lambda": lam}
                ))

        for b in (0.0, 1.0, 5.0):
            report = logsobolev.verify_norm_monotone_in_s(
                lam, b, tolerance=tol, order=order
            )
            passed = passed and report.passed
            rows.append(_report_row(
                report, check="monotone-s", b=b, **{"lambda": lam}
            ))

        structure = logsobolev.h_structure(lam)
        passed = passed and structure["pass"]
        rows.append(dict(check="h-structure", **structure))

        for a in logsobolev.DEFAULT_MOMENT_AS:
            crossing = logsobolev.phi_r_single_sign_change(lam, a)
            passed = passed and crossing["pass"]
            rows.append(dict(check="phi-r", **crossing))

    return passed, rows


def _figures(args, order, tol):
    rows = figure_rows(args.which)
    return True, rows


def _n3_closed_form(beta, a):
    return ((1 + a) ** (beta + 2) - abs(1 - a) ** (beta + 2)) / (
        2 * a * (beta + 2)
    )


def _selftest_suite(quick, order, tol, jobs):
    """(name, check) pairs; each check returns (passed, worst deviation)."""
    ns = ACCEPTANCE_NS[:2] if quick else ACCEPTANCE_NS
    ps = (1.0, 2.0) if quick else ACCEPTANCE_PS
    a_grid = log_grid(1e-3, 1e2, 60 if quick else 400)
    b_grid = log_grid(1e-3, 1e3, 40) if quick else None

    def p2_identity():
        worst = max(
            abs(sphere_mean(n, 2, a, 1.0, order) - (1 + a * a)) / (1 + a * a)
            for n in range(2, 11) for a in log_grid(1e-3, 1e2, 20)
        )
        return worst <= 1e-12, worst

    def n3_oracle():
        worst = 0.0
        for beta in (-1.0, 0.5, 1.0, 1.5, 2.0):
            for a in (0.1, 0.5, 0.99, 1.01, 2.0, 5.0):
                expected = _n3_closed_form(beta, a)
                value = sphere_mean(3, beta, a, 1.0, order)
                worst = max(worst, abs(value - expected) / max(1, expected))
        return worst <= 1e-10, worst

    def second_moment():
        worst = max(
            abs(expectation(m / 2, lambda t: t * t, order) - 1 / (m + 2))
            for m in (0, 0.5, 1, 2, 5, 10)
        )
        return worst <= 1e-12, worst

    def sharp_constants():
        worst = 0.0
        for n in ns:
            for p in ps:
                found = convexity.best_lambda(n, p, a_grid, order, jobs)
                worst = max(worst, abs(
                    found.limit_at_zero - convexity.sharp_lambda(n, p)
                ))
        return worst <= 1e-4, worst

    def theorem():
        worst = math.inf
        ok = True
        for n in ns:
            for p in ps:
                sharp = convexity.sharp_lambda(n, p)
                held = convexity.verify_theorem(
                    convexity.TheoremParams(n, p, sharp, a_grid),
                    tol, order, jobs
                )
                broken = convexity.verify_theorem(
                    convexity.TheoremParams(n, p, sharp + 0.05, a_grid),
                    tol, order, jobs
                )
                ok = ok and held.passed and not broken.passed
                worst = min(worst, held.worst_margin)
        return ok, worst

    def sharp_tuples():
        worst = 0.0
        for m, p, q in SHARP_TUPLES:
            found = ultraspherical.r_star(
                m, p, q, b_grid=b_grid, tolerance=tol, order=order
            )
            worst = max(worst, abs(
                found - ultraspherical.necessary_r(m, p, q)
            ))
        return worst <= SHARP_TOLERANCE, worst

    def restated():
        worst = math.inf
        ok = True
        for n in range(2, 4 if quick else 7):
            for p in ps:
                r = math.sqrt((p + n - 2) / n)
                report = ultraspherical.check_hyp(
                    ultraspherical.HypTuple(n - 2, p, 2, r),
                    tolerance=tol, order=order, jobs=jobs
                )
                ok = ok and report.passed
                worst = min(worst, report.worst_margin)
        return ok, worst

    def log_sobolev():
        if quick:
            rows = logsobolev.verify_chain(
                (0.0, 1.0), (3.5,), (0.5, 2.0), tol, order, jobs
            )
        else:
            rows = logsobolev.verify_chain(
                tolerance=tol, order=order, jobs=jobs
            )
        ok = all(r["mw"] and r["log"] and r["in02"] for r in rows)
        ok = ok and all(r["consistent"] for r in rows)
        for lam in (0.0, 1.0):
            ok = ok and logsobolev.verify_moment_comparison(
                lam, 3.5, 0.5, tol, order
            ).passed
            ok = ok and logsobolev.verify_norm_monotone_in_s(
                lam, 1.0, tolerance=tol, order=order
            ).passed
        worst = min(
            min(r["mw_margin"], r["log_margin"], r["in02_margin"])
            for r in rows
        )
        return ok, worst

    def proof_functions():
        ok = all(
            convexity.verify_phi_nonnegative(p / 10.0).passed
            for p in range(1, 11)
        )
        grid = np.linspace(0.05, 3.0, 30 if quick else 120)
        ok = ok and all(
            convexity.verify_subharmonic_chain(p, grid, tol, order).passed
            for p in (0.3, 0.7, 1.0)
        )
        ok = ok and convexity.verify_ee6_region(
            30 if quick else 100
        ).passed

        rng = np.random.default_rng(0)
        x, y = rng.random(10 ** 4), rng.random(10 ** 4)
        gap = np.max(np.abs(
            convexity.ee6_margin(2, x, y)
            - (1 - x) * (x - y) * (2 * x * x + y - 1)
        ))
        ok = ok and gap <= 1e-12 and convexity.ee6_margin(2, 0.4, 0.3) < 0
        return ok, float(gap)

    def sign_structure():
        ok = True
        for lam in (0.0, 0.5, 1.0, 2.0):
            ok = ok and logsobolev.h_structure(lam)["pass"]
            for a in (0.1, 0.5, 0.9):
                ok = ok and logsobolev.phi_r_single_sign_change(
                    lam, a
                )["pass"]
        return ok, 0.0

    def equivalence():
        worst = max(
            ultraspherical.sphere_circle_equivalence_check(n, p, a, order)
            for n in (2, 3, 5) for p in (1.0, 1.7, 2.0)
            for a in (0.5, 1.0, 2.3)
        )
        return worst <= 1e-9, worst

    return [
        ("p2-identity", p2_identity),
        ("n3-closed-form", n3_oracle),
        ("second-moment", second_moment),
        ("sharp-constants", sharp_constants),
        ("theorem", theorem),
        ("hypercontractivity-sharp-points", sharp_tuples),
        ("theorem-as-hypercontractivity", restated),
        ("log-sobolev-chain", log_sobolev),
        ("proof-functions", proof_functions),
        ("sign-structure", sign_structure),
        ("sphere-circle-equivalence", equivalence),
    ]


def _selftest(args, order, tol):
    rows = []
    for index, (name, check) in enumerate(
        _selftest_suite(args.quick, order, tol, args.jobs), 1
    ):
        try:
            passed, worst = check()
            error = None
        except SharpConvexError as e:
            log.warning("selftest %s raised %r", name, e)
            passed, worst, error = False, None, str(e)

        log.info("selftest %s: %s", name, "pass" if passed else "FAIL")
        rows.append({
            "criterion": index, "name": name, "pass": bool(passed),
            "worst": worst, "error": error
        })

    return all(row["pass"] for row in rows), rows


def _common(parser):
    parser.add_argument("--quad-order", type=int, default=None,
                        help="Gauss rule order (default: env or 256)")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE,
                        help="margin tolerance in [1e-12, 1e-3]")
    parser.add_argument("--out", default=None, help="report path")
    parser.add_argument("--format", choices=("json", "csv"),
                        default="json")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sharpconvex",
        description="Verify sharp convexity and hypercontractivity "
                    "inequalities numerically."
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    def command(name, fn, summary):
        sub = commands.add_parser(name, help=summary)
        sub.set_defaults(func=fn)
        _common(sub)
        return sub

    sub = command("verify-theorem", _verify_theorem,
                  "check the sphere-mean inequality on an a grid")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--lambda", dest="lam", type=float, default=None,
                     help="candidate constant (default: the sharp one)")
    sub.add_argument("--a-grid", default=None)

    sub = command("best-lambda", _best_lambda,
                  "extract the best constant numerically")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--a-grid", default=None)

    sub = command("r-star", _r_star, "largest admissible r by bisection")
    sub.add_argument("--m", type=float, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--q", type=float, required=True)
    sub.add_argument("--precision", type=float,
                     default=ultraspherical.DEFAULT_PRECISION)
    sub.add_argument("--b-grid", default=None)

    sub = command("check-hyp", _check_hyp,
                  "check one hypercontractivity tuple")
    sub.add_argument("--m", type=float, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--q", type=float, required=True)
    sub.add_argument("--r", type=float, default=None,
                     help="contraction (default: the necessary bound)")
    sub.add_argument("--b-grid", default=None)

    sub = command("scan", _scan, "map r* against the necessary bound")
    sub.add_argument("--m-grid", required=True)
    sub.add_argument("--p-grid", required=True)
    sub.add_argument("--q-grid", required=True)
    sub.add_argument("--precision", type=float,
                     default=ultraspherical.DEFAULT_PRECISION)
    sub.add_argument("--b-grid", default=None)

    sub = command("logsobolev", _logsobolev,
                  "verify the log-Sobolev chain on grids")
    sub.add_argument("--lambda-grid", default=None)
    sub.add_argument("--s-grid", default=None)
    sub.add_argument("--btilde-grid", default=None)

    sub = command("figures", _figures, "emit figure data as CSV/JSON")
    sub.add_argument("which", choices=sorted(_FIGURES))

    sub = command("selftest", _selftest, "run the acceptance suite")
    sub.add_argument("--quick", action="store_true",
                     help="reduced grids")

    return parser


def _config(args):
    skip = ("func", "out", "verbose", "jobs")
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _status(command, passed):
    word = colored("PASS", "green") if passed else colored("FAIL", "red")
    sys.stderr.write("%s %s\n" % (word, command))


def run(args):
    """Execute parsed ``args``; returns the process exit status."""
    try:
        order = resolve_order(args.quad_order)
        tol = check_tolerance(args.tol)
        if args.jobs < 1:
            raise ArgumentError("--jobs must be >= 1: %r" % args.jobs)

        passed, rows = args.func(args, order, tol)
    except ArgumentError as e:
        sys.stderr.write(colored("error: %s\n" % e, "red"))
        return EXIT_USAGE
    except SharpConvexError as e:
        log.error("%s failed: %r", args.command, e)
        sys.stderr.write(colored("numerical failure: %r\n" % e, "red"))
        _status(args.command, False)
        return EXIT_FAIL

    config = _config(args)
    config["quad_order"] = order
    config["tol"] = tol
    payload = {
        "command": args.command,
        "config": config,
        "content_hash": content_hash(_clean(config)),
        "summary": {"pass": bool(passed), "rows": len(rows)},
        "rows": rows
    }
    write_report(payload, args.format, args.out)

    log.info("%s: %d rows, %s", args.command, len(rows),
             "pass" if passed else "fail")
    _status(args.command, passed)
    return EXIT_OK if passed else EXIT_FAIL


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr
    )
    return run(args)
