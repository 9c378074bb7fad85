"""Command line: ``mixmoments verify|eval|scan``.

Exit codes: 0 success, 1 a check failed, 2 fixture or environment problem.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import subprocess
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, checks, exponents, formulas, forms, ingest, momentlab, quadrature, specfun
from .errors import FixtureParseError, InsufficientCoefficientsError, MissingInputError, MixMomentsError

EXIT_OK, EXIT_FAIL, EXIT_ENV = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; keep that, but print the usage text in full
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ENV, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args):
    names = list(checks.SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        try:
            rep = checks.run_suite(name, fixture=args.fixture)
        except (OSError, FixtureParseError, MissingInputError, InsufficientCoefficientsError) as exc:
            print(f"{name}: fixture or environment failure: {exc}", file=sys.stderr)
            return EXIT_ENV
        print(rep.table())
        print()
        reports.append(rep)
    if args.report:
        doc = {"version": __version__, "suites": [r.as_dict() for r in reports]}
        Path(args.report).write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _print_value(label, value, err):
    value = complex(value)
    if value.imag == 0:
        print(f"{label} = {value.real:.15g}  (error estimate {float(err):.2e})")
    else:
        print(f"{label} = {value.real:.15g} {value.imag:+.15g}i  (error estimate {float(err):.2e})")


def cmd_eval(args):
    z = (args.x, args.y)
    if args.reduce:
        z = forms.reduce_points(np.array([args.x]), np.array([args.y]))
        z = (float(z[0][0]), float(z[1][0]))
    if args.object == "eisenstein":
        s = complex(args.re_s, args.im_s)
        val, err = forms.eisenstein_eval(z, s, args.cutoff, with_error=True)
        _print_value(f"E({z[0]}+{z[1]}i, {s})", val, err)
    elif args.object == "truncated":
        if args.A is None:
            raise SystemExit("eval truncated needs --A")
        spec = forms.EisensteinSpec(args.T, truncation_A=args.A)
        val, err = forms.truncated_eisenstein_eval(z, spec, args.cutoff, with_error=True)
        _print_value(f"E^A({z[0]}+{z[1]}i, 1/2+{args.T}i), A={args.A}", val, err)
    elif args.object == "normalized":
        val, err = forms.normalized_eisenstein_eval(z, args.T, args.cutoff, with_error=True)
        _print_value(f"E~_T({z[0]}+{z[1]}i), T={args.T}", val, err)
    else:
        if not args.label:
            raise SystemExit("eval maass needs --label")
        try:
            rec = ingest.find_record(args.label, args.fixture)
        except (OSError, FixtureParseError, KeyError, LookupError) as exc:
            print(f"cannot load {args.label!r}: {exc}", file=sys.stderr)
            return EXIT_ENV
        val, err = forms.maass_eval(rec, z, args.cutoff)
        _print_value(f"{rec.label}({z[0]}+{z[1]}i)", val, err)
    return EXIT_OK


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _grid(start, stop, step):
    n = int(round((stop - start) / step))
    return [start + k * step for k in range(n + 1)]


def _git_revision():
    try:
        out = subprocess.run(["git", "rev-parse", "--short", "HEAD"], capture_output=True,
                             text=True, cwd=Path(__file__).resolve().parent, timeout=5)
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def _row_decorrelation(args, d):
    t = args.tau + d
    return [f"{d:.10g}", f"{t:.10g}", f"{formulas.decorrelation_main_term(t, args.tau):.15g}"]


def _row_maass_selberg(args, A):
    closed = formulas.maass_selberg_truncated_norm(args.T, A)
    quad = quadrature.truncated_norm_squared(args.T, A).real
    return [f"{A:.10g}", f"{closed:.15g}", f"{quad:.15g}", f"{quad - closed:.3e}"]


_PRIMES = {}


def _row_prime_sums(args, x):
    table = _PRIMES.get(args.limit) or _PRIMES.setdefault(args.limit, specfun.sieve(args.limit))
    s = momentlab.prime_sum_shifted(table, x, complex(args.re_z, args.im_z))
    ll = math.log(math.log(x))
    return [f"{x:.10g}", f"{s.real:.15g}", f"{s.imag:.15g}", f"{ll:.15g}", f"{s.real - ll:.15g}",
            f"{momentlab.n_func(complex(args.re_z, args.im_z), x):.15g}"]


def _row_exponent_p(args, tj):
    p = exponents.p_exponent(tj, args.t, args.T)
    return [f"{tj:.10g}", f"{p.value:.15g}", f"{exponents.p_exponent_direct(tj, args.t, args.T):.15g}", p.branch]


def _row_exponent_q(args, tj):
    q = exponents.q_exponent(args.t, tj, args.T, args.t_phi)
    return [f"{tj:.10g}", f"{q.value:.15g}",
            f"{exponents.q_exponent_direct(args.t, tj, args.T, args.t_phi):.15g}", q.branch]


SCANS = {
    "decorrelation": (("t_minus_tau", "t", "main_term"), _row_decorrelation,
                      "(6/pi) sin((t-tau) log tau)/(t-tau)"),
    "maass_selberg": (("A", "closed_form", "quadrature", "difference"), _row_maass_selberg,
                      "||E^A(., 1/2+iT)||^2 = 2 log A + 4 Re xi'/xi(1+2iT) + oscillatory term"),
    "prime_sums": (("x", "sum_re", "sum_im", "loglog_x", "drift", "N_z_x"), _row_prime_sums,
                   "sum_{p<=x} p^(-1-z) against N(z, x)"),
    "exponent_P": (("t_j", "P", "P_direct", "branch"), _row_exponent_p,
                   "P = |t_j+t| + |t_j-t| + |t_j-2T+t| - t_j + t - 2T"),
    "exponent_Q": (("t_j", "Q", "Q_direct", "branch"), _row_exponent_q,
                   "Q = (|t_j-2t_phi| + |t_j+t| + |t_j-t| + |t_j-2T+t| + t)/2 - t_phi - T"),
}


SCAN_PARAMS = {
    "decorrelation": ("tau", "start", "stop", "step"),
    "maass_selberg": ("T", "values"),
    "prime_sums": ("re_z", "im_z", "limit", "values"),
    "exponent_P": ("t", "T", "start", "stop", "step"),
    "exponent_Q": ("t", "T", "t_phi", "start", "stop", "step"),
}


def _scan_points(args):
    if args.target in ("maass_selberg", "prime_sums"):
        return _floats(args.values)
    return _grid(args.start, args.stop, args.step)


def _scan_defaults(args):
    defaults = {
        "decorrelation": dict(start=-0.5, stop=0.5, step=0.01),
        "maass_selberg": dict(values="1.5,2,3,4,6,8"),
        "prime_sums": dict(values="1000,10000,100000,1000000"),
        "exponent_P": dict(start=0.0, stop=60.0, step=1.0),
        "exponent_Q": dict(start=0.0, stop=60.0, step=1.0),
    }[args.target]
    for k, v in defaults.items():
        if getattr(args, k) is None:
            setattr(args, k, v)


def _run_row(job):
    fn, args, p = job
    return fn(args, p)


def cmd_scan(args):
    _scan_defaults(args)
    header, fn, formula = SCANS[args.target]
    points = _scan_points(args)
    jobs = [(fn, args, p) for p in points]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_run_row, jobs))
    else:
        rows = [_run_row(j) for j in jobs]
    params = {k: getattr(args, k) for k in SCAN_PARAMS[args.target]}
    buf = io.StringIO()
    buf.write(f"# mixmoments {__version__} scan {args.target}\n")
    buf.write(f"# formula: {formula}\n")
    buf.write(f"# parameters: {json.dumps(params, sort_keys=True)}\n")
    buf.write(f"# git revision: {_git_revision()}\n")
    if not args.no_timestamp:
        buf.write(f"# generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="mixmoments", description="Eisenstein and Maass form numerics, identities and scans.")
    p.add_argument("--version", action="version", version=f"mixmoments {__version__}")
    p.add_argument("--fixture", default=None,
                   help="fixture file (default: $MIXMOMENTS_FIXTURE or the shipped file)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=[*checks.SUITES, "all"])
    v.add_argument("--report", help="also write the report as JSON to this path")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a form at a point")
    e.add_argument("object", choices=["eisenstein", "truncated", "normalized", "maass"])
    e.add_argument("--x", type=float, required=True)
    e.add_argument("--y", type=float, required=True)
    e.add_argument("--re-s", type=float, default=0.5)
    e.add_argument("--im-s", type=float, default=0.0)
    e.add_argument("--T", type=float, default=5.0, help="spectral parameter of E(z, 1/2 + iT)")
    e.add_argument("--A", type=float, help="truncation height")
    e.add_argument("--label", help="Maass form label in the fixture file")
    e.add_argument("--cutoff", type=int, default=None, help="initial Fourier cutoff")
    e.add_argument("--reduce", action="store_true", help="reduce the point to the fundamental domain first")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("scan", help="tabulate a quantity over a grid as CSV")
    s.add_argument("target", choices=list(SCANS))
    s.add_argument("--out", help="output path (default stdout)")
    s.add_argument("--no-timestamp", action="store_true", help="omit the timestamp comment line")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.add_argument("--start", type=float)
    s.add_argument("--stop", type=float)
    s.add_argument("--step", type=float)
    s.add_argument("--values", help="comma-separated grid (maass_selberg: A, prime_sums: x)")
    s.add_argument("--tau", type=float, default=100.0)
    s.add_argument("--T", type=float, default=5.0)
    s.add_argument("--t", type=float, default=0.0)
    s.add_argument("--t-phi", type=float, default=20.0)
    s.add_argument("--re-z", type=float, default=0.0)
    s.add_argument("--im-z", type=float, default=0.0)
    s.add_argument("--limit", type=int, default=10**6, help="sieve limit for prime_sums")
    s.set_defaults(func=cmd_scan)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MixMomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
