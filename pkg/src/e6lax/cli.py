"""Command-line front end: configuration ingestion, verification
orchestration, machine-readable reports.

Config file format (documented in README): one ``key = value`` pair per
line, ``#`` comments; numeric values are exact rationals "p/q" (or
integers) parsed at working precision.  Recognized keys: q, t, b1, b2,
b3, b6, n, precision, truncation, tol, seed.

Exit codes: 0 all checks pass, 1 at least one check failed, 2
configuration error.
"""

import argparse
import csv
import json
import sys

from mpmath import mp, mpf

from .algebra import scalar
from .checks import CheckEnv, GROUPS, run_checks
from .errors import ConfigError, E6LaxError
from .painleve import PainleveState, evolution_residuals, step_forward
from .weight import Params
from .laxpair import extract_fg
from . import __version__


DEFAULTS = {
    "q": "1/2", "t": "1/3", "b1": "3/2", "b2": "4/5", "b3": "5/7",
    "b6": "2/3", "n": "1", "precision": "256", "truncation": "200",
    "tol": "", "seed": "0",
}


def parse_rational(text, key):
    text = str(text).strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return mpf(int(num)) / mpf(int(den))
        return mpf(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("field %r: cannot parse %r as a rational (%s)"
                          % (key, text, exc))


def load_config(path):
    values = dict(DEFAULTS)
    if path is not None:
        try:
            lines = open(path).read().splitlines()
        except OSError as exc:
            raise ConfigError("cannot read config %s: %s" % (path, exc))
        for lineno, raw in enumerate(lines, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value" % (path, lineno))
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in DEFAULTS:
                raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
            values[key] = val
    return values


def build_env(args):
    values = load_config(args.config)
    if args.precision is not None:
        values["precision"] = str(args.precision)
    if args.truncation is not None:
        values["truncation"] = str(args.truncation)
    if args.tol is not None:
        values["tol"] = str(args.tol)
    if args.seed is not None:
        values["seed"] = str(args.seed)
    try:
        precision = int(values["precision"])
        n = int(values["n"])
        truncation = int(values["truncation"])
        seed = int(values["seed"])
    except ValueError as exc:
        raise ConfigError("integer field: %s" % exc)
    mp.prec = precision
    tol = None
    if values["tol"]:
        tol = parse_rational(values["tol"], "tol")
    try:
        p = Params(
            q=parse_rational(values["q"], "q"),
            t=parse_rational(values["t"], "t"),
            b1=parse_rational(values["b1"], "b1"),
            b2=parse_rational(values["b2"], "b2"),
            b3=parse_rational(values["b3"], "b3"),
            b6=parse_rational(values["b6"], "b6"),
            n=n, precision=precision, tol=tol,
        )
    except E6LaxError as exc:
        raise ConfigError(str(exc))
    return CheckEnv(p, seed=seed, truncation=truncation), values


def emit_report(records, values, args):
    report = {
        "version": __version__,
        "config": {k: values[k] for k in sorted(values)},
        "checks": [r.as_dict() for r in records],
        "passed": all(r.passed for r in records),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        for r in records:
            print("%-46s %s  residual %s  (tol %s)"
                  % (r.check_id, "PASS" if r.passed else "FAIL",
                     mp.nstr(r.residual, 6), mp.nstr(r.tolerance, 3)))
        print("%d checks, %d failed"
              % (len(records), sum(not r.passed for r in records)))
    return 0 if report["passed"] else 1


def cmd_selftest(args):
    env, values = build_env(args)
    return emit_report(run_checks(env), values, args)


def cmd_verify_lax(args):
    env, values = build_env(args)
    groups = ("spectral", "recurrence", "deformation", "compatibility")
    return emit_report(run_checks(env, groups=groups), values, args)


def cmd_correspond(args):
    env, values = build_env(args)
    return emit_report(run_checks(env, groups=(args.target,)), values, args)


def cmd_derive_fg(args):
    env, values = build_env(args)
    p = env.p
    times = []
    if args.times:
        times = [parse_rational(tok, "times")
                 for tok in args.times.split(",") if tok.strip()]
    rows = []
    status = 0
    ctx = env.ctx()
    for t in times:
        try:
            f, g = extract_fg(p.n, t, ctx)
            f_hat, g_hat = extract_fg(p.n, p.q * t, ctx)
            r1, r2 = evolution_residuals(
                PainleveState(f, g, t), PainleveState(f_hat, g_hat, p.q * t), p)
            rows.append([mp.nstr(t, 25), mp.nstr(f.real, 25),
                         mp.nstr(f.imag, 25), mp.nstr(g.real, 25),
                         mp.nstr(g.imag, 25), mp.nstr(r1, 6), mp.nstr(r2, 6)])
        except E6LaxError as exc:
            rows.append([mp.nstr(t, 25), "", "", "", "", "",
                         "ERROR %s: %s" % (type(exc).__name__, exc)])
            status = 1
    writer = csv.writer(open(args.out, "w") if args.out else sys.stdout)
    writer.writerow(["t", "re_f", "im_f", "re_g", "im_g",
                     "residual_first", "residual_second"])
    writer.writerows(rows)
    return status


def cmd_evolve(args):
    env, values = build_env(args)
    p = env.p
    state = PainleveState(parse_rational(args.f0, "f0"),
                          parse_rational(args.g0, "g0"), p.t)
    rows = [[0, mp.nstr(state.f, 25), mp.nstr(state.g, 25),
             mp.nstr(state.t, 25), "", ""]]
    status = 0
    for k in range(args.steps):
        try:
            nxt = step_forward(state, p)
            r1, r2 = evolution_residuals(state, nxt, p)
            rows.append([k + 1, mp.nstr(nxt.f, 25), mp.nstr(nxt.g, 25),
                         mp.nstr(nxt.t, 25), mp.nstr(r1, 6), mp.nstr(r2, 6)])
            state = nxt
        except E6LaxError as exc:
            rows.append([k + 1, "", "", "",
                         "ERROR %s: %s" % (type(exc).__name__, exc), ""])
            status = 1
            break
    writer = csv.writer(open(args.out, "w") if args.out else sys.stdout)
    writer.writerow(["step", "f", "g", "t",
                     "residual_first", "residual_second"])
    writer.writerows(rows)
    return status


def make_parser():
    parser = argparse.ArgumentParser(
        prog="e6lax",
        description="High-precision verification of a 2x2 q-difference "
                    "Lax pair built on deformed basic hypergeometric "
                    "orthogonal polynomials.")
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--precision", type=int, help="working precision, bits")
    parser.add_argument("--truncation", type=int,
                        help="q-summation truncation depth")
    parser.add_argument("--tol", help="tolerance override, rational")
    parser.add_argument("--seed", type=int, help="sample-point seed")
    parser.add_argument("--out", help="write report/table to this path")
    parser.add_argument("--json", action="store_true",
                        help="print the JSON report to stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("selftest", help="run the full check registry")

    pv = sub.add_parser("verify-lax", help="spectral/deformation/"
                        "compatibility checks only")

    pc = sub.add_parser("correspond", help="checks for one published "
                        "formulation")
    pc.add_argument("target", choices=("sakai", "yamada"))

    pd = sub.add_parser("derive-fg", help="extract (f, g) at given times")
    pd.add_argument("--times", default="",
                    help="comma-separated rational times")

    pe = sub.add_parser("evolve", help="iterate the coupled evolution")
    pe.add_argument("--f0", required=True)
    pe.add_argument("--g0", required=True)
    pe.add_argument("--steps", type=int, default=1)
    return parser


COMMANDS = {
    "selftest": cmd_selftest,
    "verify-lax": cmd_verify_lax,
    "correspond": cmd_correspond,
    "derive-fg": cmd_derive_fg,
    "evolve": cmd_evolve,
}


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
