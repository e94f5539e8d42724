"""Command line front end.

    hallsym verify {serre,cor58,cor59,thm57,omega,prop510,resolution,qbinom,basis}
    hallsym calibrate
    hallsym expand {f,fprime,serre,T,chi,shadow} | expand --csv

Exit status: 0 when every check passes, 1 on a verification failure,
2 on a usage error (including requests above the point cap).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import checks, hall
from .checks import Report
from .freealg import render, serre_element
from .laurent import DEFAULT_CONVENTION, EvalConvention
from .rank2 import f_lower, f_upper, lusztig_T
from .resolution import (
    chi_E_symbolic,
    coefficient_table,
    resolution_shadow,
    table_to_csv,
)

VERIFY_CHECKS = ("serre", "cor58", "cor59", "thm57", "omega", "prop510",
                 "resolution", "qbinom", "basis")
EXPAND_KINDS = ("f", "fprime", "serre", "T", "chi", "shadow")
TABLE_WITNESSES = 10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int_list(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _conv(text):
    try:
        return EvalConvention.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hallsym", description="Exact checks of Lusztig-symmetry identities "
                "via Ringel-Hall functions over finite fields.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, default_N="1,2"):
        sp.add_argument("--N", type=_int_list, default=_int_list(default_N),
                        help="number(s) of arrows, comma separated (default %(default)s)")
        sp.add_argument("--m", type=_int_list, default=None,
                        help="weight parameter(s); default all 0..N")
        sp.add_argument("--q", type=_int_list, default=[2, 3],
                        help="prime field size(s) (default 2,3)")
        sp.add_argument("--json", action="store_true", help="JSON lines instead of a table")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized parts")

    v = sub.add_parser("verify", help="run one identity suite")
    v.add_argument("check", choices=VERIFY_CHECKS)
    common(v)
    v.add_argument("--ev", type=_conv, default=DEFAULT_CONVENTION,
                   help=f"image of v: one of {', '.join(c.label for c in EvalConvention)} "
                        f"(default {DEFAULT_CONVENTION.label})")
    v.add_argument("--d", type=_int_list, default=list(range(1, 13)),
                   help="degrees for the qbinom check (default 1..12)")

    c = sub.add_parser("calibrate", help="find the evaluation conventions passing "
                                         "cor59, thm57, omega and prop510")
    common(c)

    e = sub.add_parser("expand", help="print symbolic expansions")
    e.add_argument("kind", nargs="?", choices=EXPAND_KINDS, default="f")
    e.add_argument("--N", type=_int_list, default=[2])
    e.add_argument("--m", type=_int_list, default=None)
    e.add_argument("--csv", action="store_true",
                   help="print the coefficient table m,p,a,b,c instead")
    return p


# reporting --------------------------------------------------------------------------

def _sort_key(r: Report):
    return (r.check, json.dumps(r.as_dict()["params"], sort_keys=True))


def emit_report(reports, as_json: bool = False) -> str:
    """Render reports as JSON lines or as a table; empty input gives ''."""
    reports = sorted(reports, key=_sort_key)
    if not reports:
        return ""
    if as_json:
        return "".join(json.dumps(r.as_dict()) + "\n" for r in reports)
    rows = []
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
        rows.append((r.check, params, "PASS" if r.passed else "FAIL", f"{r.runtime_ms} ms", r))
    w0 = max(len(x[0]) for x in rows)
    w1 = max(len(x[1]) for x in rows)
    lines = []
    for check, params, status, ms, r in rows:
        lines.append(f"{check:<{w0}}  {params:<{w1}}  {status}  {ms}")
        if not r.passed:
            for wit in r.witnesses[:TABLE_WITNESSES]:
                lines.append(f"    at {wit['index']}: expected {wit['expected']}, "
                             f"got {wit['actual']}")
            extra = len(r.witnesses) - TABLE_WITNESSES
            if extra > 0:
                lines.append(f"    ... {extra} more")
    return "\n".join(lines) + "\n"


# feasibility ----------------------------------------------------------------------------

def _spaces(check, N, m):
    """(shape, dims) pairs a check enumerates."""
    if check == "serre":
        return [(hall.Q(N), (N + 1, 1))]
    if check in ("cor59", "thm57", "basis"):
        return [(hall.Q(N), (m, 1))]
    if check in ("omega", "prop510"):
        return [(hall.Q(N), (m, 1)), (hall.Qprime(N), (N - m, 1))]
    return []


def _validate(args, check_names):
    for q in args.q:
        if not hall._is_prime(q):
            raise UsageError(f"--q must list primes, got {q}")
    for N in args.N:
        if N < 1:
            raise UsageError(f"--N must be >= 1, got {N}")
    if args.m is not None:
        if any(m < 0 for m in args.m):
            raise UsageError("--m must be nonnegative")
        if not any(m <= N for m in args.m for N in args.N):
            raise UsageError(f"no --m value satisfies m <= N for N in {args.N}")
    cap = hall.max_points()
    for check in check_names:
        for N in args.N:
            for m in _ms(args, N):
                for shape, dims in _spaces(check, N, m):
                    for q in args.q:
                        n = hall.point_count(shape, dims, q)
                        if n > cap:
                            raise UsageError(
                                f"{check} at N={N}, m={m}, q={q} needs {shape} at dims "
                                f"{dims}: {n} points, above the cap of {cap} "
                                f"(set {hall.ENV_MAX_POINTS} to raise it)")


def _ms(args, N):
    return [m for m in (args.m if args.m is not None else range(N + 1)) if m <= N]


# commands ------------------------------------------------------------------------------

def _run_verify(args) -> list:
    name = args.check
    conv = args.ev
    out = []
    if name == "qbinom":
        return [checks.qbinom_identity(d) for d in args.d]
    for N in args.N:
        if name == "serre":
            out.extend(checks.serre(N, q, conv) for q in args.q)
        elif name == "cor58":
            out.extend(checks.cor58(m, N) for m in _ms(args, N))
        elif name == "resolution":
            out.extend(checks.resolution(m, N) for m in _ms(args, N))
        elif name == "cor59":
            out.extend(checks.cor59_recursion(m, N) for m in _ms(args, N))
            for q in args.q:
                out.extend(checks.hall_suite("cor59", N, q, conv, _ms(args, N)))
        else:
            for q in args.q:
                out.extend(checks.hall_suite(name, N, q, conv, _ms(args, N), args.seed))
    return out


def _expand(args) -> str:
    if args.csv:
        return "".join(table_to_csv(coefficient_table(N)) for N in args.N)
    lines = []
    for N in args.N:
        if args.kind == "serre":
            lines.append(f"serre(a_ij={-N}) = {render(serre_element('i', 'j', -N))}")
            continue
        for m in _ms(args, N):
            if args.kind == "f":
                lines.append(f"f(i,j;{m}) [N={N}] = {render(f_lower(m, N))}")
            elif args.kind == "fprime":
                lines.append(f"f'(i,j;{m}) [N={N}] = {render(f_upper(m, N))}")
            elif args.kind == "T":
                lines.append(f"T_i f(i,j;{m}) [N={N}] = {render(lusztig_T(f_lower(m, N), N))}")
            elif args.kind == "chi":
                lines.append(f"chi(E^({m})) [N={N}] = {chi_E_symbolic(m, N)}")
            elif args.kind == "shadow":
                terms = ", ".join(f"(deg {t.hom_degree}, shift {t.grade_shift}, p={t.monomial})"
                                  for t in resolution_shadow(m, N).terms)
                lines.append(f"K_{m} [N={N}]: {terms}")
    return "\n".join(lines) + ("\n" if lines else "")


def execute(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        if args.command == "expand":
            if args.m is not None and any(m < 0 for m in args.m):
                raise UsageError("--m must be nonnegative")
            stdout.write(_expand(args))
            return 0
        if args.command == "verify":
            _validate(args, [args.check])
            reports = _run_verify(args)
            stdout.write(emit_report(reports, args.json))
            return 0 if all(r.passed for r in reports) else 1
        _validate(args, list(checks.CALIBRATION_CHECKS))
        reports, passing = checks.calibrate(args.N, args.q, seed=args.seed)
        stdout.write(emit_report(reports, args.json))
        if not args.json:
            if len(passing) == 1:
                stdout.write(f"selected convention: {passing[0].label}\n")
            else:
                labels = ", ".join(c.label for c in passing) or "none"
                stdout.write(f"no unique convention; passing: {labels}\n")
        return 0 if len(passing) == 1 else 1
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return 2
    except hall.PointCapError as exc:
        stderr.write(f"hallsym: {exc}\n")
        return 2


def main():  # console-script entry point
    sys.exit(execute())


if __name__ == "__main__":  # pragma: no cover
    main()
