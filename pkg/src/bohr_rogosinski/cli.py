"""Command-line front end: ``tables``, ``verify``, ``evaluate``, ``sharpness``.

Exit statuses: 0 success, 1 violation found, 2 usage or parse error,
3 inconclusive sharpness probe.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import functionals as fn
from . import harness
from .radii import KINDS, RadiusFamily, canonical_kind, compute_radius
from .series import DEFAULT_ORDER, UNIT_BALL_ENVELOPE, from_coefficients, mobius_coeffs

SCHEMA_VERSION = 1
TABLE_COLUMNS = ["family", "m", "k", "value", "residual", "bracket_lo", "bracket_hi", "selection"]
FAMILY_CHOICES = list(KINDS) + ["PhiCap", "LambdaCap"]

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_m_range(text: str) -> list[int]:
    """``"3"``, ``"1..5"`` or ``"1,2,4"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m range {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"m range {text!r} must contain positive integers")
    return values


def parse_family(text: str) -> str:
    try:
        return canonical_kind(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def read_coefficient_file(path: str) -> list[complex]:
    """One coefficient per line as ``re im``; line ``i`` holds ``a_{i-1}``."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    coeffs = []
    for lineno, line in enumerate(lines, 1):
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"{path}:{lineno}: expected 're im', got {line!r}")
        try:
            re_, im_ = float(parts[0]), float(parts[1])
        except ValueError:
            raise UsageError(f"{path}:{lineno}: non-numeric value in {line!r}") from None
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise UsageError(f"{path}:{lineno}: non-finite coefficient")
        coeffs.append(complex(re_, im_))
    if not coeffs:
        raise UsageError(f"{path}: no coefficients")
    return coeffs


def _num(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return v


def emit(record: dict, fmt: str, out: str | None, columns: list[str] | None = None) -> None:
    if fmt == "json":
        text = json.dumps(record, indent=2) + "\n"
    else:
        rows = record["results"]
        if columns is None:
            columns = []
            for row in rows:
                columns += [c for c in row if c not in columns]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_num(row.get(c)) for c in columns])
        text = buf.getvalue()
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _record(command: str, args: argparse.Namespace, results: list[dict]) -> dict:
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "command", "format", "out")}
    return {"command": command, "parameters": params, "results": results,
            "schema_version": SCHEMA_VERSION}


# -- commands ----------------------------------------------------------------


def cmd_tables(args) -> int:
    families = args.family or list(KINDS)
    rows = []
    for kind in families:
        for m in args.m:
            fam = RadiusFamily(kind, m, args.k)
            cert = compute_radius(fam)
            rows.append({"family": fam.kind, "m": m, "k": fam.k, "value": cert.value,
                         "residual": cert.residual, "bracket_lo": cert.bracket_lo,
                         "bracket_hi": cert.bracket_hi, "selection": cert.selection})
    emit(_record("tables", args, rows), args.format, args.out, TABLE_COLUMNS)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = harness.SampleSpec(args.kind, args.trials, args.seed, args.order)
    if args.family == "rogosinski":
        report = harness.verify_rogosinski(spec, args.n)
    else:
        fam = RadiusFamily(args.family, args.m, args.k)
        report = harness.verify_family(fam, spec, args.r_fraction, args.angles)
    row = report.to_dict()
    row["violations"] = len(report.violations)
    row["excluded"] = len(report.excluded)
    if args.format == "json":
        row["violation_list"] = [list(v) for v in report.violations]
    emit(_record("verify", args, [row]), args.format, args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _function_from_args(args):
    if args.coeffs:
        coeffs = read_coefficient_file(args.coeffs)
        return from_coefficients(coeffs, UNIT_BALL_ENVELOPE if args.in_class else None)
    if args.mobius_a is None:
        raise UsageError("supply --mobius-a or --coeffs")
    return mobius_coeffs(args.mobius_a, args.sign, args.order)


def cmd_evaluate(args) -> int:
    f = _function_from_args(args)
    if args.functional == "rogosinski":
        z = complex(args.z.replace(" ", "")) if args.z is not None else complex(args.r or 0.0)
        row = {"functional": "rogosinski", "n": args.n, "z_re": z.real, "z_im": z.imag,
               "partial": fn.rogosinski_partial(f, z, args.n),
               "bound": fn.rogosinski_bound(args.n)}
        row["holds"] = row["partial"] <= row["bound"] + harness.VIOLATION_TOL
        emit(_record("evaluate", args, [row]), args.format, args.out)
        return EXIT_OK
    if args.r is None:
        raise UsageError("--r is required for Bohr-type functionals")
    letter = args.functional
    if letter in ("D", "E"):
        lam = 1.0 if args.lam is None else args.lam
        if args.g_coeffs:
            gc = read_coefficient_file(args.g_coeffs)
            g = from_coefficients(gc, UNIT_BALL_ENVELOPE if args.in_class else None)
            obj = fn.HarmonicPair(f, g, args.k)
        else:
            obj = fn.pair_from_multiplier(f, lam * args.k, args.k)
    else:
        obj = f
    result = fn.FUNCTIONALS[letter](obj, args.m, args.r)
    row = {"functional": letter, "m": args.m, "r": args.r, "value": result.value,
           "upper": result.upper, "rigorous": result.rigorous,
           "outside_guarantee": result.outside_guarantee}
    row.update({f"component_{name}": v for name, v in result.components.items()})
    emit(_record("evaluate", args, [row]), args.format, args.out)
    return EXIT_OK


def cmd_sharpness(args) -> int:
    fam = RadiusFamily(args.family, args.m, args.k)
    a_values = args.a or list(harness.SHARPNESS_LADDER)
    report = harness.probe_sharpness(fam, a_values, args.r_multiplier, args.lam, args.order)
    rows = []
    for row in report.rows:
        rows.append({"family": report.family, "m": report.m, "k": report.k, "lambda": report.lam,
                     "r": report.r, "a": row.a, "value": row.value,
                     "closed_form": row.closed_form, "gap": row.gap,
                     "exceeds_one": row.in_regime and row.value > 1.0,
                     "in_regime": row.in_regime, "note": row.note})
    record = _record("sharpness", args, rows)
    record["confirmed"] = report.confirmed
    emit(record, args.format, args.out)
    return EXIT_OK if report.confirmed else EXIT_INCONCLUSIVE


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bohr-rogosinski",
        description="Certified Bohr-Rogosinski radii and numerical verification of the inequalities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", help="write to this path instead of stdout")

    p = sub.add_parser("tables", help="certified radii for each family and m")
    p.add_argument("--family", type=parse_family, action="append",
                   help=f"one of {', '.join(FAMILY_CHOICES)} (repeatable; default all)")
    p.add_argument("--m", type=parse_m_range, default=list(range(1, 6)))
    p.add_argument("--k", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="randomized check below a radius")
    p.add_argument("--family", required=True,
                   type=lambda s: "rogosinski" if s == "rogosinski" else parse_family(s))
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--r-fraction", type=float, default=0.999)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--kind", choices=list(harness.SAMPLE_KINDS) + [harness.MIXED],
                   default=harness.MIXED)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--angles", type=int, default=64)
    p.add_argument("--n", type=int, default=10, help="largest partial-sum index (rogosinski)")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evaluate", help="evaluate one functional")
    p.add_argument("--functional", required=True, choices=["A", "B", "C", "D", "E", "rogosinski"])
    src = p.add_mutually_exclusive_group()
    src.add_argument("--mobius-a", type=float)
    src.add_argument("--coeffs", help="coefficient file, one 're im' per line")
    p.add_argument("--g-coeffs", help="co-analytic coefficient file for D and E")
    p.add_argument("--in-class", action="store_true",
                   help="assert the supplied function lies in B (enables tail bounds)")
    p.add_argument("--sign", type=int, choices=[1, -1], default=1)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--r", type=float)
    p.add_argument("--z", help="complex point for rogosinski, e.g. 0.3+0.1j")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--lam", type=float)
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sharpness", help="extremal witnesses just above a radius")
    p.add_argument("--family", required=True, type=parse_family)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--lam", type=float)
    p.add_argument("--r-multiplier", type=float, default=1.05)
    p.add_argument("--a", type=float, action="append", help="ladder value (repeatable)")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    common(p)
    p.set_defaults(func=cmd_sharpness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
