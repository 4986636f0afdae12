"""Command-line interface: ``anosov construct|verify|search-units|info|quotient``.

Exit codes: 0 success, 1 failed verification, 2 invalid input or unreadable
file, 3 construction failure (not hyperbolic, precision), 4 scope exceeded.

``--format machine`` switches every report to ``key=value`` lines.
"""

from __future__ import annotations

import argparse
import inspect
import sys
from typing import Sequence

from . import certificate as certfile
from .errors import (
    ConstructionError,
    InvalidInputError,
    NotHyperbolicError,
    PrecisionError,
    ScopeExceededError,
)
from .families import FAMILIES, build_family
from .lie import basis_aligned_decomposition, center, derived_subalgebra, type_of
from .poly import IntPolynomial
from .units import make_unit, search_units

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_CONSTRUCTION = 3
EXIT_SCOPE = 4


class Report:
    """Collects (key, human text, machine value) rows and prints them in one format."""

    def __init__(self, machine: bool):
        self.machine = machine

    def line(self, key: str, human: str, value: object = None) -> None:
        if self.machine:
            print(f"{key}={human if value is None else value}")
        else:
            print(human)


def _fmt_type(t: Sequence[int]) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def _parse_words(specs: Sequence[str]) -> list[tuple[int, ...]]:
    words = []
    for spec in specs:
        for chunk in spec.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                words.append(tuple(int(x) for x in chunk.split(",")))
            except ValueError:
                raise InvalidInputError(f"bad word {chunk!r}; expected comma-separated integers like 1,1")
    return words


def _print_checks(report: Report, verification) -> None:
    for name, ok in verification.checks.items():
        report.line(f"check.{name}", f"  {name}: {'ok' if ok else 'FAILED'}", "ok" if ok else "failed")
    for i, finding in enumerate(verification.findings):
        report.line(f"finding.{i}", f"  finding {finding}", str(finding))


def cmd_construct(args, report: Report) -> int:
    polys = [p for p in (args.f, args.g, args.h) if p is not None]
    kwargs = {"target_error": args.precision}
    if args.method is not None:
        if "method" not in inspect.signature(FAMILIES[args.family][0]).parameters:
            raise InvalidInputError(f"family {args.family} has a single construction; drop --method")
        kwargs["method"] = args.method
    cert = build_family(args.family, [IntPolynomial.parse(p) for p in polys], **kwargs)
    verification = certfile.verify_certificate(cert)
    t = type_of(cert.algebra)
    report.line("family", f"family {cert.family}", cert.family)
    report.line("dim_type", f"dim {cert.dim}, type {_fmt_type(t)}", f"{cert.dim};{_fmt_type(t)}")
    for name, value in sorted(cert.margins.items()):
        report.line(f"margin.{name}", f"  margin {name} = {value}", value)
    _print_checks(report, verification)
    if args.output:
        certfile.save(cert, args.output)
        report.line("output", f"wrote {args.output}", args.output)
    report.line("status", "verified" if verification.passed else "verification FAILED",
                "ok" if verification.passed else "failed")
    return EXIT_OK if verification.passed else EXIT_VERIFY


def cmd_verify(args, report: Report) -> int:
    cert = certfile.load(args.path)
    verification = certfile.verify_certificate(cert)
    report.line("family", f"family {cert.family} ({cert.status})", cert.family)
    if verification.algebra_type is not None:
        report.line("dim_type", f"dim {cert.dim}, type {_fmt_type(verification.algebra_type)}",
                    f"{cert.dim};{_fmt_type(verification.algebra_type)}")
    _print_checks(report, verification)
    if verification.semisimple is not None:
        report.line("semisimple", f"  automorphism semisimple: {verification.semisimple}",
                    str(verification.semisimple).lower())
    report.line("status", "verified" if verification.passed else "verification FAILED",
                "ok" if verification.passed else "failed")
    return EXIT_OK if verification.passed else EXIT_VERIFY


def cmd_search_units(args, report: Report) -> int:
    words = _parse_words(args.words or [])
    constraints = []
    for partner in args.pair_with or []:
        if not words:
            raise InvalidInputError("--pair-with needs at least one --words entry")
        constraints.append((make_unit(partner, args.precision), words))
    found = search_units(args.degree, args.bound, constraints)
    report.line("count", f"{len(found)} units of degree {args.degree} with coefficients in [-{args.bound}, {args.bound}]",
                len(found))
    for i, unit in enumerate(found):
        report.line(f"unit.{i}", f"  {unit.min_poly}  margin {unit.circle_margin:.10g}",
                    f"{unit.min_poly};{unit.circle_margin:.10g}")
    return EXIT_OK


def cmd_info(args, report: Report) -> int:
    cert = certfile.load(args.path)
    alg = cert.algebra
    t = type_of(alg)
    report.line("family", f"family {cert.family} ({cert.status})", cert.family)
    report.line("dim", f"dim {alg.dim}", alg.dim)
    report.line("type", f"type {_fmt_type(t)}", _fmt_type(t))
    report.line("step", f"step {len(t)}", len(t))
    report.line("center_dim", f"center dim {len(center(alg))}", len(center(alg)))
    report.line("derived_dim", f"derived dim {len(derived_subalgebra(alg))}", len(derived_subalgebra(alg)))
    split = basis_aligned_decomposition(alg)
    if split is None:
        text = "indecomposable (basis-aligned search, exhaustive)"
    else:
        a, b = split
        text = "decomposes: {" + ",".join(map(str, a)) + "} ⊕ {" + ",".join(map(str, b)) + "}"
    report.line("decomposition", text)
    return EXIT_OK


def cmd_quotient(args, report: Report) -> int:
    cert = certfile.load(args.path)
    quotient = certfile.quotient_certificate(cert)
    certfile.save(quotient, args.output)
    t = type_of(quotient.algebra)
    report.line("dim_type", f"dim {quotient.dim}, type {_fmt_type(t)}", f"{quotient.dim};{_fmt_type(t)}")
    report.line("output", f"wrote {args.output} ({quotient.status})", args.output)
    return EXIT_OK


def _precision(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"precision must be a number, got {text!r}")
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("precision must lie in (0, 1)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anosov", description="Construct and verify Anosov Lie algebra certificates.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human", help="report style")

    p = sub.add_parser("construct", parents=[common], help="build a family and write its certificate")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--f", required=True, help='first unit polynomial, e.g. "x^2-3x+1"')
    p.add_argument("--g", help="second unit polynomial")
    p.add_argument("--h", help="third unit polynomial (three-unit families)")
    p.add_argument("--method", choices=("closed-form", "realize", "both"),
                   help="how to compute structure constants (families that support both)")
    p.add_argument("--precision", type=_precision, help="root target error (default from ANOSOV_PRECISION or 1e-12)")
    p.add_argument("-o", "--output", help="certificate path")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="re-run every exact check on a certificate file")
    p.add_argument("path")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("search-units", parents=[common], help="enumerate hyperbolic units with bounded coefficients")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--pair-with", action="append", help="partner unit; repeatable")
    p.add_argument("--words", action="append",
                   help='exponent words over (partner, candidate), e.g. "1,1" or "1,1;1,-1"; repeatable')
    p.add_argument("--precision", type=_precision)
    p.set_defaults(handler=cmd_search_units)

    p = sub.add_parser("info", parents=[common], help="print invariants of a certificate's algebra")
    p.add_argument("path")
    p.set_defaults(handler=cmd_info)

    p = sub.add_parser("quotient", parents=[common], help="write the quotient by the last central-series layer")
    p.add_argument("path")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_quotient)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    report = Report(args.format == "machine")
    try:
        return args.handler(args, report)
    except InvalidInputError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotHyperbolicError, PrecisionError) as exc:
        print(f"error: construction failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except ConstructionError as exc:
        print(f"error: verification failed during construction: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ScopeExceededError as exc:
        print(f"error: scope exceeded: {exc}", file=sys.stderr)
        return EXIT_SCOPE


if __name__ == "__main__":
    sys.exit(main())
