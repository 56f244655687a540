"""Command-line front end: verify identities, print series, emit JSON reports.

Exit codes: 0 for a verified match (or a printed series), 1 for a mismatch,
2 for usage errors (bad flags, invalid partitions, nonpositive scales).
Output is deterministic byte-for-byte for identical invocations; timing is
excluded unless --timing is passed so reports stay reproducible.  The env
var QSERIES_THREADS caps internal parallelism (0/unset = sequential) and
never changes the bytes printed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .affine import (
    specialized_character_series,
    trace_series,
    verify_proposition,
)
from .identities import (
    CLASSICAL_NAMES,
    class1_identity,
    class2_identity,
    classical_identity,
    verify_identity,
)
from .qseries import (
    ProductSpec,
    QSeries,
    VerifyReport,
    format_rational,
    product_series,
    render,
)

__all__ = ["VerifyReport", "build_parser", "entry", "main"]


_RATIONAL_RE = re.compile(r"[+-]?\d+(/[1-9]\d*)?\Z")


def _rational_arg(text: str) -> Fraction:
    # accepts "7", "-3", "1/8"; decimals and junk are usage errors
    cleaned = text.strip()
    if not _RATIONAL_RE.match(cleaned):
        raise argparse.ArgumentTypeError(
            f"not a rational number (use an integer or num/den): {text!r}"
        )
    return Fraction(cleaned)


def _partition_arg(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"partition must be comma-separated integers, got {text!r}"
        )
    if not parts:
        raise argparse.ArgumentTypeError("partition must be nonempty")
    return parts


def _add_order_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--order",
        type=_rational_arg,
        default=Fraction(50),
        help="truncation order, an integer or num/den rational (default 50)",
    )


def _add_output_flags(p: argparse.ArgumentParser, timing: bool) -> None:
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    if timing:
        p.add_argument(
            "--timing",
            action="store_true",
            help="include wall_time_ms in the report (breaks byte reproducibility)",
        )


def _emit_report(report: VerifyReport, args: argparse.Namespace) -> int:
    if args.json:
        print(json.dumps(report.to_json(include_timing=args.timing), sort_keys=True))
    else:
        lines = ["match" if report.match else "MISMATCH"]
        lines.append(f"checked through: q^{format_rational(report.checked_through)}")
        if report.lhs_shift or report.rhs_shift:
            lines.append(
                "leading shifts: lhs q^%s, rhs q^%s"
                % (
                    format_rational(report.lhs_shift),
                    format_rational(report.rhs_shift),
                )
            )
        if report.first_mismatch is not None:
            m = report.first_mismatch
            lines.append(
                f"first mismatch at q^{format_rational(m.exponent)}: "
                f"lhs {m.lhs_coeff} vs rhs {m.rhs_coeff}"
            )
        if args.timing:
            lines.append(f"wall time: {report.wall_time_ms} ms")
        print("\n".join(lines))
    return 0 if report.match else 1


def _emit_series(series: QSeries, args: argparse.Namespace) -> int:
    if args.json:
        print(json.dumps(series.to_json(), sort_keys=True))
    else:
        print(render(series))
    return 0


# -- verify subcommands -------------------------------------------------------


def _cmd_verify_classical(args: argparse.Namespace) -> int:
    return _emit_report(verify_identity(classical_identity(args.name), args.order), args)


def _cmd_verify_class1(args: argparse.Namespace) -> int:
    return _emit_report(verify_identity(class1_identity(args.m), args.order), args)


def _cmd_verify_class2(args: argparse.Namespace) -> int:
    return _emit_report(verify_identity(class2_identity(args.m), args.order), args)


def _cmd_verify_proposition(args: argparse.Namespace) -> int:
    report = verify_proposition(args.partition, args.k, args.order)
    return _emit_report(report, args)


# -- series subcommands -------------------------------------------------------


def _cmd_series_phi(args: argparse.Namespace) -> int:
    spec = ProductSpec(((args.scale, args.power),))
    return _emit_series(product_series(spec, args.order), args)


def _cmd_series_product(args: argparse.Namespace) -> int:
    try:
        data = json.loads(args.spec)
    except json.JSONDecodeError as exc:
        raise ValueError(f"spec is not valid JSON: {exc}")
    return _emit_series(product_series(ProductSpec.from_json(data), args.order), args)


def _cmd_series_character(args: argparse.Namespace) -> int:
    series = specialized_character_series(args.partition, args.k, args.order)
    return _emit_series(series, args)


def _cmd_series_trace(args: argparse.Namespace) -> int:
    return _emit_series(trace_series(args.partition, args.k, args.order), args)


# -- wiring ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchar",
        description=(
            "exact q-series toolkit: verify series-product identities and "
            "print truncated expansions"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="compare two expansions of an identity")
    vsub = verify.add_subparsers(dest="target", required=True)

    p = vsub.add_parser("classical", help="a named one-dimensional identity")
    p.add_argument("name", choices=CLASSICAL_NAMES)
    _add_order_flag(p)
    _add_output_flags(p, timing=True)
    p.set_defaults(func=_cmd_verify_classical)

    p = vsub.add_parser("class1", help="first identity family, parameter m")
    p.add_argument("--m", type=int, required=True, help="family parameter, m >= 1")
    _add_order_flag(p)
    _add_output_flags(p, timing=True)
    p.set_defaults(func=_cmd_verify_class1)

    p = vsub.add_parser("class2", help="second identity family, parameter m")
    p.add_argument("--m", type=int, required=True, help="family parameter, m >= 1")
    _add_order_flag(p)
    _add_output_flags(p, timing=True)
    p.set_defaults(func=_cmd_verify_class2)

    p = vsub.add_parser(
        "proposition", help="character route vs trace route for a partition"
    )
    p.add_argument(
        "--partition",
        type=_partition_arg,
        required=True,
        help="ascending comma-separated parts, e.g. 1,3",
    )
    p.add_argument("--k", type=int, required=True, help="weight index, 0 <= k < n")
    _add_order_flag(p)
    _add_output_flags(p, timing=True)
    p.set_defaults(func=_cmd_verify_proposition)

    series = sub.add_parser("series", help="print one truncated expansion")
    ssub = series.add_subparsers(dest="target", required=True)

    p = ssub.add_parser("phi", help="phi(q^scale)^power")
    p.add_argument("--scale", type=_rational_arg, required=True)
    p.add_argument("--power", type=int, default=1)
    _add_order_flag(p)
    _add_output_flags(p, timing=False)
    p.set_defaults(func=_cmd_series_phi)

    p = ssub.add_parser("product", help="a product given as JSON factors")
    p.add_argument(
        "--spec",
        required=True,
        help='JSON like {"factors": [{"scale": "2", "power": -1}]}',
    )
    _add_order_flag(p)
    _add_output_flags(p, timing=False)
    p.set_defaults(func=_cmd_series_product)

    p = ssub.add_parser("character", help="specialized character of a partition")
    p.add_argument("--partition", type=_partition_arg, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_order_flag(p)
    _add_output_flags(p, timing=False)
    p.set_defaults(func=_cmd_series_character)

    p = ssub.add_parser("trace", help="trace-route series of a partition")
    p.add_argument("--partition", type=_partition_arg, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_order_flag(p)
    _add_output_flags(p, timing=False)
    p.set_defaults(func=_cmd_series_trace)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage/help; fold its exit into our code
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
