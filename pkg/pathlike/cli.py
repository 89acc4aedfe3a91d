#!/usr/bin/env python3
"""Command-line interface for the path-like length integral library."""

import argparse
import logging
import sys

from pathlike.cbinom import cbinom, cbinom_bound, v_integral
from pathlike.errors import ConfigError, DomainError, PathlikeError
from pathlike.geometry import PRESET_NAMES, ChartPoint, gauss_curvature, preset
from pathlike.length_integral import (
    LengthIntegralInput,
    corollary_average_form,
    corollary_growth_bound,
    stratified_length_sum,
    theorem_length_integral,
)
from pathlike.oracle import mc_total_integral
from pathlike.path_space import vol_gamma_lambda, vol_gamma_plane, vol_gamma_single_field
from pathlike.settings import load_settings
from pathlike.special_fn import bc_bound, bc_contour, bc_modified_bessel, bessel_clifford
from pathlike.tables import CsvTable, format_real, parse_point, parse_range
from pathlike.validation import SUITE_NAMES, validate_workflow

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_DOMAIN = 2
EXIT_USAGE = 64
EXIT_CANT_CREATE = 73


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ Error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _integer(text):
    # Accepts hex such as 0xC0FFEE
    return int(text, 0)


def _vectors(text):
    parts = text.split(",")
    try:
        if len(parts) != 4:
            raise ValueError
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"Invalid vectors {text!r}: expected a,b,c,d")


def _add_surface(parser):
    parser.add_argument("--surface", required=True, choices=PRESET_NAMES, help="Surface preset")
    parser.add_argument(
        "--vectors", type=_vectors, help="a,b,c,d for the linear surface"
    )


def _add_eval_parsers(subparsers):
    parser = subparsers.add_parser(
        "cbinom", help="Continuous binomial coefficient {t brace a}"
    )
    parser.add_argument("--t", type=float, required=True, help="Total time")
    parser.add_argument("--a", type=float, required=True, help="First-direction budget")

    parser = subparsers.add_parser("bessel-clifford", help="Bessel-Clifford function C_nu(z)")
    parser.add_argument("--nu", type=int, required=True, help="Non-negative integer order")
    parser.add_argument("--z", type=float, required=True, help="Non-negative argument")
    parser.add_argument(
        "--route",
        choices=("series", "contour", "bessel"),
        default="series",
        help="Evaluation route (default: series)",
    )

    parser = subparsers.add_parser("v-integral", help="V(s, t) closed form")
    parser.add_argument("--s", type=float, required=True)
    parser.add_argument("--t", type=float, required=True)

    parser = subparsers.add_parser("curvature", help="Gaussian curvature of a preset")
    _add_surface(parser)
    parser.add_argument("--x", type=float, required=True, help="Profile abscissa")

    parser = subparsers.add_parser(
        "vol", help="Path-space volume: --t --a, --k --t, or --t --t0 --lambda"
    )
    parser.add_argument("--t", type=float, required=True, help="Total time")
    parser.add_argument("--a", type=float, help="First-direction budget (plane)")
    parser.add_argument("--k", type=int, help="Copies of one vector field")
    parser.add_argument("--t0", type=float, help="Flow time of the target point")
    parser.add_argument("--lambda", dest="lam", type=float, help="Second field is lambda X")

    parser = subparsers.add_parser("length-integral", help="Integral of length over all paths")
    _add_surface(parser)
    parser.add_argument("--p", type=parse_point, required=True, help="Start point x,y")
    parser.add_argument("--q", type=parse_point, required=True, help="End point x,y")
    parser.add_argument("--t", type=float, help="Total time (default: a + s)")
    parser.add_argument(
        "--method",
        choices=("theorem", "average", "stratified", "mc"),
        default="theorem",
        help="Evaluation method (default: theorem)",
    )
    parser.add_argument("--max-half-length", type=int, help="M for stratified and mc")
    parser.add_argument("--mc-samples", type=int, help="Samples per configuration")
    parser.add_argument("--seed", type=_integer, help="Monte-Carlo seed")
    parser.add_argument("--workers", type=int, help="Monte-Carlo threads")

    parser = subparsers.add_parser("bound", help="Growth bounds")
    parser.add_argument(
        "--kind", required=True, choices=("bessel-clifford", "cbinom", "length")
    )
    parser.add_argument("--nu", type=int, help="Order (bessel-clifford)")
    parser.add_argument("--z", type=float, help="Argument (bessel-clifford)")
    parser.add_argument("--t", type=float, help="Total time (cbinom, length)")
    parser.add_argument("--a", type=float, help="First-direction budget (cbinom)")
    parser.add_argument("--surface", choices=PRESET_NAMES, help="Surface preset (length)")
    parser.add_argument("--vectors", type=_vectors, help="a,b,c,d for the linear surface")
    parser.add_argument("--p", type=parse_point, help="Start point x,y (length)")
    parser.add_argument("--q", type=parse_point, help="End point x,y (length)")


def _add_table_parsers(subparsers):
    parser = subparsers.add_parser("cbinom", help="Columns t, a, {t brace a}")
    parser.add_argument("--t", type=parse_range, required=True, help="start:stop:step")
    parser.add_argument("--a-frac", type=float, required=True, help="a as a fraction of t")

    parser = subparsers.add_parser("bessel-clifford", help="Columns z, C_nu(z)")
    parser.add_argument("--nu", type=int, required=True)
    parser.add_argument("--z", type=parse_range, required=True, help="start:stop:step")

    parser = subparsers.add_parser("length-integral", help="Columns a, integral")
    _add_surface(parser)
    parser.add_argument("--p", type=parse_point, required=True, help="Start point x,y")
    parser.add_argument("--a", type=parse_range, required=True, help="start:stop:step")
    parser.add_argument("--t", type=float, required=True, help="Total time")

    parser = subparsers.add_parser("vol", help="Columns t, a, plane path-space volume")
    parser.add_argument("--t", type=parse_range, required=True, help="start:stop:step")
    parser.add_argument("--a-frac", type=float, required=True, help="a as a fraction of t")

    for choice in subparsers.choices.values():
        choice.add_argument("--out", required=True, help="CSV file to write")


def parse_arguments(argv=None):
    """
    Parse command line arguments.

    Returns:
        argparse.Namespace: Parsed arguments
    """
    desc = "Evaluate and validate path-like length integrals on constant-curvature surfaces"
    parser = _Parser(description=desc)
    parser.add_argument("--config", help="dotenv-format file of PATHLIKE_* settings")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)
    subparsers.required = True

    eval_parser = subparsers.add_parser("eval", help="Print one value")
    eval_subjects = eval_parser.add_subparsers(dest="subject", parser_class=_Parser)
    eval_subjects.required = True
    _add_eval_parsers(eval_subjects)

    validate_parser = subparsers.add_parser("validate", help="Run invariant suites")
    validate_parser.add_argument(
        "--suite", choices=SUITE_NAMES + ("all",), default="all", help="Suite to run"
    )
    validate_parser.add_argument("--seed", type=_integer, help="Random seed")
    validate_parser.add_argument("--mc-samples", type=int, help="Monte-Carlo samples")
    validate_parser.add_argument("--workers", type=int, help="Monte-Carlo threads")
    validate_parser.add_argument(
        "--tol-scale", type=float, default=1.0, help="Multiply every tolerance"
    )

    table_parser = subparsers.add_parser("table", help="Write a CSV table")
    table_subjects = table_parser.add_subparsers(dest="subject", parser_class=_Parser)
    table_subjects.required = True
    _add_table_parsers(table_subjects)

    return parser.parse_args(argv)


def _surface(args):
    return preset(args.surface, args.vectors)


def _length_input(args):
    if args.surface is None or args.p is None or args.q is None:
        raise ConfigError("--surface, --p and --q are required")
    return LengthIntegralInput.from_points(
        _surface(args), ChartPoint(*args.p), ChartPoint(*args.q), args.t
    )


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError(f"missing {', '.join(missing)} for {args.subject}")


def _eval_bessel_clifford(args, settings):
    if args.route == "contour":
        return bc_contour(args.nu, args.z)
    if args.route == "bessel":
        return bc_modified_bessel(args.nu, args.z)
    return bessel_clifford(args.nu, args.z, settings.series_policy())


def _eval_vol(args, settings):
    if args.k is not None:
        return vol_gamma_single_field(args.k, args.t)
    if args.t0 is not None or args.lam is not None:
        _require(args, "t0", "lam")
        return vol_gamma_lambda(args.t, args.t0, args.lam)
    _require(args, "a")
    return vol_gamma_plane(args.t, args.a)


def _eval_length_integral(args, settings):
    settings = settings.override(
        max_half_length=args.max_half_length,
        mc_samples=args.mc_samples,
        seed=args.seed,
        workers=args.workers,
    )
    data = _length_input(args)
    if args.method == "average":
        return corollary_average_form(data)
    if args.method == "stratified":
        return stratified_length_sum(data, settings.max_half_length).value
    if args.method == "mc":
        return mc_total_integral(
            data.profile, data, settings.max_half_length, settings.mc_config()
        ).value
    return theorem_length_integral(data).value


def _eval_bound(args, settings):
    if args.kind == "bessel-clifford":
        _require(args, "nu", "z")
        return bc_bound(args.nu, args.z)
    if args.kind == "cbinom":
        _require(args, "t", "a")
        return cbinom_bound(args.t - args.a, args.a)
    return corollary_growth_bound(_length_input(args))


EVALUATORS = {
    "cbinom": lambda args, settings: cbinom(args.t, args.a, settings.series_policy()),
    "bessel-clifford": _eval_bessel_clifford,
    "v-integral": lambda args, settings: v_integral(args.s, args.t, settings.series_policy()),
    "curvature": lambda args, settings: gauss_curvature(_surface(args), args.x),
    "vol": _eval_vol,
    "length-integral": _eval_length_integral,
    "bound": _eval_bound,
}


def cmd_eval(args, settings):
    """
    Print one value with 17 significant digits.

    Returns:
        int: Exit code
    """
    value = EVALUATORS[args.subject](args, settings)
    print(format_real(value))
    return EXIT_OK


def cmd_validate(args, settings):
    """
    Run the requested suite and print the report.

    Returns:
        int: 0 if every property passed, 1 otherwise
    """
    settings = settings.override(
        seed=args.seed, mc_samples=args.mc_samples, workers=args.workers
    )
    success = validate_workflow(args.suite, settings, args.tol_scale)
    return EXIT_OK if success else EXIT_VALIDATION_FAILED


def _fraction_rows(ts, fraction, evaluate):
    for t in ts:
        a = fraction * t
        try:
            yield t, a, evaluate(t, a)
        except DomainError:
            continue


def build_table(args, settings):
    """
    Evaluate the requested grid; rows outside the domain are skipped.

    Returns:
        CsvTable: Grid columns followed by the value column
    """
    policy = settings.series_policy()
    if args.subject == "cbinom":
        table = CsvTable(["t", "a", "cbinom"])
        for row in _fraction_rows(args.t, args.a_frac, lambda t, a: cbinom(t, a, policy)):
            table.add_row(*row)
    elif args.subject == "vol":
        table = CsvTable(["t", "a", "vol"])
        for row in _fraction_rows(args.t, args.a_frac, vol_gamma_plane):
            table.add_row(*row)
    elif args.subject == "bessel-clifford":
        table = CsvTable(["z", f"C_{args.nu}"])
        for z in args.z:
            try:
                table.add_row(z, bessel_clifford(args.nu, z, policy))
            except DomainError:
                continue
    else:
        profile = _surface(args)
        table = CsvTable(["a", "length_integral"])
        for a in args.a:
            try:
                data = LengthIntegralInput.from_budget(profile, ChartPoint(*args.p), a, args.t)
                table.add_row(a, theorem_length_integral(data).value)
            except DomainError:
                continue
    return table


def cmd_table(args, settings):
    """
    Write the requested table to ``args.out``.

    Returns:
        int: 0, or 73 if the file cannot be written
    """
    table = build_table(args, settings)
    try:
        table.write(args.out)
    except OSError as e:
        print(f"❌ Error: cannot write {args.out}: {e}", file=sys.stderr)
        return EXIT_CANT_CREATE
    print(f"✅ Wrote {len(table.rows)} rows to {args.out}")
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "validate": cmd_validate, "table": cmd_table}


def main(argv=None):
    """
    Main function to run the script.

    Returns:
        int: Exit code (0 for success, non-zero for failure)
    """
    args = parse_arguments(argv)

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)

    try:
        settings = load_settings(args.config)
        return COMMANDS[args.command](args, settings)
    except ConfigError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PathlikeError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
