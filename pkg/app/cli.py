"""
Command-line entry point: python main.py <command> [flags].

Each command writes one CSV table (or a JSON object with config, results
and checks) to --out or stdout. Logs go to stderr.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.models.config import COMMANDS, RunConfig
from app.routes import CommandRouter
from app.routes import checks, coeffs, figure, spectrum, tables
from app.utils.errors import ContourError, DomainError, PathError, SolverError, ToolkitError, UnsupportedSpecError
from app.utils.logging import logger, setup_logging
from app.utils.output import render_csv, render_json, write_output

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_FAILURE = 3

router = CommandRouter()
router.include_router(coeffs.router)
router.include_router(spectrum.router)
router.include_router(tables.router)
router.include_router(figure.router)
router.include_router(checks.router)


def complex_arg(text: str) -> complex:
    """Accepts 2i as well as 2j."""
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptquartic",
        description="Spectra of p^2 - g x^4 + a/x^2 and its partner p^2 + 4g x^4 + b x.",
    )
    parser.add_argument("command", choices=COMMANDS,
                        help="; ".join(f"{c.name}: {c.summary}" for c in router.commands.values()))
    parser.add_argument("--g", type=float, default=1.0, help="quartic coupling g > 0 (default 1)")
    parser.add_argument("--a", type=float, default=None,
                        help="inverse-square coupling of H (default 6; -0.5 for table2)")
    parser.add_argument("--b", type=complex_arg, default=None,
                        help="linear coupling of h; selects the h family for coeffs/spectrum")
    parser.add_argument("--hbar", type=float, default=1.0)
    parser.add_argument("--kmax", type=int, default=None,
                        help="truncation order of the action series (default 24; 60 for equiv-check)")
    parser.add_argument("--nmax", type=int, default=10, help="highest level n (default 10)")
    parser.add_argument("--steps", type=int, default=141, help="a values in the figure1 sweep")
    parser.add_argument("--a-min", type=float, default=-4.0)
    parser.add_argument("--a-max", type=float, default=3.0)
    parser.add_argument("--contour-center", type=complex_arg, default=None,
                        help="centre of the branch-cut ellipse in the rescaled plane")
    parser.add_argument("--contour-axes", type=float, nargs=2, default=None, metavar=("A", "B"),
                        help="semi-axes of the branch-cut ellipse")
    parser.add_argument("--n-points", type=int, default=4096, help="quadrature points on the ellipse")
    parser.add_argument("--rk-tol", type=float, default=1e-12, help="relative tolerance of the integrator")
    parser.add_argument("--secant-tol", type=float, default=1e-10, help="eigenvalue convergence tolerance")
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--log-file", default=None)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_const", const=1, dest="verbosity", default=0)
    verbosity.add_argument("-q", "--quiet", action="store_const", const=-1, dest="verbosity")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        g=args.g,
        a=args.a,
        b=args.b,
        hbar=args.hbar,
        kmax=args.kmax,
        nmax=args.nmax,
        steps=args.steps,
        a_min=args.a_min,
        a_max=args.a_max,
        contour_center=args.contour_center,
        contour_axes=tuple(args.contour_axes) if args.contour_axes else None,
        n_points=args.n_points,
        rk_tol=args.rk_tol,
        secant_tol=args.secant_tol,
        out=args.out,
        format=args.format,
        log_file=args.log_file,
        verbosity=args.verbosity,
    )


def run(config: RunConfig) -> int:
    command = router.commands[config.command]
    logger.info(f"Running {command.name}")
    try:
        result = command.handler(config)
    except (DomainError, UnsupportedSpecError) as e:
        logger.error(f"{command.name}: invalid parameters: {e}")
        return EXIT_USAGE
    except (ContourError, PathError, SolverError) as e:
        logger.error(f"{command.name}: numerical failure: {e}")
        return EXIT_FAILURE
    except ToolkitError as e:
        logger.error(f"{command.name}: {e}")
        return EXIT_FAILURE

    if config.format == "json":
        text = render_json(config.model_dump(), result)
    else:
        text = render_csv(result.header, result.rows, result.comments)
    write_output(text, config.out)

    for check in result.checks:
        if not check.passed:
            logger.error(f"Check {check.name} failed: {check.max_deviation:.3e} > {check.tolerance:.1e}")
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {1: logging.DEBUG, 0: logging.INFO, -1: logging.WARNING}[args.verbosity]
    setup_logging(level, args.log_file)
    try:
        config = config_from_args(args)
    except ValidationError as e:
        parser.print_usage(sys.stderr)
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE
    return run(config)
