"""Argument parsing and dispatch for the ecquiver command line."""

import argparse
import json
import logging
import sys
from typing import List, Optional

import pydantic

from core.config import RunConfig
from core.config_service import ConfigService
from core.error_handling import CommandErrorHandler, ValidationError, validation_error_from_pydantic
from core.logger_setup import setup_logging
from core.task_service import configure_task_service
from core.types import OutputFormat
from core.version import __version__

from .commands import CommandController, CommandResult

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as validation failures instead of exiting with status 2."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None, help="Output format.")
    common.add_argument("--field", default=None, help="Ground field: 'q' or 'fp:<prime>'.")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized checks.")

    parser = _ArgumentParser(prog="ecquiver", description="Extended convolution on weight quivers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="Override the configured log level.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    theta = sub.add_parser("theta", parents=[common], help="Bondal-Thomsen collection of a fan.")
    theta.add_argument("fan", help="Fan preset name or fan JSON file.")
    theta.add_argument(
        "--sampled",
        type=int,
        nargs="?",
        const=0,
        default=None,
        metavar="D",
        help="Sample the floor map on a 1/(2D) grid.",
    )
    theta.add_argument("--sign", type=int, choices=(1, -1), default=1, help="Convention sign applied to the weights.")

    check_br = sub.add_parser("check-br", parents=[common], help="Bondal-Ruan type of a fan.")
    check_br.add_argument("fan")

    transparency = sub.add_parser("transparency", parents=[common], help="Transparency checks for a weight list.")
    transparency.add_argument("fan")
    transparency.add_argument("--weights", required=True, help="Weights such as '(0,0),(1,0)'.")

    cohomology = sub.add_parser(
        "cohomology", parents=[common], help="Line bundle cohomology of a torus-invariant divisor."
    )
    cohomology.add_argument("fan")
    cohomology.add_argument("--divisor", required=True, help="Coefficients per ray, e.g. '0,0,-3'.")

    strata = sub.add_parser("stratify", parents=[common], help="Strata of the floor map and their orders.")
    strata.add_argument("fan")
    strata.add_argument("--svg", default=None, help="Write a drawing of the strata (rank 2 only).")
    strata.add_argument("--weights-only", action="store_true", help="Skip chamber geometry.")

    quiver = sub.add_parser("quiver", parents=[common], help="Weight quiver on a set of weights.")
    quiver.add_argument("target", help="Fan, or pA:<algebra> for the quiver of P(A).")
    quiver.add_argument("--weights", required=True)

    convolve = sub.add_parser("convolve", parents=[common], help="Extended convolution product of two sheaves.")
    convolve.add_argument("target", help="Fan of a projective space, or pA:<algebra>.")
    convolve.add_argument("left", help="Sheaf expression, e.g. 'sky[1,0]'.")
    convolve.add_argument("right")
    convolve.add_argument("--oracle", action="store_true", help="Compare with the geometric kernel on P^1.")

    invariants = sub.add_parser("invariants", parents=[common], help="K0, Balmer and Picard invariants of P(A).")
    invariants.add_argument("--algebra", required=True, help="Algebra preset name or algebra JSON file.")

    sky = sub.add_parser("sky-table", parents=[common], help="Products of skyscrapers on P(A).")
    sky.add_argument("--algebra", required=True)
    sky.add_argument("--all-points-fp", action="store_true", help="Use every point of P(A) over F_p.")
    sky.add_argument("--points", default=None, help="Points such as '(1,0),(1,1)'.")
    sky.add_argument("--compare", default=None, help="Second algebra for the reconstruction search.")

    pic = sub.add_parser("pic-count", parents=[common], help="Order of Pic(P(A)) modulo shifts over F_p.")
    pic.add_argument("--algebra", required=True)
    pic.add_argument("--prime", type=int, required=True)

    rescale = sub.add_parser("rescale", parents=[common], help="Rescale a projective monoid homomorphism.")
    rescale.add_argument("--from", dest="source", required=True)
    rescale.add_argument("--to", dest="target", required=True)
    rescale.add_argument("--matrix", required=True, help="JSON file with 'rows'.")

    sub.add_parser("selftest", parents=[common], help="Run the invariant suite.")
    return parser


def _run_config(args, config_service: ConfigService) -> RunConfig:
    try:
        return RunConfig(
            field=args.field or config_service.get("default_field", "q"),
            output_format=OutputFormat(args.format or OutputFormat.TEXT.value),
            seed=config_service.get_int("default_seed", 0) if args.seed is None else args.seed,
            svg_path=getattr(args, "svg", None),
            sampled_denominator=config_service.get_int("sampled_denominator", minimum=2),
        )
    except pydantic.ValidationError as e:
        raise validation_error_from_pydantic(e, "options") from e


def _emit(result: CommandResult, config: RunConfig):
    if config.output_format == OutputFormat.JSON:
        sys.stdout.write(json.dumps(result.data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(result.text + "\n")


def run(argv: Optional[List[str]], config_service: ConfigService) -> int:
    """Parses argv, runs one command and returns the process exit code."""
    error_handler = CommandErrorHandler()
    command = "ecquiver"
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.log_level:
            setup_logging(
                args.log_level,
                config_service.get_int("log_max_size_mb", 1),
                config_service.get_int("log_backup_count", 0),
            )
        config = _run_config(args, config_service)
        configure_task_service(config_service.get_int("worker_count", 0) or None)
        result = CommandController(config).run(command, args)
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)
    except Exception as e:
        status = error_handler.handle_command_exception(e, command)
        return int(status.exit_code)
    _emit(result, config)
    logging.info(f"{command} finished with exit code {int(result.exit_code)}")
    return int(result.exit_code)
