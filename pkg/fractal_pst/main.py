import argparse
import json
import logging
import sys

from pydantic import ValidationError

from .commands import evolve as evolve_command
from .commands import generate as generate_command
from .commands import inspect_graph as inspect_command
from .commands import selftest as selftest_command
from .commands import verify as verify_command
from .config import settings
from .errors import PSTError
from .schemas import RunConfig

logger = logging.getLogger(__name__)

# Exit codes: 0 certified/success, 1 well-formed but not certified, 2 input error.
EXIT_INPUT_ERROR = 2


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractal-pst",
        description="Perfect state transfer on layered fractal graphs via lifted Jacobi chains",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate_command.register(subparsers)
    verify_command.register(subparsers)
    evolve_command.register(subparsers)
    inspect_command.register(subparsers)
    selftest_command.register(subparsers)

    return parser


def _one_line(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        return "; ".join(error["msg"] for error in exc.errors())
    return str(exc).splitlines()[0] if str(exc) else type(exc).__name__


def main(argv: list[str] | None = None) -> int:
    args = create_parser().parse_args(argv)
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    options = {key: value for key, value in vars(args).items() if key != "handler" and value is not None}
    try:
        config = RunConfig(**options)
        return args.handler(config)
    except (PSTError, ValidationError, OSError, json.JSONDecodeError) as exc:
        logger.debug("%s failed", args.command, exc_info=True)
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return EXIT_INPUT_ERROR
