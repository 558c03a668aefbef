"""Command-line entry point of the coalition solver."""
import argparse
import logging
import sys
from typing import Optional, Sequence, TextIO

from pydantic import ValidationError

from app.commands import GROUPS
from app.config import settings
from app.exceptions import CoalitionError
from app.schemas.files import SolveReport

logger = logging.getLogger(__name__)

VERSION = "1.0.0"


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser with one sub-parser per command group."""
    parser = argparse.ArgumentParser(
        prog="coalition",
        description="Solve coalitional games and simulate coalition and network formation",
    )
    parser.add_argument("--json", action="store_true", help="print a machine-readable report")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for group in GROUPS:
        commands = group.register(subparsers)
        for leaf in commands.choices.values():
            leaf.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    return parser


def run_command(
    argv: Sequence[str],
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> tuple[int, Optional[SolveReport]]:
    """
    Parse ``argv``, dispatch to the handler and print its report.

    Args:
        argv: Arguments without the program name
        stdout: Report stream, defaults to sys.stdout
        stderr: Diagnostics stream, defaults to sys.stderr

    Returns:
        (exit code, report); the report is None when the command failed
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        # argparse has already printed usage or help
        return (e.code if isinstance(e.code, int) else 2), None

    try:
        output = args.handler(args)
    except CoalitionError as e:
        stderr.write(f"error: {e}\n")
        logger.debug("command failed", exc_info=True)
        return e.exit_code, None
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        stderr.write(f"error: invalid parameter {where}: {first['msg']}\n")
        return CoalitionError.exit_code, None

    report = SolveReport(command=list(argv), result=output.result, diagnostics=output.diagnostics)
    if args.json:
        stdout.write(report.model_dump_json(indent=2) + "\n")
    else:
        stdout.write("\n".join(output.lines) + "\n")
    return 0, report


def main() -> None:
    """Console script entry point."""
    logging.basicConfig(level=getattr(logging, settings.LOG_LEVEL), stream=sys.stderr)
    try:
        code, _ = run_command(sys.argv[1:])
    except Exception as e:
        logger.error(f"Unhandled exception: {e}", exc_info=True)
        code = 1
    sys.exit(code)


if __name__ == "__main__":
    main()
