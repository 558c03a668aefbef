"""`partitions` subcommands."""
import argparse

from app.commands.common import CommandOutput, base_diagnostics
from app.exceptions import PlayerLimitError
from app.services.formation_engine import count_partitions, enumerate_partitions
from app.utils.formatting import format_blocks

LIST_MAX_PLAYERS = 8


def count(args) -> CommandOutput:
    total = count_partitions(args.n)
    return CommandOutput(result={"n": args.n, "count": total}, diagnostics=base_diagnostics(), lines=[str(total)])


def list_all(args) -> CommandOutput:
    if args.n > LIST_MAX_PLAYERS:
        raise PlayerLimitError(f"partitions list supports at most {LIST_MAX_PLAYERS} players, got {args.n}")
    partitions = list(enumerate_partitions(args.n))
    return CommandOutput(
        result={"n": args.n, "partitions": [p.as_lists() for p in partitions]},
        diagnostics=base_diagnostics(),
        lines=[format_blocks(p.blocks) for p in partitions],
    )


def register(subparsers) -> argparse._SubParsersAction:
    """Register `partitions` and its subcommands."""
    parser = subparsers.add_parser("partitions", help="set partitions of the player set")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    p = commands.add_parser("count", help="Bell number")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=count)

    p = commands.add_parser("list", help="every partition in canonical order")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=list_all)
    return commands
