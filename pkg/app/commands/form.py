"""`form` subcommands: merge-and-split and stability checks."""
import argparse

from app.commands.common import CommandOutput, add_order_flags, base_diagnostics, comparison_order, flag_line
from app.exceptions import UsageError
from app.services.formation_engine import dc_candidate, dhp_stable, optimal_partition, run_merge_split
from app.services.game_files import load_game, parse_partition_file, read_text
from app.services.game_model import grand_partition, singletons
from app.utils.bitmask import members
from app.utils.formatting import format_blocks, format_number


def merge_split(args) -> CommandOutput:
    game = load_game(args.game)
    order = comparison_order(args.order, args.payoff)
    if args.init == "singletons":
        initial = singletons(game.players)
    elif args.init == "grand":
        initial = grand_partition(game.players)
    else:
        if not args.partition:
            raise UsageError("--init file needs --partition PATH")
        initial = parse_partition_file(read_text(args.partition), game.players)
    trace = run_merge_split(game, order, initial)
    lines = [
        f"{step.operation.value}: {format_blocks(step.before)} -> {format_blocks(step.after)}"
        for step in trace.steps
    ]
    lines.append(f"final: {format_blocks(trace.final.blocks)}")
    return CommandOutput(
        result={
            "steps": [
                {
                    "operation": step.operation.value,
                    "before": [members(c) for c in step.before],
                    "after": [members(c) for c in step.after],
                }
                for step in trace.steps
            ],
            "final": trace.final.as_lists(),
        },
        diagnostics=base_diagnostics(order=order.kind.value, payoff=order.payoff_rule.value),
        lines=lines,
    )


def dc_check(args) -> CommandOutput:
    game = load_game(args.game)
    order = comparison_order(args.order, args.payoff)
    candidate = dc_candidate(game, order)
    if candidate is None:
        lines = ["no common outcome: merge-and-split depends on the starting partition"]
        result = {"candidate": None}
    else:
        lines = [f"candidate: {format_blocks(candidate.blocks)}"]
        result = {"candidate": candidate.as_lists()}
    return CommandOutput(result=result, diagnostics=base_diagnostics(order=order.kind.value), lines=lines)


def stable(args) -> CommandOutput:
    game = load_game(args.game)
    partition = parse_partition_file(read_text(args.partition), game.players)
    holds = dhp_stable(game, partition, comparison_order(args.order, args.payoff))
    return CommandOutput(result={"dhp_stable": holds}, diagnostics=base_diagnostics(), lines=[flag_line("Dhp-stable", holds)])


def optimal(args) -> CommandOutput:
    partition, welfare = optimal_partition(load_game(args.game))
    return CommandOutput(
        result={"partition": partition.as_lists(), "welfare": welfare},
        diagnostics=base_diagnostics(),
        lines=[f"partition: {format_blocks(partition.blocks)}", f"welfare: {format_number(welfare)}"],
    )


def register(subparsers) -> argparse._SubParsersAction:
    """Register `form` and its subcommands."""
    parser = subparsers.add_parser("form", help="coalition formation")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    p = commands.add_parser("merge-split", help="run merge-and-split to a stable partition")
    p.add_argument("game")
    add_order_flags(p)
    p.add_argument("--init", choices=["singletons", "grand", "file"], default="singletons")
    p.add_argument("--partition", help="starting partition file for --init file")
    p.set_defaults(handler=merge_split)

    p = commands.add_parser("dc-check", help="look for the partition every start settles at")
    p.add_argument("game")
    add_order_flags(p)
    p.set_defaults(handler=dc_check)

    p = commands.add_parser("stable", help="test a partition for merge-and-split stability")
    p.add_argument("game")
    p.add_argument("partition")
    add_order_flags(p)
    p.set_defaults(handler=stable)

    p = commands.add_parser("optimal", help="welfare-maximising partition by enumeration")
    p.add_argument("game")
    p.set_defaults(handler=optimal)
    return commands
