"""`solve` subcommands: allocations and the core."""
import argparse

from app.commands.common import CommandOutput, allocation_lines, base_diagnostics, flag_line
from app.services.canonical_solvers import (
    NucleolusSolver,
    core_nonempty,
    least_core,
    shapley_exact,
    shapley_sampled,
    simple_game_core,
)
from app.services.coalition_structure import aumann_dreze_value
from app.services.game_files import load_game, parse_graph_file, parse_partition_file, read_text
from app.services.graph_form import myerson_value
from app.utils.formatting import format_number, format_vector


def shapley(args) -> CommandOutput:
    game = load_game(args.game)
    if args.samples:
        x = shapley_sampled(game, args.samples, args.seed)
        diagnostics = base_diagnostics(samples=args.samples, seed=args.seed)
    else:
        x = shapley_exact(game)
        diagnostics = base_diagnostics()
    return CommandOutput(result={"allocation": list(x.payoffs)}, diagnostics=diagnostics, lines=allocation_lines(x))


def nucleolus_cmd(args) -> CommandOutput:
    solver = NucleolusSolver(load_game(args.game))
    x = solver.solve()
    return CommandOutput(
        result={"allocation": list(x.payoffs)},
        diagnostics=base_diagnostics(lp_iterations=solver.iterations, stages=len(solver.levels)),
        lines=allocation_lines(x),
    )


def core(args) -> CommandOutput:
    game = load_game(args.game)
    result = simple_game_core(game) if args.simple else core_nonempty(game)
    lines = [flag_line("core nonempty", result.nonempty)]
    if result.sample_point is not None:
        lines.append(f"core point: {format_vector(result.sample_point.payoffs)}")
    if args.simple:
        lines.append(f"veto players: {result.veto_players}")
    return CommandOutput(
        result=result.model_dump(mode="json"),
        diagnostics=base_diagnostics(lp_iterations=result.lp_iterations),
        lines=lines,
    )


def least_core_cmd(args) -> CommandOutput:
    epsilon, x = least_core(load_game(args.game))
    return CommandOutput(
        result={"epsilon": epsilon, "allocation": list(x.payoffs)},
        diagnostics=base_diagnostics(),
        lines=[f"epsilon: {format_number(epsilon)}", *allocation_lines(x)],
    )


def myerson(args) -> CommandOutput:
    game = load_game(args.game)
    x = myerson_value(game, parse_graph_file(read_text(args.graph)))
    return CommandOutput(result={"allocation": list(x.payoffs)}, diagnostics=base_diagnostics(), lines=allocation_lines(x))


def aumann_dreze(args) -> CommandOutput:
    game = load_game(args.game)
    partition = parse_partition_file(read_text(args.partition), game.players)
    x = aumann_dreze_value(game, partition)
    return CommandOutput(
        result={"allocation": list(x.payoffs), "partition": partition.as_lists()},
        diagnostics=base_diagnostics(),
        lines=allocation_lines(x),
    )


def register(subparsers) -> argparse._SubParsersAction:
    """Register `solve` and its subcommands."""
    parser = subparsers.add_parser("solve", help="compute allocations and the core")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    p = commands.add_parser("shapley", help="Shapley value, exact or sampled")
    p.add_argument("game")
    p.add_argument("--samples", type=int, default=0, help="sample this many orderings instead")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=shapley)

    p = commands.add_parser("nucleolus", help="nucleolus by sequential LPs")
    p.add_argument("game")
    p.set_defaults(handler=nucleolus_cmd)

    p = commands.add_parser("core", help="core emptiness and a core point")
    p.add_argument("game")
    p.add_argument("--simple", action="store_true", help="treat the game as a simple game")
    p.set_defaults(handler=core)

    p = commands.add_parser("least-core", help="least-core value and an allocation")
    p.add_argument("game")
    p.set_defaults(handler=least_core_cmd)

    p = commands.add_parser("myerson", help="Myerson value for a communication graph")
    p.add_argument("game")
    p.add_argument("graph")
    p.set_defaults(handler=myerson)

    p = commands.add_parser("aumann-dreze", help="Shapley value inside each block of a partition")
    p.add_argument("game")
    p.add_argument("partition")
    p.set_defaults(handler=aumann_dreze)
    return commands
