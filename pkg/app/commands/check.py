"""`check` subcommands: game properties and allocation tests."""
import argparse

from app.commands.common import (
    CommandOutput,
    base_diagnostics,
    flag_line,
    parse_allocation,
)
from app.services.canonical_solvers import (
    balancedness_report,
    check_convex,
    check_superadditive,
    core_membership,
    fair_allocations_in_core,
    kernel_check,
)
from app.services.coalition_structure import relative_efficiency_check
from app.services.game_files import load_game, parse_partition_file, read_text
from app.services.game_model import is_imputation
from app.utils.bitmask import format_coalition
from app.utils.formatting import format_number


def _property(name: str, report) -> CommandOutput:
    lines = [flag_line(name, report.holds)]
    if report.witness is not None:
        first, second = report.witness
        lines.append(f"witness: {format_coalition(first)} {format_coalition(second)}")
    return CommandOutput(result=report.model_dump(mode="json"), diagnostics=base_diagnostics(), lines=lines)


def superadditive(args) -> CommandOutput:
    return _property("superadditive", check_superadditive(load_game(args.game)))


def convex(args) -> CommandOutput:
    return _property("convex", check_convex(load_game(args.game)))


def balanced(args) -> CommandOutput:
    report = balancedness_report(load_game(args.game))
    lines = [flag_line("balanced", report.balanced)]
    weights = {}
    if report.certificate is not None:
        ordered = sorted(report.certificate.weights.items())
        weights = {str(mask): w for mask, w in ordered}
        lines += [f"  {format_coalition(mask)}: {format_number(w)}" for mask, w in ordered]
    return CommandOutput(
        result={"balanced": report.balanced, "weights": weights},
        diagnostics=base_diagnostics(lp_iterations=report.lp_iterations),
        lines=lines,
    )


def imputation(args) -> CommandOutput:
    game = load_game(args.game)
    holds = is_imputation(game, parse_allocation(game, args.x))
    return CommandOutput(result={"imputation": holds}, diagnostics=base_diagnostics(), lines=[flag_line("imputation", holds)])


def kernel(args) -> CommandOutput:
    game = load_game(args.game)
    holds = kernel_check(game, parse_allocation(game, args.x), respect_floor=args.respect_floor)
    return CommandOutput(result={"kernel": holds}, diagnostics=base_diagnostics(), lines=[flag_line("kernel", holds)])


def core_member(args) -> CommandOutput:
    game = load_game(args.game)
    holds = core_membership(game, parse_allocation(game, args.x))
    return CommandOutput(result={"core_member": holds}, diagnostics=base_diagnostics(), lines=[flag_line("in core", holds)])


def fairness(args) -> CommandOutput:
    results = fair_allocations_in_core(load_game(args.game))
    lines = [flag_line(f"{rule} in core", holds) for rule, holds in results.items()]
    return CommandOutput(result=results, diagnostics=base_diagnostics(), lines=lines)


def relative_efficiency(args) -> CommandOutput:
    game = load_game(args.game)
    partition = parse_partition_file(read_text(args.partition), game.players)
    holds = relative_efficiency_check(game, partition, parse_allocation(game, args.x))
    return CommandOutput(
        result={"relatively_efficient": holds},
        diagnostics=base_diagnostics(),
        lines=[flag_line("relatively efficient", holds)],
    )


def register(subparsers) -> argparse._SubParsersAction:
    """Register `check` and its subcommands."""
    parser = subparsers.add_parser("check", help="test game properties and allocations")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    for name, handler in (
        ("superadditive", superadditive),
        ("convex", convex),
        ("balanced", balanced),
        ("fairness", fairness),
    ):
        p = commands.add_parser(name)
        p.add_argument("game")
        p.set_defaults(handler=handler)

    for name, handler in (("imputation", imputation), ("kernel", kernel), ("core", core_member)):
        p = commands.add_parser(name)
        p.add_argument("game")
        p.add_argument("--x", required=True, help="allocation as comma-separated payoffs")
        if name == "kernel":
            p.add_argument("--respect-floor", action="store_true")
        p.set_defaults(handler=handler)

    p = commands.add_parser("relative-efficiency")
    p.add_argument("game")
    p.add_argument("partition")
    p.add_argument("--x", required=True)
    p.set_defaults(handler=relative_efficiency)
    return commands
