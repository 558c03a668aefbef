"""`netform` subcommands: relay network formation."""
import argparse
from pathlib import Path

from app.commands.common import CommandOutput, base_diagnostics, flag_line
from app.exceptions import GameFileError
from app.schemas.graph import BASE_STATION, NetformParams
from app.services.game_files import parse_layout_file, parse_state_file, read_text, write_state_file
from app.services.network_formation import nash_network_check, relay_utility, run_network_formation
from app.utils.formatting import format_number, render_table


def _params(args) -> NetformParams:
    return NetformParams(
        hop_scale=args.hop_scale,
        decay=args.decay,
        link_cost=args.link_cost,
        child_reward=args.child_reward,
        max_links=args.max_links,
    )


def _tree_lines(state, params) -> list[str]:
    rows = [
        [str(relay), "BS" if parent == BASE_STATION else str(parent), format_number(relay_utility(state, params, relay))]
        for relay, parent in enumerate(state.parent)
    ]
    return render_table(["relay", "parent", "utility"], rows).splitlines()


def run(args) -> CommandOutput:
    layout = parse_layout_file(read_text(args.layout))
    params = _params(args)
    outcome = run_network_formation(
        layout.positions, layout.traffic, params, seed=args.seed, bs_position=layout.bs_position
    )
    if args.output:
        try:
            Path(args.output).write_text(write_state_file(outcome.state), encoding="utf-8")
        except OSError as e:
            raise GameFileError(f"{args.output}: cannot write file ({e})")
    lines = _tree_lines(outcome.state, params)
    lines.append(f"rounds: {outcome.rounds}")
    lines.append(flag_line("converged", outcome.converged))
    return CommandOutput(
        result={"parent": list(outcome.state.parent), "rounds": outcome.rounds, "converged": outcome.converged},
        diagnostics=base_diagnostics(params=params.model_dump()),
        lines=lines,
    )


def check(args) -> CommandOutput:
    state = parse_state_file(read_text(args.state))
    params = _params(args)
    holds = nash_network_check(state, params)
    return CommandOutput(
        result={"nash_network": holds},
        diagnostics=base_diagnostics(params=params.model_dump()),
        lines=[*_tree_lines(state, params), flag_line("Nash network", holds)],
    )


def _add_param_flags(parser) -> None:
    defaults = NetformParams()
    parser.add_argument("--hop-scale", type=float, default=defaults.hop_scale, help="d0 in meters")
    parser.add_argument("--decay", type=float, default=defaults.decay)
    parser.add_argument("--link-cost", type=float, default=defaults.link_cost)
    parser.add_argument("--child-reward", type=float, default=defaults.child_reward)
    parser.add_argument("--max-links", type=int, default=defaults.max_links)


def register(subparsers) -> argparse._SubParsersAction:
    """Register `netform` and its subcommands."""
    parser = subparsers.add_parser("netform", help="relay network formation")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    p = commands.add_parser("run", help="prioritised best response from a layout file")
    p.add_argument("layout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the final network state here")
    _add_param_flags(p)
    p.set_defaults(handler=run)

    p = commands.add_parser("check", help="test a network state for the Nash property")
    p.add_argument("state")
    _add_param_flags(p)
    p.set_defaults(handler=check)
    return commands
