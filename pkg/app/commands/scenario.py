"""`scenario` subcommands: emit the game file of a worked example or application."""
import argparse
from pathlib import Path

from app.commands.common import CommandOutput, base_diagnostics, parse_floats, parse_point
from app.exceptions import GameFileError
from app.schemas.scenario import BankruptcyParams, CssParams, MacParams, MimoParams
from app.services.game_files import write_game_file
from app.services.scenarios import (
    bankruptcy_game,
    css_sensing_game,
    gaussian_mac_game,
    majority_voting_game,
    virtual_mimo_game,
)


def _emit(game, args) -> CommandOutput:
    text = write_game_file(game)
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as e:
            raise GameFileError(f"{args.output}: cannot write file ({e})")
    return CommandOutput(
        result={"players": game.players, "values": list(game.values)},
        diagnostics=base_diagnostics(),
        lines=text.rstrip("\n").splitlines(),
    )


def majority(args) -> CommandOutput:
    return _emit(majority_voting_game(args.n), args)


def bankruptcy(args) -> CommandOutput:
    params = BankruptcyParams(claims=parse_floats(args.claims), estate=args.estate)
    return _emit(bankruptcy_game(params), args)


def mac(args) -> CommandOutput:
    return _emit(gaussian_mac_game(MacParams(powers=parse_floats(args.powers), noise=args.noise)), args)


def mimo(args) -> CommandOutput:
    params = MimoParams(
        positions=[parse_point(p) for p in args.positions],
        budget=args.budget,
        exchange_exponent=args.exponent,
        exchange_scale=args.exchange_scale,
        rx_antennas=args.antennas,
        noise=args.noise,
    )
    return _emit(virtual_mimo_game(params), args)


def css(args) -> CommandOutput:
    params = CssParams(
        miss=parse_floats(args.miss),
        false_alarm=parse_floats(args.false_alarm),
        alpha=args.alpha,
        beta=args.beta,
    )
    return _emit(css_sensing_game(params), args)


def register(subparsers) -> argparse._SubParsersAction:
    """Register `scenario` and its subcommands."""
    parser = subparsers.add_parser("scenario", help="generate scenario games as game files")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    p = commands.add_parser("majority", help="three-voter majority game")
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(handler=majority)

    p = commands.add_parser("bankruptcy", help="estate division among claimants")
    p.add_argument("--claims", required=True, help="comma-separated claims")
    p.add_argument("--estate", type=float, required=True)
    p.set_defaults(handler=bankruptcy)

    p = commands.add_parser("mac", help="Gaussian MAC under jamming")
    p.add_argument("--powers", required=True, help="comma-separated powers in watts")
    p.add_argument("--noise", type=float, default=1.0)
    p.set_defaults(handler=mac)

    p = commands.add_parser("mimo", help="virtual MIMO with exchange costs")
    p.add_argument("--positions", nargs="+", required=True, help="user positions as x,y")
    p.add_argument("--budget", type=float, required=True)
    p.add_argument("--exponent", type=float, default=2.0)
    p.add_argument("--exchange-scale", type=float, default=1e-6)
    p.add_argument("--antennas", type=int, default=1)
    p.add_argument("--noise", type=float, default=1.0)
    p.set_defaults(handler=mimo)

    p = commands.add_parser("css", help="collaborative spectrum sensing")
    p.add_argument("--miss", required=True, help="comma-separated miss probabilities")
    p.add_argument("--false-alarm", required=True, help="comma-separated false-alarm probabilities")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.set_defaults(handler=css)

    for p in commands.choices.values():
        p.add_argument("--output", help="write the game file here")
    return commands
