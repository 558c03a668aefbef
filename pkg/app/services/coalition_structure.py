"""Games under an imposed coalition structure."""
import logging

from app.config import scaled_tolerance
from app.exceptions import EmptyBlockError
from app.schemas.game import Allocation, Coalition, Partition, TUGame
from app.schemas.structure import RestrictedGame
from app.services.canonical_solvers import shapley_exact
from app.services.game_model import game_from_table, require_length
from app.utils.bitmask import members, spread

logger = logging.getLogger(__name__)


def restrict(game: TUGame, block: Coalition) -> RestrictedGame:
    """
    Restrict ``game`` to the members of ``block``.

    Args:
        game: Parent game
        block: Nonempty coalition

    Returns:
        RestrictedGame whose table is indexed by dense masks over the block's members

    Raises:
        EmptyBlockError: ``block`` is empty
    """
    if block <= 0:
        raise EmptyBlockError("cannot restrict a game to the empty coalition")
    players = members(block)
    values = [game.values[spread(dense, players)] for dense in range(1 << len(players))]
    return RestrictedGame(
        parent=game,
        block=block,
        members=tuple(players),
        game=game_from_table(len(players), values),
    )


def scatter(restricted: RestrictedGame, local: Allocation, into: list[float]) -> None:
    """Write a block-local allocation back into a global payoff list."""
    for k, player in enumerate(restricted.members):
        into[player] = local.payoffs[k]


def aumann_dreze_value(game: TUGame, partition: Partition) -> Allocation:
    """
    Shapley value of every block's restricted game, scattered back to the players.

    Args:
        game: The game
        partition: Coalition structure over the same players

    Returns:
        Allocation that is efficient block by block
    """
    payoffs = [0.0] * game.players
    for block in partition.blocks:
        restricted = restrict(game, block)
        scatter(restricted, shapley_exact(restricted.game), payoffs)
    return Allocation.of(payoffs)


def relative_efficiency_check(game: TUGame, partition: Partition, x: Allocation) -> bool:
    """
    Check that each block's payoffs add up to the block's worth.

    Args:
        game: The game
        partition: Coalition structure
        x: Allocation

    Returns:
        True when every block is efficient within tolerance
    """
    require_length(game, x)
    for block in partition.blocks:
        worth = game.value(block)
        if abs(x.coalition_sum(block) - worth) > scaled_tolerance(worth):
            logger.debug(f"block {members(block)} receives {x.coalition_sum(block)} of {worth}")
            return False
    return True
