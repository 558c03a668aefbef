"""Construction and validity rules for games, allocations and partitions."""
import logging
import math
from typing import Callable, Iterable, Sequence

from app.config import scaled_tolerance, settings
from app.exceptions import (
    EmptyBlockError,
    IncompleteCoverError,
    LengthMismatchError,
    NonFiniteValueError,
    NonzeroEmptyCoalitionError,
    OverlapError,
    PlayerLimitError,
)
from app.schemas.game import Allocation, Coalition, Partition, TUGame
from app.utils.bitmask import full_mask, lowest_player, members

logger = logging.getLogger(__name__)


def game_from_table(n: int, values: Sequence[float]) -> TUGame:
    """
    Build a validated TU game from its full value table.

    Args:
        n: Player count
        values: 2^n coalition values indexed by bitmask

    Returns:
        The game, with the table stored verbatim

    Raises:
        LengthMismatchError: Table length is not 2^n
        NonzeroEmptyCoalitionError: values[0] != 0
        NonFiniteValueError: NaN or infinite entry
    """
    if n < 1:
        raise PlayerLimitError(f"a game needs at least one player, got {n}")
    if len(values) != 1 << n:
        raise LengthMismatchError(f"{n} players need {1 << n} values, got {len(values)}")
    values = tuple(float(v) for v in values)
    for mask, v in enumerate(values):
        if not math.isfinite(v):
            raise NonFiniteValueError(f"value of coalition {mask} is not finite: {v}")
    if values[0] != 0:
        raise NonzeroEmptyCoalitionError(f"value of the empty coalition must be 0, got {values[0]}")
    return TUGame(players=n, values=values)


def game_from_function(n: int, worth: Callable[[Coalition], float]) -> TUGame:
    """Tabulate ``worth`` over every coalition of ``n`` players (v(empty) forced to 0)."""
    values = [0.0] + [float(worth(mask)) for mask in range(1, 1 << n)]
    return game_from_table(n, values)


def additive_game(weights: Sequence[float]) -> TUGame:
    """Game with v(S) equal to the sum of the members' weights."""
    return game_from_function(len(weights), lambda s: math.fsum(weights[i] for i in members(s)))


def require_players(game: TUGame, limit: int, operation: str) -> None:
    """Raise PlayerLimitError when the game is too large for ``operation``."""
    if game.players > limit:
        raise PlayerLimitError(f"{operation} supports at most {limit} players, got {game.players}")


def require_exact(game: TUGame, operation: str) -> None:
    require_players(game, settings.EXACT_MAX_PLAYERS, operation)


def require_length(game: TUGame, x: Allocation) -> None:
    if x.n != game.players:
        raise LengthMismatchError(f"allocation has {x.n} entries for {game.players} players")


def is_efficient(game: TUGame, x: Allocation) -> bool:
    """Group rationality: payoffs sum to v(N) within tolerance."""
    require_length(game, x)
    return abs(x.total - game.grand_value) <= scaled_tolerance(game.grand_value)


def is_imputation(game: TUGame, x: Allocation) -> bool:
    """
    Check group and individual rationality.

    Args:
        game: The game
        x: Candidate allocation

    Returns:
        True when the payoffs sum to v(N) and every x_i >= v({i}) within tolerance
    """
    if not is_efficient(game, x):
        return False
    tol = settings.TOLERANCE
    return all(x.payoffs[i] >= game.value(1 << i) - tol for i in range(game.players))


def is_imputation_set_nonempty(game: TUGame) -> bool:
    """Stand-alone values must leave room below v(N)."""
    total = math.fsum(game.singleton_values())
    return total <= game.grand_value + scaled_tolerance(game.grand_value)


def canonical_partition(blocks: Iterable[Coalition], players: int) -> Partition:
    """
    Validate blocks and put them in canonical order.

    Args:
        blocks: Coalition masks
        players: Player count the blocks must cover

    Returns:
        Partition with blocks sorted by lowest member

    Raises:
        EmptyBlockError: A block has no members
        OverlapError: Two blocks share a player
        IncompleteCoverError: Some player is in no block
    """
    blocks = list(blocks)
    seen = 0
    for block in blocks:
        if block <= 0:
            raise EmptyBlockError("partition blocks must be nonempty")
        if block & ~full_mask(players):
            raise IncompleteCoverError(f"block {members(block)} names players outside 0..{players - 1}")
        if seen & block:
            raise OverlapError(f"player(s) {members(seen & block)} appear in more than one block")
        seen |= block
    if seen != full_mask(players):
        missing = members(full_mask(players) & ~seen)
        raise IncompleteCoverError(f"player(s) {missing} are in no block")
    return Partition(players=players, blocks=tuple(sorted(blocks, key=lowest_player)))


def partition_from_lists(blocks: Iterable[Iterable[int]], players: int) -> Partition:
    """Canonical partition from lists of 0-based players."""
    masks = []
    for block in blocks:
        mask = 0
        for player in block:
            if player < 0:
                raise IncompleteCoverError(f"player {player} is outside 0..{players - 1}")
            if mask >> player & 1:
                raise OverlapError(f"player {player} is listed twice in one block")
            mask |= 1 << player
        masks.append(mask)
    return canonical_partition(masks, players)


def singletons(players: int) -> Partition:
    return Partition(players=players, blocks=tuple(1 << i for i in range(players)))


def grand_partition(players: int) -> Partition:
    return Partition(players=players, blocks=(full_mask(players),))
