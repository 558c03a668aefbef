"""Graph-restricted games and the Myerson value."""
import logging

import networkx as nx

from app.config import settings
from app.exceptions import PlayerLimitError
from app.schemas.game import Allocation, Coalition, TUGame
from app.schemas.graph import GameGraph
from app.services.canonical_solvers import shapley_exact
from app.services.game_model import game_from_table, require_players
from app.utils.bitmask import lowest_player, mask_of, members

logger = logging.getLogger(__name__)


def _components(coalition: Coalition, graph: nx.Graph) -> list[Coalition]:
    induced = graph.subgraph(members(coalition))
    blocks = [mask_of(c) for c in nx.connected_components(induced)]
    return sorted(blocks, key=lowest_player)


def connected_components(coalition: Coalition, g: GameGraph) -> list[Coalition]:
    """
    Split ``coalition`` into the components of the subgraph it induces.

    Args:
        coalition: Coalition mask
        g: Communication graph

    Returns:
        Component masks in ascending order of their lowest member
    """
    return _components(coalition, g.to_networkx())


def myerson_restricted_game(game: TUGame, g: GameGraph) -> TUGame:
    """
    u(S) = sum of v over the connected components of S in ``g``.

    Raises:
        PlayerLimitError: The graph and the game disagree on the player count, or n is too large
    """
    require_players(game, settings.EXACT_MAX_PLAYERS, "Myerson restriction")
    if g.players != game.players:
        raise PlayerLimitError(f"graph has {g.players} players, game has {game.players}")
    graph = g.to_networkx()
    values = [0.0] * (1 << game.players)
    for mask in range(1, 1 << game.players):
        values[mask] = sum(game.values[c] for c in _components(mask, graph))
    return game_from_table(game.players, values)


def myerson_value(game: TUGame, g: GameGraph) -> Allocation:
    """Shapley value of the graph-restricted game."""
    restricted = myerson_restricted_game(game, g)
    logger.debug(f"Myerson restriction over {len(g.edges)} edge(s) gives u(N) = {restricted.grand_value}")
    return shapley_exact(restricted)
