"""Seeded random games, partitions and relay layouts for property checks."""
import numpy as np

from app.schemas.game import Partition, TUGame
from app.services.canonical_solvers import core_lp
from app.services.game_model import canonical_partition, game_from_table
from app.services.lp_engine import solve_lp
from app.utils.bitmask import popcounts


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _from_dividends(n: int, dividends: np.ndarray) -> TUGame:
    """v(S) = sum of dividends of the subsets of S (zeta transform over the subset lattice)."""
    values = dividends.astype(float).copy()
    values[0] = 0.0
    for bit in range(n):
        step = 1 << bit
        view = values.reshape(-1, 2 * step)
        view[:, step:] += view[:, :step]
    return game_from_table(n, values.tolist())


def uniform_game(n: int, seed: int) -> TUGame:
    """Every nonempty coalition worth an independent U[0, 1] draw."""
    values = _rng(seed).uniform(0.0, 1.0, size=1 << n)
    values[0] = 0.0
    return game_from_table(n, values.tolist())


def superadditive_closure(game: TUGame) -> TUGame:
    """
    Replace v(S) by the best total any partition of S achieves.

    Args:
        game: Any game

    Returns:
        The superadditive cover of ``game``
    """
    best = list(game.values)
    for mask in range(1, 1 << game.players):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        # every split keeps the lowest member on the left so each pair is seen once
        while sub:
            left = low | (rest & ~sub)
            if left != mask:
                best[mask] = max(best[mask], best[left] + best[mask ^ left])
            sub = (sub - 1) & rest
    return game_from_table(game.players, best)


def superadditive_game(n: int, seed: int) -> TUGame:
    return superadditive_closure(uniform_game(n, seed))


def convex_game(n: int, seed: int) -> TUGame:
    """Nonnegative dividends on coalitions of size two or more give a supermodular game."""
    rng = _rng(seed)
    sizes = popcounts(n)
    dividends = np.where(sizes >= 2, rng.uniform(0.0, 1.0, size=1 << n), 0.0)
    dividends[sizes == 1] = rng.uniform(0.0, 1.0, size=n)
    return _from_dividends(n, dividends)


def strictly_superadditive_game(n: int, seed: int) -> TUGame:
    """Strictly positive dividends on every pair and above."""
    rng = _rng(seed)
    sizes = popcounts(n)
    dividends = np.where(sizes >= 2, rng.uniform(0.1, 1.0, size=1 << n), 0.0)
    dividends[sizes == 1] = rng.uniform(0.0, 1.0, size=n)
    return _from_dividends(n, dividends)


def nonempty_core_game(n: int, seed: int) -> TUGame:
    """
    Uniform game whose grand coalition is raised to make the core nonempty.

    v(N) becomes the covering-LP optimum over proper coalitions plus a random margin.
    """
    rng = _rng(seed)
    values = rng.uniform(0.0, 1.0, size=1 << n)
    values[0] = 0.0
    values[-1] = 0.0
    game = game_from_table(n, values.tolist())
    optimum = solve_lp(core_lp(game)).objective_value
    values[-1] = max(0.0, optimum) + rng.uniform(0.0, 0.5)
    return game_from_table(n, values.tolist())


def random_partition(n: int, seed: int) -> Partition:
    """Assign each player a uniformly random block label."""
    labels = _rng(seed).integers(0, n, size=n)
    blocks: dict[int, int] = {}
    for player, label in enumerate(labels):
        blocks[int(label)] = blocks.get(int(label), 0) | (1 << player)
    return canonical_partition(blocks.values(), n)


def random_layout(relays: int, seed: int, side: float = 1000.0) -> list[tuple[float, float]]:
    """Relay coordinates drawn uniformly in a square of ``side`` meters centred on the origin."""
    points = _rng(seed).uniform(-side / 2, side / 2, size=(relays, 2))
    return [(float(x), float(y)) for x, y in points]

