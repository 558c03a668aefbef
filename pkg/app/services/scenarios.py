"""Value-function generators for the worked examples and the wireless applications."""
import logging
import math

import numpy as np

from app.config import settings
from app.exceptions import EstateExceedsClaimsError, PlayerLimitError
from app.schemas.game import TUGame
from app.schemas.scenario import BankruptcyParams, CssParams, MacParams, MimoParams
from app.services.game_model import game_from_table
from app.utils.bitmask import membership_matrix, popcounts

logger = logging.getLogger(__name__)


def _check_size(n: int, limit: int, scenario: str) -> None:
    if n > limit:
        raise PlayerLimitError(f"{scenario} supports at most {limit} players, got {n}")


def _finish(n: int, values: np.ndarray) -> TUGame:
    values = values.astype(float)
    values[0] = 0.0
    return game_from_table(n, values.tolist())


def majority_voting_game(n: int = 3) -> TUGame:
    """
    Three voters, any two of which carry two thirds of the voting power.

    Raises:
        PlayerLimitError: n is not 3
    """
    if n != 3:
        raise PlayerLimitError(f"the majority voting game is defined for 3 players, got {n}")
    two_thirds = 2.0 / 3.0
    return game_from_table(3, [0.0, 0.0, 0.0, two_thirds, 0.0, two_thirds, two_thirds, 1.0])


def bankruptcy_game(params: BankruptcyParams) -> TUGame:
    """
    v(S) = max(0, estate - claims of the players outside S).

    Raises:
        EstateExceedsClaimsError: The estate is larger than the total claims
    """
    claims = np.asarray(params.claims, dtype=float)
    n = len(claims)
    _check_size(n, settings.EXACT_MAX_PLAYERS, "bankruptcy game")
    if params.estate > math.fsum(claims):
        raise EstateExceedsClaimsError(
            f"estate {params.estate} exceeds the total claims {math.fsum(claims)}"
        )
    outside = (~membership_matrix(n)).astype(float) @ claims
    return _finish(n, np.maximum(0.0, params.estate - outside))


def gaussian_mac_game(params: MacParams) -> TUGame:
    """
    Sum-rate of each coalition when every outsider jams it, in bits/s/Hz.

    v(S) = log2(1 + P_S / (noise + P_outside))
    """
    powers = np.asarray(params.powers, dtype=float)
    n = len(powers)
    _check_size(n, settings.EXACT_MAX_PLAYERS, "MAC game")
    inside = membership_matrix(n).astype(float) @ powers
    outside = powers.sum() - inside
    return _finish(n, np.log2(1.0 + inside / (params.noise + outside)))


def virtual_mimo_game(params: MimoParams) -> TUGame:
    """
    Multiplexing rate left after the intra-coalition data exchange.

    Every member sends its data to the farthest other member at cost
    exchange_scale * distance^exchange_exponent. A coalition whose exchange cost reaches the
    slot budget is worth nothing; otherwise it is worth
    min(|S|, rx_antennas) * log2(1 + (budget - cost) / noise).
    """
    points = np.asarray(params.positions, dtype=float)
    n = len(points)
    _check_size(n, settings.FORMATION_MAX_PLAYERS, "virtual MIMO game")
    distances = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    reach = params.exchange_scale * distances ** params.exchange_exponent
    matrix = membership_matrix(n)
    sizes = popcounts(n)
    values = np.zeros(1 << n)
    for mask in range(1, 1 << n):
        inside = matrix[mask]
        cost = reach[np.ix_(inside, inside)].max(axis=1).sum()
        if cost < params.budget:
            values[mask] = min(sizes[mask], params.rx_antennas) * math.log2(
                1.0 + (params.budget - cost) / params.noise
            )
    return _finish(n, values)


def css_sensing_game(params: CssParams) -> TUGame:
    """
    Detection quality of each coalition of secondary users under OR fusion.

    Q_m(S) is the product of the members' miss probabilities and Q_f(S) is
    1 - prod(1 - P_f). A coalition with Q_f(S) above alpha is worth 0, otherwise
    (1 - Q_m) - beta * (Q_f / alpha)^2. Each member is paid v(S) itself, so formation over
    this game uses the Pareto order with the identity payoff rule.
    """
    miss = np.asarray(params.miss, dtype=float)
    false_alarm = np.asarray(params.false_alarm, dtype=float)
    n = len(miss)
    _check_size(n, settings.FORMATION_MAX_PLAYERS, "sensing game")
    matrix = membership_matrix(n)
    q_miss = np.prod(np.where(matrix, miss, 1.0), axis=1)
    q_false = 1.0 - np.prod(np.where(matrix, 1.0 - false_alarm, 1.0), axis=1)
    feasible = q_false <= params.alpha + settings.TOLERANCE
    values = np.where(feasible, (1.0 - q_miss) - params.beta * (q_false / params.alpha) ** 2, 0.0)
    logger.debug(f"{int(feasible[1:].sum())} of {(1 << n) - 1} coalitions meet the false-alarm bound")
    return _finish(n, values)
