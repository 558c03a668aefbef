"""
Relay network formation by prioritised myopic best response.

Each relay picks one parent: the base station or another relay. A relay's utility is

    T_total * PSR(path to BS) + child_reward * relayed traffic - link_cost * (1 + children)

with per-hop success exp(-(d / hop_scale)^2 * decay).
"""
import logging
import math
from typing import Optional, Sequence

from app.config import scaled_tolerance, settings
from app.exceptions import CycleDetectedError, GameValidationError
from app.schemas.graph import BASE_STATION, FormationOutcome, NetformParams, NetworkState, Point

logger = logging.getLogger(__name__)


def hop_success(a: Point, b: Point, params: NetformParams) -> float:
    """Probability that a packet crosses the hop from ``a`` to ``b``."""
    distance = math.dist(a, b)
    return math.exp(-((distance / params.hop_scale) ** 2) * params.decay)


def path_to_base(state: NetworkState, relay: int) -> list[int]:
    """
    Relays on the uplink path of ``relay``, itself first.

    Raises:
        CycleDetectedError: The parent pointers loop before reaching the base station
    """
    path = [relay]
    seen = {relay}
    node = state.parent[relay]
    while node != BASE_STATION:
        if node in seen:
            raise CycleDetectedError(f"relay {relay} never reaches the base station")
        seen.add(node)
        path.append(node)
        node = state.parent[node]
    return path


def check_forest(state: NetworkState) -> None:
    """Raise CycleDetectedError unless every relay reaches the base station."""
    for relay in range(state.relays):
        path_to_base(state, relay)


def path_success(state: NetworkState, params: NetformParams, relay: int) -> float:
    """Product of the hop successes from ``relay`` to the base station."""
    path = path_to_base(state, relay)
    success = 1.0
    for node in path:
        upstream = state.parent[node]
        target = state.bs_position if upstream == BASE_STATION else state.positions[upstream]
        success *= hop_success(state.positions[node], target, params)
    return success


def subtree_traffic(state: NetworkState) -> list[float]:
    """Own traffic plus the traffic of every descendant, per relay."""
    totals = [0.0] * state.relays
    for relay in range(state.relays):
        for node in path_to_base(state, relay):
            totals[node] += state.traffic[relay]
    return totals


def relay_utility(state: NetworkState, params: NetformParams, relay: int) -> float:
    """
    Utility of ``relay`` in ``state``.

    Args:
        state: Relay forest
        params: Utility constants
        relay: Relay index

    Returns:
        Throughput reward plus relaying reward minus link costs

    Raises:
        CycleDetectedError: The parent pointers contain a cycle
    """
    check_forest(state)
    totals = subtree_traffic(state)
    relayed = totals[relay] - state.traffic[relay]
    links = 1 + len(state.children(relay))
    return (
        totals[relay] * path_success(state, params, relay)
        + params.child_reward * relayed
        - params.link_cost * links
    )


class NetworkFormation:
    """Feasible moves and best responses of single relays."""

    def __init__(self, params: NetformParams):
        self.params = params

    def _descendants(self, state: NetworkState, relay: int) -> set[int]:
        return {k for k in range(state.relays) if relay in path_to_base(state, k)[1:]}

    def _attach(self, state: NetworkState, relay: int, target: int) -> Optional[NetworkState]:
        """
        State after ``relay`` asks ``target`` to become its parent, or None when refused.

        A full target accepts only by evicting its lowest-traffic child to the base station,
        and only when that strictly raises its own utility.
        """
        moved = state.with_parent(relay, target)
        if target == BASE_STATION:
            return moved
        children = [k for k in state.children(target) if k != relay]
        if len(children) < self.params.max_links:
            return moved
        totals = subtree_traffic(state)
        worst = min(children, key=lambda k: (totals[k], k))
        replaced = moved.with_parent(worst, BASE_STATION)
        before = relay_utility(state, self.params, target)
        after = relay_utility(replaced, self.params, target)
        if after > before + scaled_tolerance(before, after):
            return replaced
        return None

    def feasible_moves(self, state: NetworkState, relay: int) -> list[tuple[int, NetworkState]]:
        """Every parent change ``relay`` may make, with the state it leads to."""
        blocked = self._descendants(state, relay) | {relay, state.parent[relay]}
        moves = []
        for target in [BASE_STATION, *range(state.relays)]:
            if target in blocked:
                continue
            outcome = self._attach(state, relay, target)
            if outcome is not None:
                check_forest(outcome)
                moves.append((target, outcome))
        return moves

    def best_response(self, state: NetworkState, relay: int) -> Optional[NetworkState]:
        """The strictly improving move with the highest utility, None when staying is best."""
        best_utility = relay_utility(state, self.params, relay)
        best: Optional[NetworkState] = None
        for _, outcome in self.feasible_moves(state, relay):
            utility = relay_utility(outcome, self.params, relay)
            if utility > best_utility + scaled_tolerance(best_utility, utility):
                best_utility, best = utility, outcome
        return best


def run_network_formation(
    positions: Sequence[Point],
    traffic: Sequence[float],
    params: NetformParams,
    seed: int = 0,
    bs_position: Point = (0.0, 0.0),
) -> FormationOutcome:
    """
    Let relays play best responses in priority order until a round changes nothing.

    Args:
        positions: Relay coordinates in meters
        traffic: Packets per frame per relay
        params: Utility constants
        seed: Kept for reproducible batch runs; the dynamics are deterministic
        bs_position: Base station coordinates

    Returns:
        FormationOutcome; ``converged`` is False when the round bound was hit
    """
    if len(set(map(tuple, positions))) != len(positions):
        raise GameValidationError("relay positions must be distinct")
    state = NetworkState(
        positions=tuple(tuple(p) for p in positions),
        bs_position=bs_position,
        parent=(BASE_STATION,) * len(positions),
        traffic=tuple(traffic),
    )
    engine = NetworkFormation(params)
    priority = sorted(range(state.relays), key=lambda k: (-math.dist(state.positions[k], bs_position), k))
    limit = settings.NETFORM_ROUND_FACTOR * state.relays
    logger.debug(f"network formation with {state.relays} relay(s), seed {seed}, priority {priority}")

    for rounds in range(1, limit + 1):
        changed = False
        for relay in priority:
            move = engine.best_response(state, relay)
            if move is not None:
                logger.debug(f"round {rounds}: relay {relay} moves to parent {move.parent[relay]}")
                state = move
                changed = True
        if not changed:
            logger.info(f"network formation converged after {rounds} round(s)")
            return FormationOutcome(state=state, rounds=rounds, converged=True)

    logger.warning(f"network formation stopped after {limit} rounds without converging")
    return FormationOutcome(state=state, rounds=limit, converged=False)


def nash_network_check(state: NetworkState, params: NetformParams) -> bool:
    """True when no relay has a strictly improving unilateral parent change."""
    check_forest(state)
    engine = NetworkFormation(params)
    return all(engine.best_response(state, relay) is None for relay in range(state.relays))
