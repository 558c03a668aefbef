"""Coalition formation: partition enumeration, comparison orders and merge-and-split."""
import logging
import math
from typing import Dict, Iterator, Optional, Sequence

from app.config import scaled_tolerance, settings
from app.exceptions import FormationLimitError, PlayerLimitError, PlayerSetMismatchError
from app.schemas.game import Coalition, Partition, TUGame
from app.schemas.structure import (
    ComparisonOrder,
    FormationStep,
    FormationTrace,
    OrderKind,
    PayoffRule,
    StepKind,
)
from app.services.canonical_solvers import nucleolus, shapley_exact
from app.services.coalition_structure import restrict
from app.services.game_model import canonical_partition, is_imputation_set_nonempty, require_players
from app.utils.bitmask import members, size

logger = logging.getLogger(__name__)


def count_partitions(n: int) -> int:
    """
    Bell number by the Bell triangle.

    Args:
        n: Player count, 1..BELL_MAX_PLAYERS

    Returns:
        Number of partitions of n players

    Raises:
        PlayerLimitError: n out of range
    """
    if not 1 <= n <= settings.BELL_MAX_PLAYERS:
        raise PlayerLimitError(f"partition count supports 1..{settings.BELL_MAX_PLAYERS} players, got {n}")
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[-1]


def partitions_of(players: Sequence[int]) -> Iterator[list[Coalition]]:
    """
    Every partition of ``players`` as a list of masks.

    Partitions come in lexicographic order of their restricted growth strings, so the
    first one is the whole set and blocks appear in order of their lowest member.
    """
    blocks: list[Coalition] = []
    count = len(players)

    def place(index: int) -> Iterator[list[Coalition]]:
        if index == count:
            yield list(blocks)
            return
        bit = 1 << players[index]
        for k in range(len(blocks)):
            blocks[k] |= bit
            yield from place(index + 1)
            blocks[k] ^= bit
        blocks.append(bit)
        yield from place(index + 1)
        blocks.pop()

    yield from place(0)


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """
    Yield each partition of n players once, in canonical order.

    Args:
        n: Player count, at most FORMATION_MAX_PLAYERS

    Returns:
        Iterator of Partition, the grand coalition first

    Raises:
        PlayerLimitError: n out of range
    """
    if not 1 <= n <= settings.FORMATION_MAX_PLAYERS:
        raise PlayerLimitError(
            f"partition enumeration supports 1..{settings.FORMATION_MAX_PLAYERS} players, got {n}"
        )
    for blocks in partitions_of(range(n)):
        # blocks are built valid and canonical
        yield Partition.model_construct(players=n, blocks=tuple(blocks))


def social_welfare(game: TUGame, partition: Partition) -> float:
    """Total worth of the partition's blocks."""
    return math.fsum(game.value(b) for b in partition.blocks)


def optimal_partition(game: TUGame) -> tuple[Partition, float]:
    """
    Exhaustive utilitarian optimum.

    Args:
        game: The game

    Returns:
        (first welfare-maximising partition in canonical order, its welfare)
    """
    best, best_welfare = None, -math.inf
    for partition in enumerate_partitions(game.players):
        welfare = social_welfare(game, partition)
        if welfare > best_welfare + scaled_tolerance(best_welfare if best else 0.0):
            best, best_welfare = partition, welfare
    return best, best_welfare


class FormationEngine:
    """
    Merge-and-split dynamics for one game under one comparison order.

    Block payoffs are cached per coalition so repeated comparisons stay cheap.
    """

    def __init__(self, game: TUGame, order: ComparisonOrder):
        """
        Initialize formation engine.

        Args:
            game: The game
            order: Utilitarian or Pareto order with its payoff rule
        """
        self.game = game
        self.order = order
        self._payoffs: Dict[Coalition, Dict[int, float]] = {}

    def block_payoffs(self, block: Coalition) -> Dict[int, float]:
        """
        Share of every member of ``block`` under the order's payoff rule.

        Args:
            block: Coalition

        Returns:
            Mapping of player to payoff
        """
        cached = self._payoffs.get(block)
        if cached is not None:
            return cached
        players = members(block)
        worth = self.game.value(block)
        rule = self.order.payoff_rule
        shares: list[float]
        if rule is PayoffRule.IDENTITY:
            shares = [worth] * len(players)
        elif rule is PayoffRule.PROPORTIONAL:
            alone = [self.game.value(1 << p) for p in players]
            if all(a > 0 for a in alone):
                shares = [worth * a / math.fsum(alone) for a in alone]
            else:
                shares = [worth / len(players)] * len(players)
        elif rule is PayoffRule.SHAPLEY:
            shares = list(shapley_exact(restrict(self.game, block).game).payoffs)
        elif rule is PayoffRule.NUCLEOLUS:
            local = restrict(self.game, block).game
            if is_imputation_set_nonempty(local):
                shares = list(nucleolus(local).payoffs)
            else:
                logger.warning(f"coalition {players} has no imputation, sharing its worth equally")
                shares = [worth / len(players)] * len(players)
        else:
            shares = [worth / len(players)] * len(players)
        result = dict(zip(players, shares))
        self._payoffs[block] = result
        return result

    def prefers(self, r: Sequence[Coalition], s: Sequence[Coalition]) -> bool:
        """
        Strict preference of collection ``r`` over ``s``.

        Args:
            r: Coalitions of the proposed collection
            s: Coalitions of the current collection

        Returns:
            True when ``r`` is strictly better under the order

        Raises:
            PlayerSetMismatchError: The collections cover different players
        """
        union_r, union_s = 0, 0
        for c in r:
            union_r |= c
        for c in s:
            union_s |= c
        if union_r != union_s:
            raise PlayerSetMismatchError(f"collections cover {members(union_r)} and {members(union_s)}")

        if self.order.kind is OrderKind.UTILITARIAN:
            welfare_r = math.fsum(self.game.value(c) for c in r)
            welfare_s = math.fsum(self.game.value(c) for c in s)
            return welfare_r > welfare_s + scaled_tolerance(welfare_r, welfare_s)

        x: Dict[int, float] = {}
        y: Dict[int, float] = {}
        for c in r:
            x.update(self.block_payoffs(c))
        for c in s:
            y.update(self.block_payoffs(c))
        improved = False
        for player, before in y.items():
            after = x[player]
            tol = scaled_tolerance(after, before)
            if after < before - tol:
                return False
            if after > before + tol:
                improved = True
        return improved

    def find_merge(self, blocks: Sequence[Coalition]) -> Optional[tuple[Coalition, Coalition]]:
        """First pair, in ascending mask order, whose union is preferred."""
        ordered = sorted(blocks)
        for k, first in enumerate(ordered):
            for second in ordered[k + 1:]:
                if self.prefers([first | second], [first, second]):
                    return first, second
        return None

    def find_split(self, blocks: Sequence[Coalition]) -> Optional[tuple[Coalition, list[Coalition]]]:
        """First block, in ascending mask order, with a preferred sub-partition."""
        for block in sorted(blocks):
            if size(block) < 2:
                continue
            for parts in partitions_of(members(block)):
                if len(parts) > 1 and self.prefers(parts, [block]):
                    return block, parts
        return None

    def run(self, initial: Partition) -> FormationTrace:
        """
        Apply merges, then a split, and repeat until neither applies.

        Args:
            initial: Starting partition

        Returns:
            FormationTrace with every accepted step and the final partition

        Raises:
            FormationLimitError: More steps than Bell(n) * 2^n
        """
        n = self.game.players
        require_players(self.game, settings.FORMATION_MAX_PLAYERS, "merge-and-split")
        limit = count_partitions(n) * (1 << n)
        blocks = list(initial.blocks)
        steps: list[FormationStep] = []
        while True:
            merge = self.find_merge(blocks)
            if merge is not None:
                first, second = merge
                blocks = [b for b in blocks if b not in merge] + [first | second]
                steps.append(FormationStep(operation=StepKind.MERGE, before=list(merge), after=[first | second]))
                logger.debug(f"merge {members(first)} + {members(second)}")
            else:
                split = self.find_split(blocks)
                if split is None:
                    break
                block, parts = split
                blocks = [b for b in blocks if b != block] + parts
                steps.append(FormationStep(operation=StepKind.SPLIT, before=[block], after=parts))
                logger.debug(f"split {members(block)} into {[members(p) for p in parts]}")
            if len(steps) > limit:
                raise FormationLimitError(f"merge-and-split did not settle within {limit} steps")
        final = canonical_partition(blocks, n)
        logger.info(f"merge-and-split settled after {len(steps)} step(s)")
        return FormationTrace(steps=steps, final=final)

    def is_stable(self, partition: Partition) -> bool:
        """No merge and no split is preferred."""
        blocks = list(partition.blocks)
        return self.find_merge(blocks) is None and self.find_split(blocks) is None


def prefers(order: ComparisonOrder, game: TUGame, r: Sequence[Coalition], s: Sequence[Coalition]) -> bool:
    """
    Strict preference of collection ``r`` over ``s`` under ``order``.

    Raises:
        PlayerSetMismatchError: The collections cover different players
    """
    return FormationEngine(game, order).prefers(r, s)


def run_merge_split(game: TUGame, order: ComparisonOrder, initial: Partition) -> FormationTrace:
    """Run merge-and-split from ``initial`` until no rule applies."""
    return FormationEngine(game, order).run(initial)


def dhp_stable(game: TUGame, partition: Partition, order: ComparisonOrder) -> bool:
    """True when no pairwise merge and no split of a block is preferred."""
    require_players(game, settings.FORMATION_MAX_PLAYERS, "stability check")
    return FormationEngine(game, order).is_stable(partition)


def dc_candidate(game: TUGame, order: ComparisonOrder) -> Optional[Partition]:
    """
    Partition reached by merge-and-split from every starting partition, if unique.

    Args:
        game: The game, at most DC_MAX_PLAYERS players
        order: Comparison order

    Returns:
        The common final partition, or None when two starts settle differently

    Raises:
        PlayerLimitError: Game too large for the exhaustive search
    """
    require_players(game, settings.DC_MAX_PLAYERS, "Dc-stability search")
    engine = FormationEngine(game, order)
    outcome: Optional[Partition] = None
    for start in enumerate_partitions(game.players):
        final = engine.run(start).final
        if outcome is None:
            outcome = final
        elif final.blocks != outcome.blocks:
            logger.info(f"starts settle at {final.as_lists()} and {outcome.as_lists()}")
            return None
    return outcome
