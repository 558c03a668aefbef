"""Tests for partition enumeration and merge-and-split formation."""
import pytest

from app.exceptions import PlayerLimitError, PlayerSetMismatchError
from app.schemas.game import Partition
from app.schemas.scenario import CssParams
from app.schemas.structure import ComparisonOrder, PayoffRule, StepKind
from app.services.formation_engine import (
    FormationEngine,
    count_partitions,
    dc_candidate,
    dhp_stable,
    enumerate_partitions,
    optimal_partition,
    prefers,
    run_merge_split,
    social_welfare,
)
from app.services.game_model import (
    canonical_partition,
    game_from_table,
    grand_partition,
    partition_from_lists,
    singletons,
)
from app.services.random_games import random_partition, strictly_superadditive_game, uniform_game
from app.services.scenarios import css_sensing_game, majority_voting_game
from app.utils.bitmask import size

UTILITARIAN = ComparisonOrder.utilitarian()


def pair_game():
    """Stand-alone worth 1, pairs 4, 3 and 3, the grand coalition worthless."""
    return game_from_table(3, [0.0, 1.0, 1.0, 4.0, 1.0, 3.0, 3.0, 0.0])


def replay(initial: Partition, trace) -> list[Partition]:
    """Partitions visited by a trace, the initial one first."""
    blocks = list(initial.blocks)
    visited = [initial]
    for step in trace.steps:
        blocks = [b for b in blocks if b not in step.before] + list(step.after)
        visited.append(canonical_partition(blocks, initial.players))
    return visited


@pytest.mark.parametrize("n,expected", [(1, 1), (3, 5), (4, 15), (10, 115975), (15, 1382958545)])
def test_count_partitions(n, expected):
    assert count_partitions(n) == expected


@pytest.mark.parametrize("n", [0, 16])
def test_count_partitions_out_of_range(n):
    with pytest.raises(PlayerLimitError):
        count_partitions(n)


def test_enumerate_small():
    """Grand coalition first, singletons last, each partition once."""
    partitions = list(enumerate_partitions(3))

    assert len(partitions) == 5
    assert partitions[0].as_lists() == [[0, 1, 2]]
    assert partitions[-1].as_lists() == [[0], [1], [2]]
    assert len({p.blocks for p in partitions}) == 5
    assert [p.as_lists() for p in enumerate_partitions(1)] == [[[0]]]


def test_enumerate_ten_players():
    """Enumeration matches the Bell number."""
    assert sum(1 for _ in enumerate_partitions(10)) == count_partitions(10)


def test_enumerate_rejects_large_n():
    with pytest.raises(PlayerLimitError):
        next(enumerate_partitions(13))


def test_utilitarian_preference():
    game = majority_voting_game()
    assert prefers(UTILITARIAN, game, [0b111], [0b011, 0b100])
    assert not prefers(UTILITARIAN, game, [0b011, 0b100], [0b111])
    # equal welfare is not a strict improvement
    assert not prefers(UTILITARIAN, game, [0b011, 0b100], [0b011, 0b100])


def test_pareto_preference():
    """Equal split of the grand coalition helps player 2 and hurts nobody."""
    game = majority_voting_game()
    order = ComparisonOrder.pareto(PayoffRule.EQUAL)
    assert prefers(order, game, [0b111], [0b011, 0b100])
    assert not prefers(order, game, [0b011, 0b100], [0b111])


def test_preference_needs_same_players():
    with pytest.raises(PlayerSetMismatchError):
        prefers(UTILITARIAN, majority_voting_game(), [0b011], [0b111])


def test_block_payoff_rules():
    game = game_from_table(2, [0.0, 1.0, 3.0, 8.0])
    payoffs = {
        rule: FormationEngine(game, ComparisonOrder.pareto(rule)).block_payoffs(0b11)
        for rule in PayoffRule
    }
    assert payoffs[PayoffRule.EQUAL] == {0: 4.0, 1: 4.0}
    assert payoffs[PayoffRule.PROPORTIONAL] == pytest.approx({0: 2.0, 1: 6.0})
    assert payoffs[PayoffRule.SHAPLEY] == pytest.approx({0: 3.0, 1: 5.0})
    assert payoffs[PayoffRule.NUCLEOLUS] == pytest.approx({0: 3.0, 1: 5.0}, abs=1e-9)
    assert payoffs[PayoffRule.IDENTITY] == {0: 8.0, 1: 8.0}


def test_nucleolus_rule_falls_back_to_equal_split():
    """A block without imputations shares its worth equally."""
    game = game_from_table(2, [0.0, 1.0, 1.0, 1.5])
    engine = FormationEngine(game, ComparisonOrder.pareto(PayoffRule.NUCLEOLUS))
    assert engine.block_payoffs(0b11) == {0: 0.75, 1: 0.75}


def test_merge_split_on_majority_game():
    """Singletons merge into the grand coalition."""
    game = majority_voting_game()
    trace = run_merge_split(game, UTILITARIAN, singletons(3))

    assert trace.final.as_lists() == [[0, 1, 2]]
    assert all(step.operation is StepKind.MERGE for step in trace.steps)
    assert dhp_stable(game, trace.final, UTILITARIAN)
    assert not dhp_stable(game, singletons(3), UTILITARIAN)


def test_merge_split_splits_bad_coalitions():
    """A grand coalition worth less than its parts splits."""
    game = game_from_table(3, [0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0])
    trace = run_merge_split(game, UTILITARIAN, grand_partition(3))

    assert trace.steps[0].operation is StepKind.SPLIT
    assert trace.final.as_lists() == [[0], [1], [2]]


@pytest.mark.parametrize("seed", range(100))
def test_merge_split_soundness(seed):
    """Terminates stable, with welfare strictly rising at every step."""
    n = 2 + seed % 5
    game = uniform_game(n, seed)
    initial = random_partition(n, seed)
    trace = run_merge_split(game, UTILITARIAN, initial)

    assert dhp_stable(game, trace.final, UTILITARIAN)
    welfare = [social_welfare(game, p) for p in replay(initial, trace)]
    assert all(later > earlier for earlier, later in zip(welfare, welfare[1:]))


@pytest.mark.parametrize("seed", range(10))
def test_pareto_merge_split_is_stable(seed):
    n = 2 + seed % 4
    game = uniform_game(n, seed)
    order = ComparisonOrder.pareto(PayoffRule.SHAPLEY)
    trace = run_merge_split(game, order, singletons(n))
    assert dhp_stable(game, trace.final, order)


@pytest.mark.parametrize("seed", range(20))
def test_dc_candidate_for_strictly_superadditive_games(seed):
    """Every start settles at the grand coalition, which maximises welfare."""
    n = 2 + seed % 5
    game = strictly_superadditive_game(n, seed)
    candidate = dc_candidate(game, UTILITARIAN)

    assert candidate is not None
    assert candidate.blocks == (game.grand,)
    best, welfare = optimal_partition(game)
    assert best.blocks == (game.grand,)
    assert social_welfare(game, candidate) == pytest.approx(welfare)


def test_dc_candidate_rejects_large_games():
    with pytest.raises(PlayerLimitError):
        dc_candidate(uniform_game(9, seed=0), UTILITARIAN)


def test_merge_split_on_pair_game():
    """Players 0 and 1 pair up and player 2 stays alone."""
    game = pair_game()
    trace = run_merge_split(game, UTILITARIAN, singletons(3))

    assert trace.final.as_lists() == [[0, 1], [2]]
    assert social_welfare(game, trace.final) == 5.0
    assert dhp_stable(game, partition_from_lists([[0, 1], [2]], 3), UTILITARIAN)


def test_pair_game_has_no_common_outcome():
    """Starting from {0,2},{1} gets stuck at welfare 4, so no partition is reached from every start."""
    game = pair_game()
    stuck = partition_from_lists([[0, 2], [1]], 3)

    assert run_merge_split(game, UTILITARIAN, stuck).final == stuck
    assert dhp_stable(game, stuck, UTILITARIAN)
    assert dc_candidate(game, UTILITARIAN) is None


@pytest.mark.parametrize("seed", range(5))
def test_worthless_game_never_moves(seed):
    """With v identically zero no operation improves anything."""
    n = 2 + seed % 3
    game = game_from_table(n, [0.0] * (1 << n))
    initial = random_partition(n, seed)
    trace = run_merge_split(game, UTILITARIAN, initial)

    assert trace.steps == []
    assert trace.final == initial
    assert dc_candidate(game, UTILITARIAN) is None


def test_optimal_partition():
    partition, welfare = optimal_partition(majority_voting_game())
    assert partition.as_lists() == [[0, 1, 2]]
    assert welfare == 1.0


def test_sensing_coalitions_stay_small():
    """The false-alarm bound makes triples worthless, so only pairs form."""
    params = CssParams(miss=(0.3,) * 4, false_alarm=(0.05,) * 4, alpha=0.1, beta=0.1)
    game = css_sensing_game(params)
    order = ComparisonOrder.pareto(PayoffRule.IDENTITY)
    trace = run_merge_split(game, order, singletons(4))

    assert all(size(block) <= 2 for block in trace.final.blocks)
    assert trace.final.as_lists() == [[0, 1], [2, 3]]
