"""Tests for restricted games and values under a coalition structure."""
import pytest

from app.exceptions import EmptyBlockError
from app.schemas.game import Allocation
from app.services.canonical_solvers import shapley_exact
from app.services.coalition_structure import aumann_dreze_value, relative_efficiency_check, restrict
from app.services.game_model import game_from_table, grand_partition, partition_from_lists, singletons
from app.services.random_games import random_partition, uniform_game
from app.services.scenarios import majority_voting_game

THIRD = 1.0 / 3.0


def test_restrict_to_pair():
    """Restricting the majority game to {0,1} leaves a two-player game worth 2/3."""
    restricted = restrict(majority_voting_game(), 0b011)

    assert restricted.members == (0, 1)
    assert restricted.game.values == (0.0, 0.0, 0.0, 2.0 / 3.0)


def test_restrict_to_everyone_and_to_one():
    game = majority_voting_game()
    assert restrict(game, game.grand).game.values == game.values
    assert restrict(game, 0b100).game.values == (0.0, 0.0)


def test_restrict_non_contiguous_block():
    """Dense bit k stands for the k-th member of the block."""
    game = uniform_game(4, seed=5)
    restricted = restrict(game, 0b1010)
    assert restricted.game.values[0b01] == game.values[0b0010]
    assert restricted.game.values[0b10] == game.values[0b1000]
    assert restricted.game.values[0b11] == game.values[0b1010]


def test_restrict_empty_block():
    with pytest.raises(EmptyBlockError):
        restrict(majority_voting_game(), 0)


def test_aumann_dreze_value():
    game = majority_voting_game()

    split = aumann_dreze_value(game, partition_from_lists([[0, 1], [2]], 3))
    assert split.payoffs == pytest.approx([THIRD, THIRD, 0.0])

    assert aumann_dreze_value(game, grand_partition(3)).payoffs == pytest.approx(shapley_exact(game).payoffs)
    assert aumann_dreze_value(game, singletons(3)).payoffs == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("seed", range(10))
def test_aumann_dreze_is_relatively_efficient(seed):
    game = uniform_game(5, seed)
    partition = random_partition(5, seed)
    assert relative_efficiency_check(game, partition, aumann_dreze_value(game, partition))


def test_relative_efficiency_check():
    game = majority_voting_game()
    partition = partition_from_lists([[0, 1], [2]], 3)

    assert relative_efficiency_check(game, partition, Allocation.of([THIRD, THIRD, 0.0]))
    assert not relative_efficiency_check(game, partition, Allocation.of([THIRD, THIRD, THIRD]))
    assert relative_efficiency_check(game, grand_partition(3), Allocation.of([0.2, 0.3, 0.5]))


@pytest.mark.parametrize("seed", range(10))
def test_aumann_dreze_ignores_coalitions_across_blocks(seed):
    """Only coalitions inside a block matter to the value."""
    game = uniform_game(5, seed)
    partition = random_partition(5, seed)
    other = uniform_game(5, seed + 500)
    inside = [
        any(mask & ~block == 0 for block in partition.blocks) for mask in range(1 << 5)
    ]
    mixed = game_from_table(5, [v if keep else w for v, w, keep in zip(game.values, other.values, inside)])

    assert aumann_dreze_value(mixed, partition).payoffs == pytest.approx(
        aumann_dreze_value(game, partition).payoffs, abs=1e-12
    )
