"""Seeded property suites for the canonical solvers."""
import numpy as np
import pytest

from app.services.canonical_solvers import (
    check_balanced,
    check_convex,
    check_superadditive,
    core_membership,
    core_nonempty,
    excess_vector,
    kernel_check,
    nucleolus,
    shapley_exact,
    shapley_sampled,
)
from app.schemas.game import Allocation
from app.services.game_model import game_from_table, is_efficient, is_imputation
from app.services.random_games import (
    convex_game,
    nonempty_core_game,
    superadditive_closure,
    uniform_game,
)
from app.services.scenarios import majority_voting_game


def swap_players(mask: int, i: int, j: int) -> int:
    """Exchange the membership bits of players i and j."""
    if (mask >> i & 1) != (mask >> j & 1):
        mask ^= (1 << i) | (1 << j)
    return mask


def symmetrized(game, i: int, j: int):
    """Average v(S) with v(S swapped) so that i and j become interchangeable."""
    values = [
        (game.values[s] + game.values[swap_players(s, i, j)]) / 2 for s in range(1 << game.players)
    ]
    return game_from_table(game.players, values)


def with_dummy(game, worth: float):
    """Add a last player who brings ``worth`` to every coalition."""
    n = game.players
    top = 1 << n
    values = list(game.values) + [game.values[s] + worth for s in range(top)]
    return game_from_table(n + 1, values)


def game_sum(first, second):
    return game_from_table(first.players, [a + b for a, b in zip(first.values, second.values)])


@pytest.mark.parametrize("seed", range(200))
def test_bondareva_shapley(seed):
    """Balancedness and core nonemptiness always agree, and a reported core point is a member."""
    n = 3 + seed % 3
    game = uniform_game(n, seed) if seed % 2 else nonempty_core_game(n, seed)
    balanced, _ = check_balanced(game)
    result = core_nonempty(game)
    assert balanced == result.nonempty
    if result.nonempty:
        assert core_membership(game, result.sample_point)


@pytest.mark.parametrize("seed", range(100))
def test_convex_games_contain_shapley_in_core(seed):
    """Convex games are balanced and their Shapley value is a core member."""
    game = convex_game(2 + seed % 5, seed)
    assert check_convex(game).holds
    assert check_balanced(game)[0]
    assert core_membership(game, shapley_exact(game))


@pytest.mark.parametrize("seed", range(100))
def test_nucleolus_in_core_and_kernel(seed):
    """With a nonempty core the nucleolus lies in the core and balances pairwise surpluses."""
    game = nonempty_core_game(2 + seed % 4, seed)
    x = nucleolus(game)
    assert is_imputation(game, x)
    assert core_membership(game, x)
    assert kernel_check(game, x)


@pytest.mark.parametrize("seed", range(100))
def test_shapley_axioms(seed):
    """Efficiency, symmetry, dummy and additivity."""
    n = 2 + seed % 7
    game = uniform_game(n, seed)
    phi = shapley_exact(game).as_array()
    assert phi.sum() == pytest.approx(game.grand_value, abs=1e-9)

    symmetric = shapley_exact(symmetrized(game, 0, n - 1)).payoffs
    assert symmetric[0] == pytest.approx(symmetric[n - 1], abs=1e-9)

    extended = shapley_exact(with_dummy(game, 0.25)).payoffs
    assert extended[-1] == pytest.approx(0.25, abs=1e-9)
    assert list(extended[:-1]) == pytest.approx(list(phi), abs=1e-9)

    other = uniform_game(n, seed + 1000)
    combined = shapley_exact(game_sum(game, other)).as_array()
    assert combined == pytest.approx(phi + shapley_exact(other).as_array(), abs=1e-9)


def test_sampling_converges():
    """10^5 sampled orders land within 0.01 of the exact value for nearly every seed."""
    game = majority_voting_game()
    exact = shapley_exact(game).as_array()
    close = 0
    for seed in range(10):
        estimate = shapley_sampled(game, 100000, seed).as_array()
        close += int(np.max(np.abs(estimate - exact)) < 0.01)
    assert close >= 9


@pytest.mark.parametrize("seed", range(20))
def test_superadditive_closure(seed):
    """The closure is superadditive and never lowers a value."""
    game = uniform_game(2 + seed % 4, seed)
    closed = superadditive_closure(game)
    assert check_superadditive(closed).holds
    assert all(c >= v for c, v in zip(closed.values, game.values))


@pytest.mark.parametrize("seed", range(30))
def test_core_is_where_no_excess_is_positive(seed):
    """x is in the core exactly when it is efficient and every excess is at most zero."""
    n = 3 + seed % 3
    game = nonempty_core_game(n, seed)
    rng = np.random.default_rng(seed)
    candidates = [nucleolus(game), Allocation.of(np.full(n, game.grand_value / n))]
    for _ in range(5):
        weights = rng.dirichlet(np.ones(n))
        candidates.append(Allocation.of(weights * game.grand_value))
    candidates.append(Allocation.of(candidates[0].as_array() + 0.01))

    for x in candidates:
        dual = is_efficient(game, x) and excess_vector(game, x).max_excess <= 1e-9
        assert core_membership(game, x) == dual
