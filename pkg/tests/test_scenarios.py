"""Tests for the worked-example and wireless value generators."""
import math

import pytest
from pydantic import ValidationError

from app.exceptions import EstateExceedsClaimsError, PlayerLimitError
from app.schemas.scenario import BankruptcyParams, CssParams, MacParams, MimoParams
from app.services.canonical_solvers import check_superadditive
from app.services.formation_engine import optimal_partition
from app.services.random_games import random_layout
from app.services.scenarios import (
    bankruptcy_game,
    css_sensing_game,
    gaussian_mac_game,
    majority_voting_game,
    virtual_mimo_game,
)
from app.utils.bitmask import size

SENSING = CssParams(miss=(0.3,) * 4, false_alarm=(0.05,) * 4, alpha=0.1, beta=1.0)


def is_monotone(game) -> bool:
    """v(S) <= v(S + i) for every coalition and every outsider i."""
    for s in range(1 << game.players):
        for i in range(game.players):
            if not s >> i & 1 and game.values[s] > game.values[s | 1 << i] + 1e-12:
                return False
    return True


def test_majority_voting_game():
    game = majority_voting_game()
    assert game.values == (0.0, 0.0, 0.0, 2.0 / 3.0, 0.0, 2.0 / 3.0, 2.0 / 3.0, 1.0)


def test_majority_voting_game_is_three_players_only():
    with pytest.raises(PlayerLimitError):
        majority_voting_game(4)


@pytest.mark.parametrize(
    "estate,grand_pair",
    [(100.0, 0.0), (200.0, 100.0), (300.0, 200.0)],
)
def test_talmud_games(estate, grand_pair):
    """{1,2} gets what is left after player 0's claim of 100."""
    game = bankruptcy_game(BankruptcyParams(claims=(100.0, 200.0, 300.0), estate=estate))
    assert game.grand_value == estate
    assert game.value(0b110) == grand_pair
    assert game.value(0b001) == 0.0


def test_bankruptcy_estate_above_claims():
    with pytest.raises(EstateExceedsClaimsError):
        bankruptcy_game(BankruptcyParams(claims=(1.0, 2.0), estate=4.0))


def test_bankruptcy_rejects_bad_claims():
    with pytest.raises(ValidationError):
        BankruptcyParams(claims=(1.0, -2.0), estate=1.0)


@pytest.mark.parametrize("estate", [0.0, 50.0, 150.0, 320.0, 600.0])
def test_bankruptcy_monotone_and_superadditive(estate):
    game = bankruptcy_game(BankruptcyParams(claims=(100.0, 200.0, 300.0, 20.0), estate=estate))
    assert is_monotone(game)
    assert check_superadditive(game).holds


def test_mac_two_users():
    """Unit powers over unit noise; a lone user is jammed by the other."""
    game = gaussian_mac_game(MacParams(powers=(1.0, 1.0), noise=1.0))
    assert game.grand_value == pytest.approx(math.log2(3))
    assert game.value(0b01) == pytest.approx(math.log2(1.5))


@pytest.mark.parametrize("powers", [(1.0, 2.0, 3.0), (0.1, 5.0, 0.5, 2.0), (1.0,) * 5])
def test_mac_is_superadditive(powers):
    assert check_superadditive(gaussian_mac_game(MacParams(powers=powers))).holds


def test_mimo_singleton_needs_no_exchange():
    game = virtual_mimo_game(MimoParams(positions=((0.0, 0.0),), budget=3.0))
    assert game.grand_value == pytest.approx(2.0)


def test_mimo_colocated_pair_multiplexes():
    params = MimoParams(positions=((5.0, 5.0), (5.0, 5.0)), budget=3.0, rx_antennas=2)
    assert virtual_mimo_game(params).grand_value == pytest.approx(2 * math.log2(4.0))


def test_mimo_exchange_cost_reaching_budget_is_worthless():
    """Two users 2 km apart pay 4 W each to reach the other."""
    params = MimoParams(positions=((0.0, 0.0), (2000.0, 0.0)), budget=8.0, rx_antennas=2)
    game = virtual_mimo_game(params)
    assert game.grand_value == 0.0
    assert game.value(0b01) == pytest.approx(math.log2(9.0))


@pytest.mark.parametrize("seed", range(10))
def test_mimo_grand_coalition_seldom_forms(seed):
    """Once any pair cannot afford its exchange, splitting beats the grand coalition."""
    n = 3 + seed % 4
    params = MimoParams(positions=tuple(random_layout(n, seed, side=4000.0)), budget=1.0)
    game = virtual_mimo_game(params)
    best, welfare = optimal_partition(game)

    pair_too_costly = any(
        params.exchange_scale * math.dist(a, b) ** 2 * 2 >= params.budget
        for i, a in enumerate(params.positions)
        for b in params.positions[i + 1:]
    )
    if pair_too_costly:
        assert best.blocks != (game.grand,)
        assert welfare > game.grand_value


def test_sensing_values():
    game = css_sensing_game(SENSING)
    assert game.value(0b0001) == pytest.approx(0.45)
    assert game.value(0b0011) == pytest.approx(-0.040625)
    for mask in range(1 << 4):
        if size(mask) >= 3:
            assert game.value(mask) == 0.0


def test_sensing_probabilities_move_with_coalition_size():
    """More members miss less often but raise more false alarms."""
    q_miss = [0.3 ** k for k in range(1, 5)]
    game = css_sensing_game(SENSING.model_copy(update={"beta": 0.0, "alpha": 0.5}))
    # without a false-alarm cost every feasible coalition is worth 1 - Q_m
    assert [game.value((1 << k) - 1) for k in range(1, 5)] == pytest.approx([1 - q for q in q_miss])


@pytest.mark.parametrize("bad", [{"miss": (0.0,)}, {"false_alarm": (1.0,)}, {"miss": (0.3, 0.3)}])
def test_sensing_params_are_validated(bad):
    fields = {"miss": (0.3,), "false_alarm": (0.05,), "alpha": 0.1} | bad
    with pytest.raises(ValidationError):
        CssParams(**fields)
