"""Tests for the canonical solution concepts on the worked examples."""
import pytest

from app.exceptions import EmptyImputationSetError, NotAnImputationError, NotSimpleGameError
from app.schemas.game import Allocation
from app.schemas.scenario import BankruptcyParams
from app.services.canonical_solvers import (
    NucleolusSolver,
    balancedness_report,
    check_balanced,
    check_convex,
    check_superadditive,
    core_membership,
    core_nonempty,
    excess_vector,
    fair_allocations_in_core,
    kernel_check,
    least_core,
    nucleolus,
    shapley_exact,
    shapley_sampled,
    simple_game_core,
    veto_players,
)
from app.services.game_model import additive_game, game_from_function, game_from_table
from app.services.scenarios import bankruptcy_game, majority_voting_game
from app.utils.bitmask import members

THIRD = 1.0 / 3.0


def talmud(estate: float):
    return bankruptcy_game(BankruptcyParams(claims=(100.0, 200.0, 300.0), estate=estate))


def pairs_worth(value: float):
    """Three players, every pair worth ``value``, the grand coalition worth 1."""
    return game_from_table(3, [0.0, 0.0, 0.0, value, 0.0, value, value, 1.0])


def simple_game(winning):
    return game_from_table(3, [1.0 if mask in winning else 0.0 for mask in range(8)])


def test_superadditivity():
    assert check_superadditive(majority_voting_game()).holds
    assert check_superadditive(additive_game([1.0, -2.0, 3.5])).holds

    report = check_superadditive(game_from_table(2, [0.0, 1.0, 1.0, 1.0]))
    assert not report.holds
    assert report.witness == (0b01, 0b10)


def test_convexity():
    assert check_convex(game_from_function(3, lambda s: len(members(s)) ** 2)).holds
    assert check_convex(additive_game([1.0, 2.0, 3.0])).holds

    report = check_convex(majority_voting_game())
    assert not report.holds
    assert report.witness == (0b011, 0b101)


def test_core_membership():
    game = majority_voting_game()
    assert core_membership(game, Allocation.of([THIRD, THIRD, THIRD]))
    assert not core_membership(game, Allocation.of([0.5, 0.5, 0.0]))

    weights = [1.0, 2.0, 4.0]
    assert core_membership(additive_game(weights), Allocation.of(weights))


def test_core_nonempty_majority():
    """The majority game's core is the single point (1/3, 1/3, 1/3)."""
    result = core_nonempty(majority_voting_game())

    assert result.nonempty
    assert result.sample_point.payoffs == pytest.approx([THIRD] * 3, abs=1e-6)
    assert result.lp_iterations > 0


def test_core_empty_when_pairs_too_strong():
    result = core_nonempty(pairs_worth(0.8))
    assert not result.nonempty
    assert result.sample_point is None


def test_core_of_additive_game():
    result = core_nonempty(additive_game([1.0, 2.0, 4.0]))
    assert result.nonempty
    assert result.sample_point.payoffs == pytest.approx([1.0, 2.0, 4.0])


def test_core_empty_just_beyond_tolerance():
    """Pairs worth slightly more than two thirds leave no core point, however small the gap."""
    game = pairs_worth(2.0 / 3.0 + 3e-8)
    result = core_nonempty(game)

    assert not result.nonempty
    assert result.sample_point is None
    balanced, certificate = check_balanced(game)
    assert not balanced
    assert certificate is not None


def test_balancedness():
    balanced, certificate = check_balanced(majority_voting_game())
    assert balanced and certificate is None

    balanced, certificate = check_balanced(pairs_worth(0.8))
    assert not balanced
    assert certificate.weights == pytest.approx({0b011: 0.5, 0b101: 0.5, 0b110: 0.5})
    assert certificate.player_totals(3) == pytest.approx([1.0, 1.0, 1.0])

    assert check_balanced(additive_game([3.0, 1.0]))[0]


def test_balancedness_report_counts_pivots():
    report = balancedness_report(majority_voting_game())
    assert report.balanced and report.certificate is None
    assert report.lp_iterations > 0


def test_veto_players():
    assert veto_players(simple_game({0b011, 0b101, 0b111})) == {0}
    assert veto_players(simple_game({0b011, 0b111})) == {0, 1}
    with pytest.raises(NotSimpleGameError):
        veto_players(majority_voting_game())


def test_simple_game_core():
    """Veto players take everything; without veto players the core is empty."""
    core = simple_game_core(simple_game({0b011, 0b101, 0b111}))
    assert core.nonempty
    assert core.sample_point.payoffs == (1.0, 0.0, 0.0)
    assert core.zero_players == [1, 2]

    unanimity = simple_game_core(simple_game({0b011, 0b111}))
    assert unanimity.veto_players == [0, 1]
    assert unanimity.sample_point.payoffs == (1.0, 0.0, 0.0)

    assert not simple_game_core(simple_game({0b011, 0b101, 0b110, 0b111})).nonempty


def test_shapley_exact():
    assert shapley_exact(majority_voting_game()).payoffs == pytest.approx([THIRD] * 3)
    assert shapley_exact(additive_game([1.0, 2.0, 4.0])).payoffs == pytest.approx([1.0, 2.0, 4.0])


def test_shapley_sampled():
    """Estimates are close, reproducible and exact on additive games."""
    game = majority_voting_game()
    estimate = shapley_sampled(game, 100000, seed=42)
    assert estimate.payoffs == pytest.approx([THIRD] * 3, abs=0.01)
    assert shapley_sampled(game, 500, seed=3) == shapley_sampled(game, 500, seed=3)

    additive = shapley_sampled(additive_game([1.0, 2.0, 4.0]), 50, seed=1)
    assert additive.payoffs == pytest.approx([1.0, 2.0, 4.0])


def test_excess_vector():
    vector = excess_vector(majority_voting_game(), Allocation.of([THIRD] * 3))
    assert vector.max_excess == pytest.approx(0.0, abs=1e-12)
    assert vector.as_dict()[0b001] == pytest.approx(-THIRD)

    talmud_vector = excess_vector(talmud(200.0), Allocation.of([50.0, 75.0, 75.0]))
    assert talmud_vector.max_excess == pytest.approx(-50.0)
    assert talmud_vector.as_dict()[0b110] == pytest.approx(-50.0)
    # {0} ties with {1,2}; ties list the smaller mask first
    assert talmud_vector.entries[0][0] == 0b001


@pytest.mark.parametrize(
    "estate,expected",
    [
        (100.0, [100 / 3, 100 / 3, 100 / 3]),
        (200.0, [50.0, 75.0, 75.0]),
        (300.0, [50.0, 100.0, 150.0]),
    ],
)
def test_talmud_nucleolus(estate, expected):
    """The nucleolus reproduces the Talmud's estate divisions."""
    assert nucleolus(talmud(estate)).payoffs == pytest.approx(expected, abs=1e-6)


def test_nucleolus_of_majority_game():
    assert nucleolus(majority_voting_game()).payoffs == pytest.approx([THIRD] * 3, abs=1e-6)


def test_nucleolus_solver_records_stages():
    solver = NucleolusSolver(talmud(200.0))
    assert solver.solve().payoffs == pytest.approx([50.0, 75.0, 75.0], abs=1e-6)
    assert solver.levels[0] == pytest.approx(-50.0, abs=1e-6)
    assert solver.iterations > 0


def test_nucleolus_needs_imputations():
    with pytest.raises(EmptyImputationSetError):
        nucleolus(game_from_table(2, [0.0, 1.0, 1.0, 1.5]))


def test_kernel_check():
    game = talmud(200.0)
    assert kernel_check(game, Allocation.of([50.0, 75.0, 75.0]))
    assert not kernel_check(game, Allocation.of([100.0, 50.0, 50.0]))
    assert kernel_check(majority_voting_game(), Allocation.of([THIRD] * 3))

    with pytest.raises(NotAnImputationError):
        kernel_check(game, Allocation.of([300.0, 0.0, 0.0]))


def test_kernel_respect_floor():
    """Relaxing the balance at the floor keeps the Talmud verdicts."""
    game = talmud(200.0)
    assert kernel_check(game, Allocation.of([50.0, 75.0, 75.0]), respect_floor=True)
    assert not kernel_check(game, Allocation.of([100.0, 50.0, 50.0]), respect_floor=True)


def test_least_core():
    epsilon, x = least_core(majority_voting_game())
    assert epsilon == pytest.approx(0.0, abs=1e-9)
    assert x.payoffs == pytest.approx([THIRD] * 3, abs=1e-9)

    epsilon, _ = least_core(pairs_worth(0.8))
    assert epsilon > 0


def test_fair_allocations_in_core():
    results = fair_allocations_in_core(majority_voting_game())
    assert results == {"equal": True, "shapley": True}

    results = fair_allocations_in_core(pairs_worth(0.8))
    assert results == {"equal": False, "shapley": False}
