"""Solution concepts and classification checks for canonical TU games."""
import logging
import math
from typing import Dict, Optional

import numpy as np

from app.config import settings
from app.exceptions import (
    EmptyImputationSetError,
    GameValidationError,
    NotAnImputationError,
    NotSimpleGameError,
)
from app.schemas.game import Allocation, Coalition, TUGame
from app.schemas.lp import LinearProgram
from app.schemas.reports import (
    BalancednessReport,
    BalancedWeights,
    CoreResult,
    ExcessVector,
    PropertyReport,
    SimpleGameCore,
)
from app.services.game_model import (
    is_efficient,
    is_imputation,
    is_imputation_set_nonempty,
    require_exact,
    require_length,
    require_players,
)
from app.services.lp_engine import solve_lp
from app.utils.bitmask import members, membership_matrix, popcounts

logger = logging.getLogger(__name__)


def _tolerances(values: np.ndarray) -> np.ndarray:
    return settings.TOLERANCE * np.maximum(1.0, np.abs(values))


def check_superadditive(game: TUGame) -> PropertyReport:
    """
    Check v(S1 u S2) >= v(S1) + v(S2) for all disjoint nonempty S1, S2.

    Args:
        game: The game

    Returns:
        PropertyReport whose witness is the first violating pair in ascending (S1, S2) order
    """
    require_exact(game, "superadditivity check")
    v = game.table()
    masks = np.arange(len(v))
    for s1 in range(1, len(v)):
        s2 = masks[(masks > s1) & ((masks & s1) == 0)]
        if s2.size == 0:
            continue
        joint = v[s1 | s2]
        parts = v[s1] + v[s2]
        bad = np.flatnonzero(joint < parts - _tolerances(parts))
        if bad.size:
            return PropertyReport(holds=False, witness=(s1, int(s2[bad[0]])))
    return PropertyReport(holds=True)


def check_convex(game: TUGame) -> PropertyReport:
    """
    Check supermodularity v(S1) + v(S2) <= v(S1 u S2) + v(S1 n S2) over all pairs.

    Args:
        game: The game

    Returns:
        PropertyReport whose witness is the first violating pair in ascending (S1, S2) order
    """
    require_exact(game, "convexity check")
    v = game.table()
    masks = np.arange(len(v))
    for s1 in range(1, len(v)):
        s2 = masks[masks > s1]
        lhs = v[s1] + v[s2]
        rhs = v[s1 | s2] + v[s1 & s2]
        bad = np.flatnonzero(lhs > rhs + _tolerances(rhs))
        if bad.size:
            return PropertyReport(holds=False, witness=(s1, int(s2[bad[0]])))
    return PropertyReport(holds=True)


def core_membership(game: TUGame, x: Allocation) -> bool:
    """
    Check whether ``x`` is efficient and no coalition can improve on it.

    Args:
        game: The game
        x: Candidate allocation

    Returns:
        True when sum x = v(N) and x(S) >= v(S) for every coalition, within tolerance
    """
    require_exact(game, "core membership")
    if not is_efficient(game, x):
        return False
    v = game.table()
    sums = membership_matrix(game.players) @ x.as_array()
    return bool(np.all(sums >= v - _tolerances(v)))


def core_lp(game: TUGame) -> LinearProgram:
    """Minimise sum x subject to x(S) >= v(S) for every nonempty coalition, x free."""
    matrix = membership_matrix(game.players).astype(float)
    rows = tuple((tuple(matrix[s]), game.values[s]) for s in range(1, 1 << game.players))
    return LinearProgram(objective=(1.0,) * game.players, geq_rows=rows)


def core_nonempty(game: TUGame) -> CoreResult:
    """
    Decide core emptiness with the covering LP.

    The core is nonempty exactly when the LP minimum does not exceed v(N). The optimal
    vertex, shifted onto sum x = v(N), must also pass core_membership; an optimum that only
    clears v(N) within the LP slack counts as an empty core.

    Args:
        game: The game

    Returns:
        CoreResult with a sample core point when nonempty
    """
    require_exact(game, "core LP")
    solution = solve_lp(core_lp(game))
    grand = game.grand_value
    bound = grand + settings.LP_FEASIBILITY_TOLERANCE * max(1.0, abs(grand))
    nonempty = solution.objective_value <= bound
    logger.info(f"core LP optimum {solution.objective_value:.10g} vs v(N) {grand:.10g}")
    sample = None
    if nonempty:
        x = np.asarray(solution.x)
        x -= (x.sum() - grand) / game.players
        sample = Allocation.of(x)
        if not core_membership(game, sample):
            logger.info("shifted LP optimum is not a core member, reporting an empty core")
            nonempty, sample = False, None
    return CoreResult(
        nonempty=nonempty,
        sample_point=sample,
        lp_objective=solution.objective_value,
        lp_iterations=solution.iterations,
    )


def balancedness_report(game: TUGame) -> BalancednessReport:
    """
    Decide balancedness through the dual of the core LP.

    Maximises sum mu(S) v(S) over weights with every player's weights summing to one. A
    positive answer is confirmed against core_nonempty so that the two decisions agree at
    the tolerance boundary.

    Args:
        game: The game

    Returns:
        BalancednessReport with the violating weight collection when the game is not
        balanced and the pivots spent over both LPs
    """
    require_exact(game, "balancedness check")
    n = game.players
    coalitions = range(1, 1 << n)
    matrix = membership_matrix(n)
    columns = np.array([matrix[s] for s in coalitions], dtype=float)
    eq_rows = tuple((tuple(columns[:, i]), 1.0) for i in range(n))
    lp = LinearProgram(
        objective=tuple(-game.values[s] for s in coalitions),
        eq_rows=eq_rows,
        nonnegative=(True,) * len(columns),
    )
    solution = solve_lp(lp)
    iterations = solution.iterations
    best = -solution.objective_value
    grand = game.grand_value
    balanced = best <= grand + settings.LP_FEASIBILITY_TOLERANCE * max(1.0, abs(grand))
    logger.info(f"balancedness LP optimum {best:.10g} vs v(N) {grand:.10g}")
    if balanced:
        core = core_nonempty(game)
        iterations += core.lp_iterations
        balanced = core.nonempty
    if balanced:
        return BalancednessReport(balanced=True, lp_iterations=iterations)
    weights = {
        s: w for s, w in zip(coalitions, solution.x) if w > settings.LP_PIVOT_TOLERANCE
    }
    return BalancednessReport(
        balanced=False, certificate=BalancedWeights(weights=weights), lp_iterations=iterations
    )


def check_balanced(game: TUGame) -> tuple[bool, Optional[BalancedWeights]]:
    """
    Decide balancedness.

    Returns:
        (balanced, certificate) where the certificate is the violating weight collection
        when the game is not balanced, None otherwise
    """
    report = balancedness_report(game)
    return report.balanced, report.certificate


def _require_simple(game: TUGame) -> None:
    tol = settings.TOLERANCE
    if abs(game.grand_value - 1.0) > tol:
        raise NotSimpleGameError(f"v(N) = {game.grand_value}, a simple game needs v(N) = 1")
    for mask, v in enumerate(game.values):
        if abs(v) > tol and abs(v - 1.0) > tol:
            raise NotSimpleGameError(f"v({members(mask)}) = {v} is neither 0 nor 1")


def veto_players(game: TUGame) -> set[int]:
    """
    Players whose absence leaves the rest worthless.

    Args:
        game: A simple game

    Returns:
        {i : v(N minus i) = 0}

    Raises:
        NotSimpleGameError: Values outside {0, 1} or v(N) != 1
    """
    _require_simple(game)
    grand = game.grand
    return {i for i in range(game.players) if abs(game.value(grand & ~(1 << i))) <= settings.TOLERANCE}


def simple_game_core(game: TUGame) -> SimpleGameCore:
    """
    Core of a simple game.

    With veto players the core is every nonnegative x summing to one that pays nothing to
    non-veto players; without veto players the covering LP decides.

    Args:
        game: A simple game

    Returns:
        SimpleGameCore with veto set, zero-payoff players and a sample point

    Raises:
        NotSimpleGameError: Values outside {0, 1} or v(N) != 1
    """
    veto = sorted(veto_players(game))
    others = [i for i in range(game.players) if i not in veto]
    if veto:
        point = [0.0] * game.players
        point[veto[0]] = 1.0
        sample = Allocation.of(point)
        if core_membership(game, sample):
            return SimpleGameCore(
                nonempty=True,
                sample_point=sample,
                veto_players=veto,
                zero_players=others,
                description=f"x >= 0, x_i = 0 for i in {others}, sum of x_i over {veto} = 1",
            )
        # non-monotone simple game: the veto description does not apply
        logger.info("veto characterisation rejected its own sample point, using the core LP")
    result = core_nonempty(game)
    return SimpleGameCore(
        **result.model_dump(),
        veto_players=veto,
        zero_players=others if veto else [],
        description="core decided by the covering LP",
    )


def _shapley_weights(n: int) -> np.ndarray:
    """|S|!(n-|S|-1)!/n! for |S| = 0..n-1."""
    total = math.factorial(n)
    return np.array([math.factorial(s) * math.factorial(n - s - 1) / total for s in range(n)])


def shapley_exact(game: TUGame) -> Allocation:
    """
    Shapley value by the marginal-contribution formula.

    Args:
        game: The game

    Returns:
        phi with phi_i the weighted average of v(S u i) - v(S) over S not containing i
    """
    require_exact(game, "exact Shapley value")
    n = game.players
    v = game.table()
    masks = np.arange(1 << n)
    sizes = popcounts(n)
    weights = _shapley_weights(n)
    phi = np.empty(n)
    for i in range(n):
        without = masks[(masks >> i & 1) == 0]
        marginal = v[without | (1 << i)] - v[without]
        phi[i] = float(np.dot(weights[sizes[without]], marginal))
    return Allocation.of(phi)


def shapley_sampled(game: TUGame, samples: int, seed: int) -> Allocation:
    """
    Monte Carlo Shapley estimate over uniformly random joining orders.

    Args:
        game: The game
        samples: Number of permutations, at least one
        seed: Seed of the generator; equal inputs give equal outputs

    Returns:
        Average marginal contribution of every player
    """
    if samples < 1:
        raise GameValidationError(f"samples must be at least 1, got {samples}")
    require_exact(game, "sampled Shapley value")
    n = game.players
    v = game.table()
    rng = np.random.default_rng(seed)
    totals = np.zeros(n)
    remaining = samples
    while remaining:
        batch = min(remaining, settings.SAMPLING_BATCH_SIZE)
        orders = rng.permuted(np.tile(np.arange(n), (batch, 1)), axis=1)
        joined = np.cumsum(np.left_shift(1, orders), axis=1)
        worth = v[joined]
        marginal = np.diff(worth, axis=1, prepend=0.0)
        totals += np.bincount(orders.ravel(), weights=marginal.ravel(), minlength=n)
        remaining -= batch
    return Allocation.of(totals / samples)


def excesses(game: TUGame, x: Allocation) -> np.ndarray:
    """e(x, S) = v(S) - x(S) for every mask, the empty one included."""
    require_length(game, x)
    return game.table() - membership_matrix(game.players) @ x.as_array()


def excess_vector(game: TUGame, x: Allocation) -> ExcessVector:
    """
    Excesses of all proper nonempty coalitions.

    Args:
        game: The game
        x: Allocation

    Returns:
        ExcessVector sorted by excess descending, ties by ascending mask
    """
    require_exact(game, "excess vector")
    e = excesses(game, x)
    masks = np.arange(1, game.grand)
    values = e[1:game.grand]
    order = np.lexsort((masks, -values))
    return ExcessVector(entries=[(int(masks[k]), float(values[k])) for k in order])


def least_core(game: TUGame) -> tuple[float, Allocation]:
    """
    Smallest uniform excess bound over efficient allocations.

    Args:
        game: The game, at least two players

    Returns:
        (epsilon, x) with every proper coalition's excess at most epsilon under x;
        the core is nonempty iff epsilon <= 0
    """
    require_players(game, settings.NUCLEOLUS_MAX_PLAYERS, "least core")
    n = game.players
    if n == 1:
        return 0.0, Allocation.of([game.grand_value])
    matrix = membership_matrix(n).astype(float)
    rows = tuple((tuple(matrix[s]) + (1.0,), game.values[s]) for s in range(1, game.grand))
    lp = LinearProgram(
        objective=(0.0,) * n + (1.0,),
        geq_rows=rows,
        eq_rows=(((1.0,) * n + (0.0,), game.grand_value),),
    )
    solution = solve_lp(lp)
    return solution.x[-1], Allocation.of(solution.x[:n])


class NucleolusSolver:
    """
    Nucleolus by sequential linear programs.

    Each stage minimises the largest excess eps over the coalitions not yet fixed, keeping
    the allocation an imputation and fixed coalitions at their settled excess. Coalitions
    tight at the stage optimum are candidates; a candidate is fixed once a second LP shows
    its excess cannot drop below eps on the optimal face. Stages end when the fixed
    coalitions and the grand coalition pin down the allocation.
    """

    def __init__(self, game: TUGame):
        """
        Initialize nucleolus solver.

        Args:
            game: Game with a nonempty imputation set

        Raises:
            EmptyImputationSetError: Stand-alone values exceed v(N)
        """
        require_players(game, settings.NUCLEOLUS_MAX_PLAYERS, "nucleolus")
        if not is_imputation_set_nonempty(game):
            raise EmptyImputationSetError(
                f"stand-alone values sum to {sum(game.singleton_values()):.6g} > v(N) = {game.grand_value:.6g}"
            )
        self.game = game
        self.n = game.players
        self.matrix = membership_matrix(self.n).astype(float)
        self.fixed: Dict[Coalition, float] = {}
        self.active = list(range(1, game.grand))
        self.levels: list[float] = []
        self.iterations = 0

    def _base_rows(self, epsilon: Optional[float]) -> tuple[list, list]:
        """Constraint rows over (x, eps); with ``epsilon`` set the bound is a constant."""
        n, v = self.n, self.game.values
        geq, eq = [], []
        for s in self.active:
            coefficients = tuple(self.matrix[s])
            if epsilon is None:
                geq.append((coefficients + (1.0,), v[s]))
            else:
                geq.append((coefficients + (0.0,), v[s] - epsilon))
        for i in range(n):
            unit = [0.0] * (n + 1)
            unit[i] = 1.0
            geq.append((tuple(unit), v[1 << i]))
        eq.append(((1.0,) * n + (0.0,), self.game.grand_value))
        for s, level in self.fixed.items():
            eq.append((tuple(self.matrix[s]) + (0.0,), v[s] - level))
        return geq, eq

    def _stage(self) -> tuple[float, np.ndarray]:
        geq, eq = self._base_rows(None)
        lp = LinearProgram(objective=(0.0,) * self.n + (1.0,), geq_rows=tuple(geq), eq_rows=tuple(eq))
        solution = solve_lp(lp)
        self.iterations += solution.iterations
        x = np.asarray(solution.x)
        return float(x[-1]), x[:-1]

    def _cannot_drop(self, coalition: Coalition, epsilon: float) -> bool:
        """True when the excess of ``coalition`` is eps everywhere on the stage optimum."""
        geq, eq = self._base_rows(epsilon)
        objective = tuple(-self.matrix[coalition]) + (0.0,)
        lp = LinearProgram(objective=objective, geq_rows=tuple(geq), eq_rows=tuple(eq))
        solution = solve_lp(lp)
        self.iterations += solution.iterations
        lowest = self.game.values[coalition] + solution.objective_value
        return lowest >= epsilon - settings.LP_FEASIBILITY_TOLERANCE * max(1.0, abs(epsilon))

    def _pinned(self) -> bool:
        rows = [np.ones(self.n)] + [self.matrix[s] for s in self.fixed]
        return int(np.linalg.matrix_rank(np.vstack(rows))) == self.n

    def solve(self) -> Allocation:
        """
        Run the stages.

        Returns:
            The nucleolus
        """
        if self.n == 1:
            return Allocation.of([self.game.grand_value])
        x = None
        while self.active:
            epsilon, x = self._stage()
            self.levels.append(epsilon)
            v = self.game.values
            tol = settings.LP_FEASIBILITY_TOLERANCE * max(1.0, abs(epsilon))
            tight = [s for s in self.active if v[s] - float(self.matrix[s] @ x) >= epsilon - tol]
            settled = [s for s in tight if self._cannot_drop(s, epsilon)] or tight
            for s in settled:
                self.fixed[s] = epsilon
            self.active = [s for s in self.active if s not in self.fixed]
            logger.debug(
                f"nucleolus stage {len(self.levels)}: eps={epsilon:.10g}, fixed {len(settled)} coalition(s)"
            )
            if self._pinned():
                break
        return Allocation.of(x)


def nucleolus(game: TUGame) -> Allocation:
    """
    Nucleolus of a game with a nonempty imputation set.

    Args:
        game: The game, at most NUCLEOLUS_MAX_PLAYERS players

    Returns:
        The lexicographic minimiser of the sorted excess vector over imputations

    Raises:
        EmptyImputationSetError: Stand-alone values exceed v(N)
    """
    return NucleolusSolver(game).solve()


def kernel_check(game: TUGame, x: Allocation, respect_floor: bool = False) -> bool:
    """
    Check the pairwise surplus balance s_ij(x) = s_ji(x).

    s_ij is the largest excess over coalitions containing i but not j.

    Args:
        game: The game
        x: An imputation
        respect_floor: Also accept s_ij > s_ji when x_j already equals v({j})

    Returns:
        True when every ordered pair is balanced within tolerance

    Raises:
        NotAnImputationError: x is not an imputation
    """
    require_exact(game, "kernel check")
    if not is_imputation(game, x):
        raise NotAnImputationError("kernel check needs an imputation")
    n = game.players
    e = excesses(game, x)
    matrix = membership_matrix(n)
    surplus = np.full((n, n), -np.inf)
    for i in range(n):
        for j in range(n):
            if i != j:
                surplus[i, j] = e[matrix[:, i] & ~matrix[:, j]].max()
    tol = settings.LP_FEASIBILITY_TOLERANCE
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            gap = surplus[i, j] - surplus[j, i]
            if gap <= tol * max(1.0, abs(surplus[i, j])):
                continue
            if respect_floor and x.payoffs[j] <= game.value(1 << j) + tol:
                continue
            return False
    return True


def fair_allocations_in_core(game: TUGame) -> Dict[str, bool]:
    """
    Test well-known fair divisions against the core.

    Args:
        game: The game

    Returns:
        Mapping of rule name to core membership; "proportional" is omitted when
        stand-alone values are not all positive
    """
    n = game.players
    grand = game.grand_value
    results = {"equal": core_membership(game, Allocation.of([grand / n] * n))}
    alone = game.singleton_values()
    if np.all(alone > 0):
        results["proportional"] = core_membership(game, Allocation.of(alone * grand / alone.sum()))
    results["shapley"] = core_membership(game, shapley_exact(game))
    return results
