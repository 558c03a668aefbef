"""Dense two-phase simplex solver with Bland's anti-cycling rule."""
import logging
from typing import Optional

import numpy as np

from app.config import settings
from app.exceptions import DimensionMismatchError, LPError, NonFiniteInputError
from app.schemas.lp import LinearProgram, LpSolution, LpStatus

logger = logging.getLogger(__name__)


class SimplexSolver:
    """
    Solve small dense linear programs exactly enough for the game solvers.

    The program is brought to standard form (free variables split as x = x+ - x-,
    surplus columns for >= rows, right-hand sides made nonnegative), phase 1 minimises
    the artificial sum, phase 2 the real objective. Entering and leaving columns follow
    Bland's rule, so the returned vertex is reproducible for a given row order.
    """

    def __init__(
        self,
        pivot_tolerance: Optional[float] = None,
        feasibility_tolerance: Optional[float] = None,
        max_iterations: Optional[int] = None,
    ):
        """
        Initialize solver.

        Args:
            pivot_tolerance: Smallest pivot magnitude accepted (settings default)
            feasibility_tolerance: Phase-1 residual and re-verification bound (settings default)
            max_iterations: Pivot budget over both phases (settings default)
        """
        self.pivot_tol = pivot_tolerance or settings.LP_PIVOT_TOLERANCE
        self.feas_tol = feasibility_tolerance or settings.LP_FEASIBILITY_TOLERANCE
        self.max_iterations = max_iterations or settings.LP_MAX_ITERATIONS
        self.iterations = 0

    def _validate(self, lp: LinearProgram) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        n = lp.n_vars
        c = np.asarray(lp.objective, dtype=float)
        for name, rows in (("geq", lp.geq_rows), ("eq", lp.eq_rows)):
            for k, (coefficients, _) in enumerate(rows):
                if len(coefficients) != n:
                    raise DimensionMismatchError(
                        f"{name} row {k} has {len(coefficients)} coefficients for {n} variables"
                    )
        if len(lp.sign_flags()) != n:
            raise DimensionMismatchError(f"{len(lp.sign_flags())} sign flags for {n} variables")

        a_geq = np.array([r for r, _ in lp.geq_rows], dtype=float).reshape(len(lp.geq_rows), n)
        b_geq = np.array([b for _, b in lp.geq_rows], dtype=float)
        a_eq = np.array([r for r, _ in lp.eq_rows], dtype=float).reshape(len(lp.eq_rows), n)
        b_eq = np.array([b for _, b in lp.eq_rows], dtype=float)
        for arr in (c, a_geq, b_geq, a_eq, b_eq):
            if not np.all(np.isfinite(arr)):
                raise NonFiniteInputError("linear program contains NaN or infinite entries")
        return c, a_geq, b_geq, a_eq, b_eq

    def _pivot(self, tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
        tableau[row] /= tableau[row, col]
        column = tableau[:, col].copy()
        column[row] = 0.0
        tableau -= np.outer(column, tableau[row])
        basis[row] = col
        self.iterations += 1
        if self.iterations > self.max_iterations:
            raise LPError(f"simplex exceeded {self.max_iterations} pivots")

    def _iterate(self, tableau: np.ndarray, basis: list[int], n_cols: int) -> bool:
        """Run Bland pivots on the last-row objective; False when unbounded."""
        m = tableau.shape[0] - 1
        while True:
            reduced = tableau[-1, :n_cols]
            candidates = np.flatnonzero(reduced < -self.pivot_tol)
            if candidates.size == 0:
                return True
            col = int(candidates[0])
            column = tableau[:m, col]
            rows = np.flatnonzero(column > self.pivot_tol)
            if rows.size == 0:
                return False
            ratios = tableau[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + self.pivot_tol * max(1.0, abs(best))]
            row = int(min(ties, key=lambda r: basis[r]))
            self._pivot(tableau, basis, row, col)

    def solve(self, lp: LinearProgram) -> LpSolution:
        """
        Solve a linear program.

        Args:
            lp: The program to minimise

        Returns:
            LpSolution with status, and the vertex and objective when optimal

        Raises:
            DimensionMismatchError: Row length differs from the variable count
            NonFiniteInputError: NaN or infinite coefficient
        """
        self.iterations = 0
        c, a_geq, b_geq, a_eq, b_eq = self._validate(lp)
        signs = lp.sign_flags()
        n = lp.n_vars

        # Standard-form structural columns: x+ for every variable, x- for free ones.
        split = [j for j in range(n) if not signs[j]]
        a_rows = np.vstack([a_geq, a_eq]) if (len(a_geq) or len(a_eq)) else np.zeros((0, n))
        structural = np.hstack([a_rows, -a_rows[:, split]])
        cost = np.concatenate([c, -c[split]])
        n_struct = structural.shape[1]

        m_geq, m = len(b_geq), len(b_geq) + len(b_eq)
        rhs = np.concatenate([b_geq, b_eq])
        surplus = np.zeros((m, m_geq))
        surplus[np.arange(m_geq), np.arange(m_geq)] = -1.0
        body = np.hstack([structural, surplus])

        # Nonnegative right-hand sides; a >= row with b <= 0 gets its surplus as starting basis.
        flip = rhs < 0
        flip[:m_geq] |= rhs[:m_geq] == 0
        body[flip] *= -1.0
        rhs = np.where(flip, -rhs, rhs)

        n_body = body.shape[1]
        basis: list[int] = [-1] * m
        needs_artificial = []
        for i in range(m):
            if i < m_geq and flip[i]:
                basis[i] = n_struct + i
            else:
                needs_artificial.append(i)
        n_art = len(needs_artificial)
        artificial = np.zeros((m, n_art))
        for k, i in enumerate(needs_artificial):
            artificial[i, k] = 1.0
            basis[i] = n_body + k

        tableau = np.zeros((m + 1, n_body + n_art + 1))
        tableau[:m, :n_body] = body
        tableau[:m, n_body:n_body + n_art] = artificial
        tableau[:m, -1] = rhs

        scale = max(1.0, float(np.abs(rhs).max(initial=0.0)))
        if n_art:
            # Phase 1: minimise the artificial sum.
            tableau[-1, n_body:n_body + n_art] = 1.0
            for i in needs_artificial:
                tableau[-1] -= tableau[i]
            self._iterate(tableau, basis, n_body + n_art)
            residual = -tableau[-1, -1]
            logger.debug(f"phase 1 finished after {self.iterations} pivots, residual {residual:.3g}")
            if residual > self.feas_tol * scale:
                return LpSolution(status=LpStatus.INFEASIBLE, iterations=self.iterations)

            # Drive remaining artificials out of the basis; drop redundant rows.
            keep = []
            for i in range(m):
                if basis[i] < n_body:
                    keep.append(i)
                    continue
                entries = np.flatnonzero(np.abs(tableau[i, :n_body]) > self.pivot_tol)
                if entries.size:
                    self._pivot(tableau, basis, i, int(entries[0]))
                    keep.append(i)
            tableau = np.vstack([tableau[keep], tableau[-1:]])
            basis = [basis[i] for i in keep]
            tableau = np.delete(tableau, np.s_[n_body:n_body + n_art], axis=1)

        # Phase 2 objective row: reduced costs of the real objective.
        full_cost = np.concatenate([cost, np.zeros(n_body - n_struct)])
        tableau[-1] = 0.0
        tableau[-1, :n_body] = full_cost
        for i, col in enumerate(basis):
            tableau[-1] -= full_cost[col] * tableau[i]
        if not self._iterate(tableau, basis, n_body):
            logger.debug(f"unbounded after {self.iterations} pivots")
            return LpSolution(status=LpStatus.UNBOUNDED, iterations=self.iterations)

        values = np.zeros(n_body)
        for i, col in enumerate(basis):
            values[col] = tableau[i, -1]
        x = values[:n].copy()
        x[split] -= values[n:n_struct]
        self._verify(x, a_geq, b_geq, a_eq, b_eq)
        objective = float(c @ x)
        logger.debug(f"optimal after {self.iterations} pivots, objective {objective:.10g}")
        return LpSolution(
            status=LpStatus.OPTIMAL,
            x=[float(v) for v in x],
            objective_value=objective,
            iterations=self.iterations,
        )

    def _verify(self, x, a_geq, b_geq, a_eq, b_eq) -> None:
        """Plug the vertex back into every constraint."""
        violation = 0.0
        if len(b_geq):
            violation = max(violation, float(np.max((b_geq - a_geq @ x) / np.maximum(1.0, np.abs(b_geq)))))
        if len(b_eq):
            violation = max(violation, float(np.max(np.abs(a_eq @ x - b_eq) / np.maximum(1.0, np.abs(b_eq)))))
        if violation > self.feas_tol:
            raise LPError(f"optimal vertex violates a constraint by {violation:.3g}")


def solve_lp(lp: LinearProgram) -> LpSolution:
    """
    Solve ``lp`` with a fresh SimplexSolver using the configured tolerances.

    Args:
        lp: Linear program (minimisation)

    Returns:
        The LpSolution
    """
    return SimplexSolver().solve(lp)
