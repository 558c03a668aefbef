"""Linear program schemas."""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

Row = Tuple[Tuple[float, ...], float]


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LinearProgram(BaseModel):
    """
    Minimise ``objective . x`` subject to ``row . x >= bound`` for every geq row and
    ``row . x == bound`` for every eq row.

    Variables are free unless flagged in ``nonnegative``.
    """
    model_config = ConfigDict(frozen=True)

    objective: Tuple[float, ...] = Field(..., min_length=1)
    geq_rows: Tuple[Row, ...] = ()
    eq_rows: Tuple[Row, ...] = ()
    nonnegative: Optional[Tuple[bool, ...]] = None

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def sign_flags(self) -> Tuple[bool, ...]:
        """Per-variable nonnegativity, all free when unset."""
        return self.nonnegative if self.nonnegative is not None else (False,) * self.n_vars


class LpSolution(BaseModel):
    """Solver outcome; ``x`` and ``objective_value`` are present only when optimal."""
    status: LpStatus
    x: Optional[List[float]] = None
    objective_value: Optional[float] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL
