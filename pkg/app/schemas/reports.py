"""Result schemas of the canonical solvers."""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.game import Allocation, Coalition


class PropertyReport(BaseModel):
    """Outcome of a game-property check; the witness certifies a violation."""
    model_config = ConfigDict(frozen=True)

    holds: bool
    witness: Optional[Tuple[Coalition, Coalition]] = None

    @model_validator(mode="after")
    def witness_iff_violation(self) -> "PropertyReport":
        if self.holds == (self.witness is not None):
            raise ValueError("a witness is present exactly when the property fails")
        return self


class BalancedWeights(BaseModel):
    """Weights mu(S) on nonempty coalitions; each player's weights sum to one."""
    weights: Dict[Coalition, float] = Field(default_factory=dict)

    def player_totals(self, players: int) -> List[float]:
        return [
            sum(w for mask, w in self.weights.items() if mask >> i & 1) for i in range(players)
        ]


class BalancednessReport(BaseModel):
    """Balancedness decision; the certificate is present exactly when the game is not balanced."""
    balanced: bool
    certificate: Optional[BalancedWeights] = None
    lp_iterations: int = 0


class ExcessVector(BaseModel):
    """Excesses of every proper nonempty coalition, largest first."""
    entries: List[Tuple[Coalition, float]]

    @property
    def max_excess(self) -> float:
        return self.entries[0][1] if self.entries else float("-inf")

    def as_dict(self) -> Dict[Coalition, float]:
        return dict(self.entries)


class CoreResult(BaseModel):
    """Core emptiness decision with a member when one exists."""
    nonempty: bool
    sample_point: Optional[Allocation] = None
    lp_objective: Optional[float] = None
    lp_iterations: int = 0


class SimpleGameCore(CoreResult):
    """Core of a simple game described through its veto players."""
    veto_players: List[int] = Field(default_factory=list)
    zero_players: List[int] = Field(default_factory=list)
    description: str = ""
