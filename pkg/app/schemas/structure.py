"""Schemas for games under a coalition structure and for coalition formation."""
from enum import Enum
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.game import Coalition, Partition, TUGame


class RestrictedGame(BaseModel):
    """
    A game restricted to one block, re-indexed densely.

    Bit k of ``game``'s masks stands for ``members[k]`` of the parent game.
    """
    model_config = ConfigDict(frozen=True)

    parent: TUGame
    block: Coalition
    members: Tuple[int, ...]
    game: TUGame


class OrderKind(str, Enum):
    UTILITARIAN = "utilitarian"
    PARETO = "pareto"


class PayoffRule(str, Enum):
    """How a coalition's worth is shared among its members under the Pareto order."""
    EQUAL = "equal"
    PROPORTIONAL = "proportional"
    SHAPLEY = "shapley"
    NUCLEOLUS = "nucleolus"
    IDENTITY = "identity"


class ComparisonOrder(BaseModel):
    """Order used to compare two collections of coalitions over the same players."""
    model_config = ConfigDict(frozen=True)

    kind: OrderKind = OrderKind.UTILITARIAN
    payoff_rule: PayoffRule = PayoffRule.EQUAL

    @classmethod
    def utilitarian(cls) -> "ComparisonOrder":
        return cls(kind=OrderKind.UTILITARIAN)

    @classmethod
    def pareto(cls, rule: PayoffRule = PayoffRule.EQUAL) -> "ComparisonOrder":
        return cls(kind=OrderKind.PARETO, payoff_rule=rule)


class StepKind(str, Enum):
    MERGE = "merge"
    SPLIT = "split"


class FormationStep(BaseModel):
    operation: StepKind
    before: List[Coalition]
    after: List[Coalition]


class FormationTrace(BaseModel):
    """Every accepted merge or split, and the partition the run stopped at."""
    steps: List[FormationStep] = Field(default_factory=list)
    final: Partition
