"""Core game data: TU games, allocations and partitions."""
import math
from typing import List, Tuple, TypeAlias

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.utils.bitmask import full_mask, lowest_player, members

#: A coalition is a bitmask over 0-based players (bit i set <=> player i is a member).
Coalition: TypeAlias = int


class TUGame(BaseModel):
    """
    Transferable-utility game in characteristic form.

    ``values[S]`` is the worth of the coalition with bitmask ``S``.
    """
    model_config = ConfigDict(frozen=True)

    players: int = Field(..., ge=1, description="Number of players")
    values: Tuple[float, ...] = Field(..., description="Worth of every coalition, indexed by mask")

    @model_validator(mode="after")
    def check_table(self) -> "TUGame":
        """Table length 2^n, v(empty) = 0, finite entries."""
        if len(self.values) != 1 << self.players:
            raise ValueError(f"expected {1 << self.players} values, got {len(self.values)}")
        if self.values[0] != 0:
            raise ValueError("value of the empty coalition must be 0")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("values must be finite")
        return self

    @property
    def grand(self) -> Coalition:
        """Mask of the grand coalition."""
        return full_mask(self.players)

    @property
    def grand_value(self) -> float:
        return self.values[self.grand]

    def value(self, coalition: Coalition) -> float:
        return self.values[coalition]

    def table(self) -> np.ndarray:
        """Values as a float array (fresh copy)."""
        return np.asarray(self.values, dtype=float)

    def singleton_values(self) -> np.ndarray:
        return np.array([self.values[1 << i] for i in range(self.players)], dtype=float)


class Allocation(BaseModel):
    """A payoff per player."""
    model_config = ConfigDict(frozen=True)

    payoffs: Tuple[float, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_finite(self) -> "Allocation":
        if not all(math.isfinite(x) for x in self.payoffs):
            raise ValueError("payoffs must be finite")
        return self

    @classmethod
    def of(cls, values) -> "Allocation":
        """Build from any float sequence or array."""
        return cls(payoffs=tuple(float(x) for x in values))

    @property
    def n(self) -> int:
        return len(self.payoffs)

    @property
    def total(self) -> float:
        return math.fsum(self.payoffs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.payoffs, dtype=float)

    def coalition_sum(self, coalition: Coalition) -> float:
        return math.fsum(self.payoffs[i] for i in members(coalition))


class Partition(BaseModel):
    """
    Coalition structure: disjoint nonempty blocks covering every player.

    Blocks are kept in ascending order of their lowest member.
    """
    model_config = ConfigDict(frozen=True)

    players: int = Field(..., ge=1)
    blocks: Tuple[Coalition, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_cover(self) -> "Partition":
        seen = 0
        for block in self.blocks:
            if block <= 0:
                raise ValueError("blocks must be nonempty")
            if seen & block:
                raise ValueError("blocks overlap")
            seen |= block
        if seen != full_mask(self.players):
            raise ValueError("blocks do not cover every player")
        if list(self.blocks) != sorted(self.blocks, key=lowest_player):
            raise ValueError("blocks are not in canonical order")
        return self

    def block_of(self, player: int) -> Coalition:
        for block in self.blocks:
            if block >> player & 1:
                return block
        raise KeyError(player)

    def as_lists(self) -> List[List[int]]:
        """Blocks as lists of 0-based players."""
        return [members(b) for b in self.blocks]
