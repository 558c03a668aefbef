"""On-disk file models and the command report."""
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.graph import Point


class GameFile(BaseModel):
    """``{"players": n, "values": [...]}`` with values indexed by coalition bitmask."""
    model_config = ConfigDict(extra="forbid")

    players: int = Field(..., ge=1)
    values: List[float]


class GraphFile(BaseModel):
    """``{"players": n, "edges": [[i, j], ...]}`` with 0-based players."""
    model_config = ConfigDict(extra="forbid")

    players: int = Field(..., ge=1)
    edges: List[Tuple[int, int]] = Field(default_factory=list)


class PartitionFile(BaseModel):
    """``{"blocks": [[...], ...]}``; ``players`` is optional and defaults to the game's."""
    model_config = ConfigDict(extra="forbid")

    players: Optional[int] = Field(None, ge=1)
    blocks: List[List[int]]


class LayoutFile(BaseModel):
    """Relay positions in meters and their traffic in packets per frame."""
    model_config = ConfigDict(extra="forbid")

    positions: List[Point] = Field(..., min_length=1)
    traffic: Optional[List[float]] = None
    bs_position: Point = (0.0, 0.0)


class SolveReport(BaseModel):
    """Everything a command prints in machine-readable mode."""
    command: List[str]
    result: Any
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
