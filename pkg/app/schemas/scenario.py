"""Parameter schemas of the scenario generators."""
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.schemas.graph import Point


def _check_probabilities(values: Tuple[float, ...]) -> Tuple[float, ...]:
    if not all(0 < p < 1 for p in values):
        raise ValueError("probabilities must lie in (0, 1)")
    return values


class BankruptcyParams(BaseModel):
    """Claims on an estate; coalitions get what the outsiders' claims leave over."""
    model_config = ConfigDict(frozen=True)

    claims: Tuple[float, ...] = Field(..., min_length=1)
    estate: float = Field(..., ge=0)

    @field_validator("claims")
    @classmethod
    def positive_claims(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(c > 0 for c in v):
            raise ValueError("claims must be positive")
        return v


class MacParams(BaseModel):
    """Gaussian multiple-access channel where outsiders jam the coalition."""
    model_config = ConfigDict(frozen=True)

    powers: Tuple[float, ...] = Field(..., min_length=1, description="watts per user")
    noise: float = Field(1.0, gt=0, description="sigma^2, watts")

    @field_validator("powers")
    @classmethod
    def positive_powers(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(p > 0 for p in v):
            raise ValueError("powers must be positive")
        return v


class MimoParams(BaseModel):
    """Virtual MIMO uplink where cooperating users pay to exchange their data first."""
    model_config = ConfigDict(frozen=True)

    positions: Tuple[Point, ...] = Field(..., min_length=1, description="meters")
    budget: float = Field(..., gt=0, description="power per slot, watts")
    exchange_exponent: float = Field(2.0, ge=2)
    exchange_scale: float = Field(1e-6, gt=0, description="P0, watts")
    rx_antennas: int = Field(1, ge=1)
    noise: float = Field(1.0, gt=0, description="sigma^2, watts")


class CssParams(BaseModel):
    """Collaborative spectrum sensing with OR fusion inside each coalition."""
    model_config = ConfigDict(frozen=True)

    miss: Tuple[float, ...] = Field(..., min_length=1)
    false_alarm: Tuple[float, ...] = Field(..., min_length=1)
    alpha: float = Field(..., gt=0, lt=1, description="false-alarm bound")
    beta: float = Field(1.0, ge=0, description="false-alarm cost weight")

    @field_validator("miss", "false_alarm")
    @classmethod
    def valid_probabilities(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        return _check_probabilities(v)

    @model_validator(mode="after")
    def same_length(self) -> "CssParams":
        if len(self.miss) != len(self.false_alarm):
            raise ValueError("miss and false_alarm need one entry per SU")
        return self
