"""Solver configuration using Pydantic Settings."""
import logging

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Solver settings.

    Every field can be overridden through the environment with the ``COALITION_`` prefix,
    e.g. ``COALITION_TOLERANCE=1e-8``.
    """

    # Numeric contract
    TOLERANCE: float = 1e-9  # scaled by max(1, magnitude)
    LP_PIVOT_TOLERANCE: float = 1e-10
    LP_FEASIBILITY_TOLERANCE: float = 1e-7
    LP_MAX_ITERATIONS: int = 50000

    # Size limits of the exact solvers
    EXACT_MAX_PLAYERS: int = 20
    NUCLEOLUS_MAX_PLAYERS: int = 12
    FORMATION_MAX_PLAYERS: int = 12
    DC_MAX_PLAYERS: int = 8
    BELL_MAX_PLAYERS: int = 15

    # Sampling
    SAMPLING_BATCH_SIZE: int = 10000

    # Network formation
    NETFORM_ROUND_FACTOR: int = 100

    # Logging
    LOG_LEVEL: str = "WARNING"

    @field_validator("TOLERANCE", "LP_PIVOT_TOLERANCE", "LP_FEASIBILITY_TOLERANCE")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        """Tolerances must be strictly positive and small."""
        if not 0 < v < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Accept only level names known to the logging module."""
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level: {v}")
        return level

    model_config = SettingsConfigDict(
        env_prefix="COALITION_",
        env_file=".env",
        case_sensitive=True,
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()


def scaled_tolerance(*magnitudes: float, base: float | None = None) -> float:
    """
    Absolute tolerance scaled by the largest magnitude involved.

    Args:
        magnitudes: Values taking part in the comparison
        base: Base tolerance, defaults to ``settings.TOLERANCE``

    Returns:
        base * max(1, |m| for m in magnitudes)
    """
    tol = settings.TOLERANCE if base is None else base
    return tol * max([1.0, *(abs(m) for m in magnitudes)])
