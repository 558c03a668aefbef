"""Coalition bitmask helpers.

Player ``i`` is bit ``i`` (0-based); the empty coalition is ``0`` and the grand coalition of
``n`` players is ``(1 << n) - 1``.
"""
from functools import lru_cache
from typing import Iterable

import numpy as np


def full_mask(n: int) -> int:
    """Mask of the grand coalition of ``n`` players."""
    return (1 << n) - 1


def mask_of(players: Iterable[int]) -> int:
    """Build a mask from 0-based player indices."""
    mask = 0
    for player in players:
        mask |= 1 << player
    return mask


def members(mask: int) -> list[int]:
    """Ascending player indices contained in ``mask``."""
    result = []
    i = 0
    while mask:
        if mask & 1:
            result.append(i)
        mask >>= 1
        i += 1
    return result


def lowest_player(mask: int) -> int:
    """Index of the lowest set bit; ``mask`` must be nonzero."""
    return (mask & -mask).bit_length() - 1


def size(mask: int) -> int:
    return mask.bit_count()


def spread(dense: int, players: list[int]) -> int:
    """Map a dense mask over ``players`` (bit k = players[k]) back to global indices."""
    mask = 0
    k = 0
    while dense:
        if dense & 1:
            mask |= 1 << players[k]
        dense >>= 1
        k += 1
    return mask


@lru_cache(maxsize=32)
def popcounts(n: int) -> np.ndarray:
    """Coalition sizes for every mask of ``n`` players, as a read-only array."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        counts[1 << bit:1 << (bit + 1)] = counts[:1 << bit] + 1
    counts.setflags(write=False)
    return counts


@lru_cache(maxsize=32)
def membership_matrix(n: int) -> np.ndarray:
    """Boolean matrix ``M[S, i]`` telling whether player ``i`` belongs to mask ``S``."""
    masks = np.arange(1 << n, dtype=np.int64)
    matrix = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    matrix.setflags(write=False)
    return matrix


def format_coalition(mask: int) -> str:
    """Human label such as ``{0,2}``."""
    return "{" + ",".join(str(p) for p in members(mask)) + "}"
