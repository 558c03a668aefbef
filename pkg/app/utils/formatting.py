"""Text helpers for human-readable reports."""
from typing import Iterable, Sequence

from app.utils.bitmask import format_coalition


def format_number(number: float, digits: int = 6) -> str:
    """
    Format a number with a fixed count of significant digits.

    Args:
        number: The number to format
        digits: Significant digits

    Returns:
        The formatted number string; negative zero prints as 0
    """
    text = f"{number:.{digits}g}"
    return "0" if text == "-0" else text


def format_vector(values: Sequence[float], digits: int = 6) -> str:
    """Render a payoff vector as ``(a, b, c)``."""
    return "(" + ", ".join(format_number(v, digits) for v in values) + ")"


def format_blocks(blocks: Iterable[int]) -> str:
    """Render a coalition collection as ``[{0,1}, {2}]``."""
    return "[" + ", ".join(format_coalition(b) for b in blocks) + "]"


def render_table(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    """
    Render left-aligned columns separated by two spaces.

    Args:
        headers: Column titles
        rows: Cell strings, one sequence per row

    Returns:
        The table as text without trailing newline
    """
    rows = [list(r) for r in rows]
    widths = [len(h) for h in headers]
    for row in rows:
        for k, cell in enumerate(row):
            widths[k] = max(widths[k], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)
