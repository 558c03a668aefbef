"""Shared pieces of the subcommands: their output model and argument parsers."""
from typing import Any, Dict, List

from pydantic import BaseModel, Field

from app.config import settings
from app.exceptions import UsageError
from app.schemas.game import Allocation, TUGame
from app.schemas.structure import ComparisonOrder, OrderKind, PayoffRule
from app.services.game_model import require_length
from app.utils.formatting import format_number, render_table


class CommandOutput(BaseModel):
    """What a handler hands back: the machine payload and the human lines."""
    result: Any
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    lines: List[str] = Field(default_factory=list)


def base_diagnostics(**extra: Any) -> Dict[str, Any]:
    return {"tolerance": settings.TOLERANCE, **extra}


def parse_floats(text: str) -> List[float]:
    """
    Parse ``"1,2.5,3"`` into floats.

    Raises:
        UsageError: A field is not a number
    """
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def parse_point(text: str) -> tuple[float, float]:
    values = parse_floats(text)
    if len(values) != 2:
        raise UsageError(f"expected a point as x,y, got {text!r}")
    return values[0], values[1]


def parse_allocation(game: TUGame, text: str) -> Allocation:
    """Allocation given on the command line, one payoff per player."""
    x = Allocation.of(parse_floats(text))
    require_length(game, x)
    return x


def comparison_order(order: str, payoff: str) -> ComparisonOrder:
    return ComparisonOrder(kind=OrderKind(order), payoff_rule=PayoffRule(payoff))


def add_order_flags(parser) -> None:
    parser.add_argument("--order", choices=[k.value for k in OrderKind], default=OrderKind.UTILITARIAN.value)
    parser.add_argument("--payoff", choices=[r.value for r in PayoffRule], default=PayoffRule.EQUAL.value)


def allocation_lines(x: Allocation) -> List[str]:
    rows = [[str(i), format_number(p)] for i, p in enumerate(x.payoffs)]
    return render_table(["player", "payoff"], rows).splitlines()


def flag_line(name: str, value: bool) -> str:
    return f"{name}: {'yes' if value else 'no'}"
