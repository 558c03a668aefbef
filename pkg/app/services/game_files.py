"""Readers and writers for game, graph, partition, layout and network-state files."""
import json
import logging
from pathlib import Path
from typing import Any, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from app.exceptions import GameFileError, ParseError
from app.schemas.files import GameFile, GraphFile, LayoutFile, PartitionFile
from app.schemas.game import Partition, TUGame
from app.schemas.graph import GameGraph, NetworkState
from app.services.game_model import game_from_table, partition_from_lists

logger = logging.getLogger(__name__)

FileModel = TypeVar("FileModel", bound=BaseModel)


def read_text(path: str | Path) -> str:
    """
    Read a UTF-8 file.

    Raises:
        GameFileError: The file is missing or unreadable
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise GameFileError(f"{path}: file not found")
    except (OSError, UnicodeDecodeError) as e:
        raise GameFileError(f"{path}: cannot read file ({e})")


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, column=e.colno)


def _load_model(text: str, model: Type[FileModel]) -> FileModel:
    data = _load_json(text)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "document"
        raise ParseError(f"{where}: {first['msg']}")


def parse_game_file(text: str) -> TUGame:
    """
    Parse a game file.

    Args:
        text: File contents

    Returns:
        Validated TUGame

    Raises:
        ParseError: Malformed JSON, missing keys or a values array of the wrong length
        GameValidationError: The table itself breaks a game invariant
    """
    document = _load_model(text, GameFile)
    expected = 1 << document.players
    if len(document.values) != expected:
        raise ParseError(f"values: {document.players} players need {expected} values, got {len(document.values)}")
    return game_from_table(document.players, document.values)


def write_game_file(game: TUGame) -> str:
    """Serialize ``game`` in the game file format, one key per line."""
    return (
        "{\n"
        f'  "players": {game.players},\n'
        f'  "values": {json.dumps([float(v) for v in game.values])}\n'
        "}\n"
    )


def load_game(path: str | Path) -> TUGame:
    game = parse_game_file(read_text(path))
    logger.debug(f"loaded {game.players}-player game from {path}")
    return game


def parse_graph_file(text: str) -> GameGraph:
    """Parse ``{"players": n, "edges": [[i, j], ...]}``."""
    document = _load_model(text, GraphFile)
    try:
        return GameGraph(players=document.players, edges=document.edges)
    except ValidationError as e:
        raise ParseError(f"edges: {e.errors()[0]['msg']}")


def write_graph_file(graph: GameGraph) -> str:
    return json.dumps({"players": graph.players, "edges": [list(e) for e in graph.edges]}) + "\n"


def parse_partition_file(text: str, players: Optional[int] = None) -> Partition:
    """
    Parse ``{"blocks": [[...], ...]}``.

    Args:
        text: File contents
        players: Player count to cover; required unless the file states it

    Raises:
        ParseError: Malformed file, or the player count is unknown or contradicts ``players``
        PartitionError: The blocks do not partition the players
    """
    document = _load_model(text, PartitionFile)
    count = document.players or players
    if count is None:
        raise ParseError("players: not given in the file and no game to take it from")
    if players is not None and count != players:
        raise ParseError(f"players: file covers {count} players, the game has {players}")
    return partition_from_lists(document.blocks, count)


def write_partition_file(partition: Partition) -> str:
    return json.dumps({"players": partition.players, "blocks": partition.as_lists()}) + "\n"


def parse_layout_file(text: str) -> LayoutFile:
    """Relay layout; traffic defaults to one packet per relay."""
    layout = _load_model(text, LayoutFile)
    if layout.traffic is None:
        return layout.model_copy(update={"traffic": [1.0] * len(layout.positions)})
    if len(layout.traffic) != len(layout.positions):
        raise ParseError("traffic: one entry per relay expected")
    return layout


def write_layout_file(layout: LayoutFile) -> str:
    return layout.model_dump_json(indent=2) + "\n"


def parse_state_file(text: str) -> NetworkState:
    """Network state as written by ``write_state_file``."""
    return _load_model(text, NetworkState)


def write_state_file(state: NetworkState) -> str:
    return state.model_dump_json(indent=2) + "\n"
