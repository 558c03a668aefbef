"""Schemas for communication graphs and relay networks."""
from typing import List, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Point = Tuple[float, float]

#: Parent index standing for the base station.
BASE_STATION = -1


class GameGraph(BaseModel):
    """
    Undirected graph over the players of a game.

    Edges are stored as (i, j) with i < j, sorted.
    """
    model_config = ConfigDict(frozen=True)

    players: int = Field(..., ge=1)
    edges: Tuple[Tuple[int, int], ...] = ()

    @field_validator("edges", mode="before")
    @classmethod
    def normalize_edges(cls, v):
        pairs = []
        for edge in v:
            i, j = (int(k) for k in edge)
            if i == j:
                raise ValueError(f"self-loop on player {i}")
            pairs.append((min(i, j), max(i, j)))
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate edge")
        return tuple(sorted(pairs))

    @model_validator(mode="after")
    def check_endpoints(self) -> "GameGraph":
        for i, j in self.edges:
            if i < 0 or j >= self.players:
                raise ValueError(f"edge ({i}, {j}) names a player outside 0..{self.players - 1}")
        return self

    @classmethod
    def complete(cls, players: int) -> "GameGraph":
        return cls(players=players, edges=[(i, j) for i in range(players) for j in range(i + 1, players)])

    @classmethod
    def empty(cls, players: int) -> "GameGraph":
        return cls(players=players, edges=[])

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.players))
        graph.add_edges_from(self.edges)
        return graph


class NetformParams(BaseModel):
    """Constants of the relay utility."""
    model_config = ConfigDict(frozen=True)

    hop_scale: float = Field(100.0, gt=0, description="d0, meters")
    decay: float = Field(1.0, gt=0, description="nu")
    link_cost: float = Field(0.0, ge=0, description="utility per maintained link")
    child_reward: float = Field(0.0, ge=0, description="utility per relayed packet")
    max_links: int = Field(4, ge=1, description="child links a relay accepts")


class NetworkState(BaseModel):
    """
    Uplink tree of relays towards one base station.

    ``parent[i]`` is another relay's index or BASE_STATION.
    """
    model_config = ConfigDict(frozen=True)

    positions: Tuple[Point, ...] = Field(..., min_length=1)
    bs_position: Point = (0.0, 0.0)
    parent: Tuple[int, ...]
    traffic: Tuple[float, ...]

    @model_validator(mode="after")
    def check_shape(self) -> "NetworkState":
        n = len(self.positions)
        if len(self.parent) != n or len(self.traffic) != n:
            raise ValueError("positions, parent and traffic must have one entry per relay")
        for relay, p in enumerate(self.parent):
            if p == relay or not BASE_STATION <= p < n:
                raise ValueError(f"relay {relay} has invalid parent {p}")
        if any(t < 0 for t in self.traffic):
            raise ValueError("traffic must be nonnegative")
        return self

    @property
    def relays(self) -> int:
        return len(self.positions)

    def children(self, relay: int) -> List[int]:
        return [k for k, p in enumerate(self.parent) if p == relay]

    def with_parent(self, relay: int, parent: int) -> "NetworkState":
        parents = list(self.parent)
        parents[relay] = parent
        return self.model_copy(update={"parent": tuple(parents)})


class FormationOutcome(BaseModel):
    """Final network, the rounds played and whether a round ended without change."""
    state: NetworkState
    rounds: int
    converged: bool
