"""Belief-system data model.

A belief system is the quadruple ``(N, E, cred, conf)``: a finite set of
belief nodes, a set of typed, weighted, directed edges between them, and two
scores per node. Credibility (``cred``) reflects trust in the source of a
belief; confidence (``conf``) reflects the structural support it receives.

Instances of :class:`BeliefSystem` are immutable once built. Analyses read
them and return new objects.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from operator import attrgetter
from types import MappingProxyType
from typing import Iterable, Literal, Mapping, Sequence

from .exceptions import (
    DanglingEdgeEndpoint,
    DuplicateEdge,
    DuplicateNodeId,
    InvalidNodeId,
    InvalidParameter,
    NonPositiveWeight,
    ScoreOutOfRange,
    SelfLoop,
    UnknownNode,
)

__all__ = [
    "EdgeKind",
    "BeliefNode",
    "Edge",
    "BeliefSystem",
    "build_system",
    "neighbors",
    "induced_subgraph",
]

NodeId = str
Direction = Literal["in", "out"]


class EdgeKind(str, enum.Enum):
    """Epistemic relation carried by an edge."""

    SUPPORT = "support"
    QUALIFICATION = "qualification"
    CONTRADICTION = "contradiction"

    @classmethod
    def parse(cls, value: "str | EdgeKind") -> "EdgeKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidParameter(
                f"unknown edge kind {value!r}; expected one of support, qualification, contradiction"
            ) from None

    def __str__(self) -> str:
        return self.value


def _check_score(field: str, value: float) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScoreOutOfRange(field, value)
    if not (0.0 <= value <= 1.0):  # also rejects NaN
        raise ScoreOutOfRange(field, value)


@dataclass(frozen=True)
class BeliefNode:
    """One belief with its two scores.

    ``content`` is stored verbatim; nothing in the library interprets it.
    """

    id: NodeId
    content: str = ""
    cred: float = 0.5
    conf: float = 0.5

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise InvalidNodeId(self.id)
        _check_score("cred", self.cred)
        _check_score("conf", self.conf)
        object.__setattr__(self, "cred", float(self.cred))
        object.__setattr__(self, "conf", float(self.conf))


@dataclass(frozen=True)
class Edge:
    """Directed, typed, weighted relation ``source -> target``."""

    source: NodeId
    target: NodeId
    kind: EdgeKind = EdgeKind.SUPPORT
    weight: float = 1.0

    def __post_init__(self):
        for end in (self.source, self.target):
            if not isinstance(end, str) or not end:
                raise InvalidNodeId(end)
        object.__setattr__(self, "kind", EdgeKind.parse(self.kind))
        w = self.weight
        if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w) or w <= 0:
            raise NonPositiveWeight(w)
        object.__setattr__(self, "weight", float(w))
        if self.source == self.target:
            raise SelfLoop(self.source)

    @property
    def pair(self) -> tuple[NodeId, NodeId]:
        return (self.source, self.target)


class BeliefSystem:
    """Validated, immutable belief graph.

    Use :func:`build_system` to construct one. Nodes iterate in sorted id
    order and edges in sorted ``(source, target)`` order.
    """

    __slots__ = ("_nodes", "_edges", "_metadata", "_out", "_in", "_edge_map", "_index")

    def __init__(self, nodes: Mapping[NodeId, BeliefNode], edges: Sequence[Edge],
                 metadata: Mapping[str, str] | None = None, *, _trusted: bool = False):
        if not _trusted:
            other = build_system(list(nodes.values()), list(edges), metadata)
            nodes, edges, metadata = other._nodes, other._edges, other._metadata
        self._nodes = MappingProxyType(dict(sorted(nodes.items())))
        self._edges = tuple(sorted(edges, key=attrgetter("source", "target")))
        self._metadata = MappingProxyType(dict(sorted((metadata or {}).items())))
        self._out = self._in = self._edge_map = self._index = None

    def _adjacency(self) -> None:
        # built on first use; many derived systems (zones, subgraphs) never need it
        out: dict[NodeId, list[Edge]] = {n: [] for n in self._nodes}
        inc: dict[NodeId, list[Edge]] = {n: [] for n in self._nodes}
        # edges are sorted by source, so each incoming list comes out sorted too
        for e in self._edges:
            out[e.source].append(e)
            inc[e.target].append(e)
        self._in = {n: tuple(v) for n, v in inc.items()}
        self._edge_map = {e.pair: e for e in self._edges}
        self._out = {n: tuple(v) for n, v in out.items()}

    # read-only views -------------------------------------------------
    @property
    def nodes(self) -> Mapping[NodeId, BeliefNode]:
        return self._nodes

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def metadata(self) -> Mapping[str, str]:
        return self._metadata

    @property
    def node_ids(self) -> tuple[NodeId, ...]:
        return tuple(self._nodes)

    @property
    def index(self) -> Mapping[NodeId, int]:
        """Position of each node id in sorted order."""
        if self._index is None:
            self._index = {n: i for i, n in enumerate(self._nodes)}
        return MappingProxyType(self._index)

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._nodes

    def __iter__(self):
        return iter(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BeliefSystem):
            return NotImplemented
        return (
            dict(self._nodes) == dict(other._nodes)
            and self._edges == other._edges
            and dict(self._metadata) == dict(other._metadata)
        )

    def __hash__(self):
        return hash((tuple(self._nodes.values()), self._edges))

    def __repr__(self) -> str:
        return f"BeliefSystem(nodes={len(self._nodes)}, edges={len(self._edges)})"

    def node(self, node_id: NodeId) -> BeliefNode:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def edge(self, source: NodeId, target: NodeId) -> Edge | None:
        if self._out is None:
            self._adjacency()
        return self._edge_map.get((source, target))

    def edges_of_kind(self, kind: EdgeKind | str) -> list[Edge]:
        kind = EdgeKind.parse(kind)
        return [e for e in self._edges if e.kind is kind]

    def cred(self) -> dict[NodeId, float]:
        return {n: b.cred for n, b in self._nodes.items()}

    def conf(self) -> dict[NodeId, float]:
        return {n: b.conf for n, b in self._nodes.items()}

    def in_edges(self, node_id: NodeId) -> tuple[Edge, ...]:
        if self._out is None:
            self._adjacency()
        if node_id not in self._in:
            raise UnknownNode(node_id)
        return self._in[node_id]

    def out_edges(self, node_id: NodeId) -> tuple[Edge, ...]:
        if self._out is None:
            self._adjacency()
        if node_id not in self._out:
            raise UnknownNode(node_id)
        return self._out[node_id]

    def with_conf(self, conf: Mapping[NodeId, float]) -> "BeliefSystem":
        """Return a copy whose confidence scores are replaced by ``conf``.

        Nodes absent from ``conf`` keep their current score.
        """
        for n in conf:
            if n not in self._nodes:
                raise UnknownNode(n)
        nodes = {
            n: BeliefNode(b.id, b.content, b.cred, conf.get(n, b.conf))
            for n, b in self._nodes.items()
        }
        return BeliefSystem(nodes, self._edges, self._metadata, _trusted=True)


def build_system(nodes: Iterable[BeliefNode], edges: Iterable[Edge],
                 metadata: Mapping[str, str] | None = None) -> BeliefSystem:
    """Validate nodes and edges and assemble a :class:`BeliefSystem`.

    Raises the first validation error encountered: nodes are checked in the
    order given, then edges.

    Raises
    ------
    DuplicateNodeId, DanglingEdgeEndpoint, SelfLoop, DuplicateEdge,
    ScoreOutOfRange, NonPositiveWeight
    """
    node_map: dict[NodeId, BeliefNode] = {}
    for node in nodes:
        if not isinstance(node, BeliefNode):
            raise TypeError(f"expected BeliefNode, got {type(node).__name__}")
        if node.id in node_map:
            raise DuplicateNodeId(node.id)
        node_map[node.id] = node

    seen: set[tuple[NodeId, NodeId]] = set()
    edge_list: list[Edge] = []
    for e in edges:
        if not isinstance(e, Edge):
            raise TypeError(f"expected Edge, got {type(e).__name__}")
        for end in (e.source, e.target):
            if end not in node_map:
                raise DanglingEdgeEndpoint(e.source, e.target, end)
        if e.pair in seen:
            raise DuplicateEdge(e.source, e.target)
        seen.add(e.pair)
        edge_list.append(e)

    meta = dict(metadata or {})
    for k, v in meta.items():
        if not isinstance(k, str) or not isinstance(v, str):
            raise InvalidParameter("metadata must map strings to strings")
    return BeliefSystem(node_map, edge_list, meta, _trusted=True)


def neighbors(sys: BeliefSystem, n: NodeId, direction: Direction = "out",
              kind_filter: EdgeKind | str | None = None) -> list[Edge]:
    """Edges incident to ``n`` in the given direction, optionally of one kind.

    Incoming edges are ordered by source id, outgoing edges by target id.
    """
    if direction == "in":
        found = sys.in_edges(n)
    elif direction == "out":
        found = sys.out_edges(n)
    else:
        raise InvalidParameter(f"direction must be 'in' or 'out', got {direction!r}")
    if kind_filter is None:
        return list(found)
    kind = EdgeKind.parse(kind_filter)
    return [e for e in found if e.kind is kind]


def induced_subgraph(sys: BeliefSystem, subset: Iterable[NodeId]) -> BeliefSystem:
    """Subsystem on ``subset`` with every edge whose endpoints both lie in it."""
    keep = set(subset)
    for n in keep:
        if n not in sys:
            raise UnknownNode(n)
    nodes = {n: b for n, b in sys.nodes.items() if n in keep}
    edges = [e for e in sys.edges if e.source in keep and e.target in keep]
    return BeliefSystem(nodes, edges, sys.metadata, _trusted=True)
