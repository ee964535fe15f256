"""Structural coherence and incoherence.

A node set is *locally coherent* when the subgraph it induces holds no
contradiction edge. A system is *globally coherent* when it has no
contradiction edge at all, which is the same as local coherence of the whole
node set.

Incoherence shows up in two forms: contradiction cycles and chains, and
undersupported beliefs (high confidence with no support, or support only from
undermined nodes). A node is *undermined* when it is the target of a
contradiction edge, or is supported by an undermined node.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx

from ._graphutil import weak_components
from .config import Thresholds
from .core import BeliefSystem, Edge, EdgeKind, NodeId
from .exceptions import InvalidParameter, UnknownNode

__all__ = [
    "Enumeration",
    "SupportDeficit",
    "CoherenceReport",
    "is_locally_coherent",
    "is_globally_coherent",
    "contradiction_edges",
    "undermined_set",
    "find_contradiction_cycles",
    "find_contradiction_chains",
    "undersupported_beliefs",
    "tension_zones",
    "coherence_report",
]

DEFAULT_MAX_CYCLES = 10_000
DEFAULT_CHAIN_LEN = 5
DEFAULT_MAX_CHAINS = 10_000

_C = EdgeKind.CONTRADICTION
_S = EdgeKind.SUPPORT
_Q = EdgeKind.QUALIFICATION


@dataclass(frozen=True)
class Enumeration(Sequence):
    """A possibly truncated list of enumerated structures."""

    items: tuple = ()
    truncated: bool = False

    def __getitem__(self, i):
        return self.items[i]

    def __len__(self) -> int:
        return len(self.items)

    def __eq__(self, other):
        if isinstance(other, Enumeration):
            return self.items == other.items and self.truncated == other.truncated
        if isinstance(other, (list, tuple)):
            return list(self.items) == list(other)
        return NotImplemented


class SupportDeficit(str, enum.Enum):
    NO_SUPPORT = "NoSupport"
    INCOHERENT_SUPPORT = "IncoherentSupport"

    def __str__(self) -> str:
        return self.value


def _check_subset(sys: BeliefSystem, subset: Iterable[NodeId]) -> set[NodeId]:
    s = set(subset)
    for n in s:
        if n not in sys:
            raise UnknownNode(n)
    return s


def contradiction_edges(sys: BeliefSystem) -> list[Edge]:
    return [e for e in sys.edges if e.kind is _C]


def is_locally_coherent(sys: BeliefSystem, subset: Iterable[NodeId]) -> bool:
    """True when no contradiction edge has both endpoints in ``subset``."""
    s = _check_subset(sys, subset)
    if len(s) < 2:
        return True
    for n in s:
        for e in sys.out_edges(n):
            if e.kind is _C and e.target in s:
                return False
    return True


def is_globally_coherent(sys: BeliefSystem) -> bool:
    return not any(e.kind is _C for e in sys.edges)


def undermined_set(sys: BeliefSystem, *, through_qualification: bool = False) -> frozenset[NodeId]:
    """Nodes undermined by upstream beliefs.

    Seeds with every contradiction target and closes forward along support
    edges (and qualification edges too when ``through_qualification`` is set).
    Forward closure is an interpretive choice: "undermined" has no standard
    formal definition, and this is the least set closed under those two rules.
    """
    carriers = {_S, _Q} if through_qualification else {_S}
    seen = {e.target for e in sys.edges if e.kind is _C}
    queue = deque(sorted(seen))
    while queue:
        n = queue.popleft()
        for e in sys.out_edges(n):
            if e.kind in carriers and e.target not in seen:
                seen.add(e.target)
                queue.append(e.target)
    return frozenset(seen)


def _canonical_cycle(cycle: list) -> tuple:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def find_contradiction_cycles(sys: BeliefSystem, limit: int = DEFAULT_MAX_CYCLES, *,
                              length_bound: int | None = None,
                              max_examined: int | None = None) -> Enumeration:
    """Simple directed cycles that traverse at least one contradiction edge.

    Each cycle is rotated to start at its smallest node id; cycles are sorted
    lexicographically. The search stops after ``limit`` cycles, or after
    ``max_examined`` candidate cycles (default ``100 * limit``) of any kind
    have been inspected, and flags the result as truncated.
    """
    if limit < 1:
        raise InvalidParameter(f"limit must be >= 1, got {limit}")
    if length_bound is not None and length_bound < 2:
        raise InvalidParameter(f"length_bound must be >= 2, got {length_bound}")
    budget = max_examined if max_examined is not None else 100 * limit

    ids = sys.node_ids
    idx = sys.index
    g = nx.DiGraph()
    g.add_nodes_from(range(len(ids)))
    g.add_edges_from((idx[e.source], idx[e.target]) for e in sys.edges)
    contra = {(idx[e.source], idx[e.target]) for e in sys.edges if e.kind is _C}
    if not contra:
        return Enumeration((), False)

    # only strongly connected components holding a contradiction edge can host one
    comp_of = {}
    for k, comp in enumerate(sorted((sorted(c) for c in nx.strongly_connected_components(g)))):
        for v in comp:
            comp_of[v] = k
    hot = sorted({comp_of[a] for a, b in contra if comp_of[a] == comp_of[b]})

    found: list[tuple] = []
    examined = 0
    truncated = False
    for k in hot:
        members = [v for v in range(len(ids)) if comp_of[v] == k]
        sub = g.subgraph(members)
        for cyc in nx.simple_cycles(sub, length_bound=length_bound):
            closed = cyc + cyc[:1]
            if any((closed[i], closed[i + 1]) in contra for i in range(len(cyc))):
                if len(found) == limit:
                    truncated = True
                    break
                found.append(_canonical_cycle([ids[v] for v in cyc]))
            examined += 1
            if examined >= budget:
                truncated = True
                break
        if truncated:
            break
    return Enumeration(tuple(sorted(found)), truncated)


def find_contradiction_chains(sys: BeliefSystem, max_len: int = DEFAULT_CHAIN_LEN,
                              limit: int = DEFAULT_MAX_CHAINS) -> Enumeration:
    """Maximal simple directed paths that traverse a contradiction edge.

    ``max_len`` bounds the number of nodes on a path. A path is maximal when
    it cannot be extended at either end without repeating a node or exceeding
    ``max_len``. Paths are returned as tuples of node ids, sorted.
    """
    if isinstance(max_len, bool) or not isinstance(max_len, int) or max_len < 2:
        raise InvalidParameter(f"max_len must be an integer >= 2, got {max_len!r}")
    if limit < 1:
        raise InvalidParameter(f"limit must be >= 1, got {limit}")

    found: list[tuple] = []

    def extendable_fwd(path: list) -> bool:
        return any(e.target not in on_path for e in sys.out_edges(path[-1]))

    def prefixes(path: deque) -> Iterator[deque]:
        # backward walks over non-contradiction edges, so each path is produced
        # only from its first contradiction edge
        yield path
        if len(path) >= max_len - 1:
            return
        for e in sys.in_edges(path[0]):
            if e.kind is not _C and e.source not in on_path:
                on_path.add(e.source)
                path.appendleft(e.source)
                yield from prefixes(path)
                path.popleft()
                on_path.discard(e.source)

    def suffixes(path: list) -> Iterator[list]:
        yield path
        if len(path) >= max_len:
            return
        for e in sys.out_edges(path[-1]):
            if e.target not in on_path:
                on_path.add(e.target)
                path.append(e.target)
                yield from suffixes(path)
                path.pop()
                on_path.discard(e.target)

    for ce in contradiction_edges(sys):
        on_path = {ce.source, ce.target}
        for pre in prefixes(deque([ce.source])):
            head = list(pre)
            back = [e.source for e in sys.in_edges(head[0])]
            for path in suffixes(head + [ce.target]):
                if len(path) < max_len and (
                    any(s not in on_path for s in back) or extendable_fwd(path)
                ):
                    continue
                if len(found) == limit:
                    return Enumeration(tuple(sorted(found)), True)
                found.append(tuple(path))
    return Enumeration(tuple(sorted(found)), False)


def undersupported_beliefs(sys: BeliefSystem, th: Thresholds | None = None,
                           undermined: Iterable[NodeId] | None = None
                           ) -> list[tuple[NodeId, SupportDeficit]]:
    """High-confidence nodes without support, or supported only by undermined nodes."""
    th = th or Thresholds()
    u = frozenset(undermined) if undermined is not None else undermined_set(sys)
    out = []
    for n, node in sys.nodes.items():
        if node.conf < th.tau_high:
            continue
        sources = [e.source for e in sys.in_edges(n) if e.kind is _S]
        if not sources:
            out.append((n, SupportDeficit.NO_SUPPORT))
        elif all(s in u for s in sources):
            out.append((n, SupportDeficit.INCOHERENT_SUPPORT))
    return out


def tension_zones(sys: BeliefSystem) -> list[BeliefSystem]:
    """Induced subsystems around connected clusters of contradiction edges.

    Nodes joined by contradiction edges (in either direction) are grouped into
    weakly connected components; each zone is the subsystem induced by one
    component.
    """
    contra = contradiction_edges(sys)
    if not contra:
        return []
    ends = sorted({e.source for e in contra} | {e.target for e in contra})
    comps = weak_components(ends, ((e.source, e.target) for e in contra))
    zone_of = {n: i for i, c in enumerate(comps) for n in c}
    zone_edges: list[list[Edge]] = [[] for _ in comps]
    for e in sys.edges:
        i = zone_of.get(e.source)
        if i is not None and zone_of.get(e.target) == i:
            zone_edges[i].append(e)
    return [
        BeliefSystem({n: sys.nodes[n] for n in c}, es, sys.metadata, _trusted=True)
        for c, es in zip(comps, zone_edges)
    ]


@dataclass(frozen=True)
class CoherenceReport:
    globally_coherent: bool
    contradiction_edges: tuple[Edge, ...]
    contradiction_cycles: Enumeration
    contradiction_chains: Enumeration
    undermined: frozenset[NodeId]
    undersupported: tuple[tuple[NodeId, SupportDeficit], ...]
    tension_zones: tuple[BeliefSystem, ...] = field(default=())
    cycles_computed: bool = True

    def to_dict(self) -> dict:
        return {
            "globally_coherent": self.globally_coherent,
            "contradiction_edges": [
                {"from": e.source, "to": e.target, "weight": e.weight} for e in self.contradiction_edges
            ],
            "contradiction_cycles": {
                "computed": self.cycles_computed,
                "items": [list(c) for c in self.contradiction_cycles],
                "truncated": self.contradiction_cycles.truncated,
            },
            "contradiction_chains": {
                "items": [list(c) for c in self.contradiction_chains],
                "truncated": self.contradiction_chains.truncated,
            },
            "undermined": sorted(self.undermined),
            "undersupported": [{"node": n, "reason": r.value} for n, r in self.undersupported],
            "tension_zones": [
                {
                    "nodes": list(z.node_ids),
                    "contradiction_edges": sum(1 for e in z.edges if e.kind is _C),
                    "edges": len(z.edges),
                }
                for z in self.tension_zones
            ],
        }


def coherence_report(sys: BeliefSystem, th: Thresholds | None = None, *,
                     include_cycles: bool = True,
                     max_cycles: int = DEFAULT_MAX_CYCLES,
                     chain_max_len: int = DEFAULT_CHAIN_LEN,
                     max_chains: int = DEFAULT_MAX_CHAINS) -> CoherenceReport:
    """Run every coherence diagnostic and collect the results."""
    th = th or Thresholds()
    contra = tuple(contradiction_edges(sys))
    undermined = undermined_set(sys)
    cycles = find_contradiction_cycles(sys, max_cycles) if include_cycles else Enumeration((), False)
    return CoherenceReport(
        globally_coherent=not contra,
        contradiction_edges=contra,
        contradiction_cycles=cycles,
        contradiction_chains=find_contradiction_chains(sys, chain_max_len, max_chains),
        undermined=undermined,
        undersupported=tuple(undersupported_beliefs(sys, th, undermined)),
        tension_zones=tuple(tension_zones(sys)),
        cycles_computed=include_cycles,
    )
