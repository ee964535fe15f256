"""Extraction of coherent substructures.

A node set is locally coherent exactly when it is an independent set of the
*conflict graph*: the undirected graph joining every pair of nodes linked by
a contradiction edge in either direction. Extraction therefore reduces to
independent-set problems on that graph:

* :func:`max_coherent_subgraph` finds a maximum-weight independent set,
  exactly by branch and bound or approximately by a greedy rule;
* :func:`enumerate_maximal_coherent` lists inclusion-maximal independent sets;
* :func:`coherent_islands` returns contradiction-free connected clusters.

Nodes untouched by any conflict belong to every answer and never enter the
search.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Literal

from ._graphutil import weak_components
from .core import BeliefSystem, EdgeKind, NodeId
from .exceptions import InvalidParameter

__all__ = [
    "ConflictGraph",
    "ExtractionResult",
    "conflict_graph",
    "node_weights",
    "max_coherent_subgraph",
    "enumerate_maximal_coherent",
    "coherent_islands",
    "OBJECTIVES",
]

Objective = Literal["count", "total_cred", "total_conf"]
Mode = Literal["exact", "heuristic", "auto"]

OBJECTIVES = ("count", "total_cred", "total_conf")
_OBJECTIVE_ALIASES = {"count": "count", "cred": "total_cred", "total_cred": "total_cred",
                      "conf": "total_conf", "total_conf": "total_conf"}
DEFAULT_EXACT_LIMIT = 40


@dataclass(frozen=True)
class ConflictGraph:
    vertices: frozenset[NodeId]
    conflicts: frozenset[frozenset[NodeId]]

    def adjacency(self) -> dict[NodeId, set[NodeId]]:
        adj: dict[NodeId, set[NodeId]] = {v: set() for v in self.vertices}
        for pair in self.conflicts:
            a, b = tuple(pair)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def conflicted(self) -> list[NodeId]:
        """Vertices that take part in at least one conflict, sorted."""
        return sorted({v for pair in self.conflicts for v in pair})

    def is_independent(self, subset: Iterable[NodeId]) -> bool:
        s = set(subset)
        return not any(pair <= s for pair in self.conflicts)


@dataclass(frozen=True)
class ExtractionResult:
    nodes: frozenset[NodeId]
    score: float
    exact: bool
    objective: str = "count"

    def to_dict(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "score": self.score,
            "exact": self.exact,
            "objective": self.objective,
        }


def conflict_graph(sys: BeliefSystem) -> ConflictGraph:
    pairs = frozenset(
        frozenset((e.source, e.target)) for e in sys.edges if e.kind is EdgeKind.CONTRADICTION
    )
    return ConflictGraph(frozenset(sys.nodes), pairs)


def _objective(objective: str) -> str:
    try:
        return _OBJECTIVE_ALIASES[objective]
    except (KeyError, TypeError):
        raise InvalidParameter(
            f"objective must be one of count, total_cred, total_conf; got {objective!r}"
        ) from None


def node_weights(sys: BeliefSystem, objective: str = "count") -> dict[NodeId, float]:
    objective = _objective(objective)
    if objective == "count":
        return {n: 1.0 for n in sys.nodes}
    attr = "cred" if objective == "total_cred" else "conf"
    return {n: getattr(b, attr) for n, b in sys.nodes.items()}


def _exact_total(weights: Iterable[float]) -> float:
    return float(sum((Fraction(w) for w in weights), Fraction(0)))


class _MWIS:
    """Maximum-weight independent set on a small graph, bitset encoded.

    Weights are integers. Bit ``i`` stands for vertex ``i``.
    """

    def __init__(self, n: int, adj: list[int], weight: list[int]):
        self.n = n
        self.adj = adj
        self.w = weight
        # heaviest first for the clique-cover bound
        self.by_weight = sorted(range(n), key=lambda v: (-weight[v], v))
        self.rank = self._degeneracy_rank()
        self.best = 0
        self.best_set = 0

    def _degeneracy_rank(self) -> list[int]:
        # repeatedly peel a minimum-degree vertex; later vertices sit in denser cores
        deg = [bin(a).count("1") for a in self.adj]
        alive = set(range(self.n))
        rank = [0] * self.n
        for r in range(self.n):
            v = min(alive, key=lambda u: (deg[u], u))
            rank[v] = r
            alive.discard(v)
            a = self.adj[v]
            while a:
                low = a & -a
                u = low.bit_length() - 1
                if u in alive:
                    deg[u] -= 1
                a ^= low
        return rank

    def bound(self, cand: int) -> int:
        """Greedy clique cover: an independent set takes at most one vertex per clique."""
        commons: list[int] = []
        total = 0
        for v in self.by_weight:
            if not cand >> v & 1:
                continue
            bit = 1 << v
            for k, common in enumerate(commons):
                if common & bit:
                    commons[k] = common & self.adj[v]
                    break
            else:
                commons.append(self.adj[v] & cand)
                total += self.w[v]
        return total

    def solve(self) -> int:
        full = (1 << self.n) - 1
        self._search(full, 0, 0)
        return self.best_set

    def _search(self, cand: int, chosen: int, value: int) -> None:
        if cand == 0:
            if value > self.best:
                self.best, self.best_set = value, chosen
            return
        if value + self.bound(cand) <= self.best:
            return
        # branch on the candidate deepest in the degeneracy order
        v, best_rank = -1, -1
        c = cand
        isolated = 0
        while c:
            low = c & -c
            u = low.bit_length() - 1
            if self.adj[u] & cand == 0:
                isolated |= low
            elif self.rank[u] > best_rank:
                v, best_rank = u, self.rank[u]
            c ^= low
        if isolated:
            gain = sum(self.w[u] for u in _bits(isolated))
            self._search(cand & ~isolated, chosen | isolated, value + gain)
            return
        bit = 1 << v
        self._search(cand & ~bit & ~self.adj[v], chosen | bit, value + self.w[v])
        self._search(cand & ~bit, chosen, value)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _integer_weights(values: list[float]) -> list[int]:
    """Scale dyadic float weights to exact integers with a common denominator."""
    fr = [Fraction(v) for v in values]
    denom = lcm(*(f.denominator for f in fr)) if fr else 1
    return [int(f * denom) for f in fr]


def _tiebreak_weights(base: list[int]) -> list[int]:
    """Fold the tie-break preference into the weights.

    Vertices are indexed in node-id order. Among optimal sets the preferred one
    contains the smallest id on which candidates disagree; a bonus of
    ``2**(n-1-i)`` for vertex ``i`` encodes exactly that and, after scaling the
    real weights by ``2**n``, can never outweigh a genuine weight difference.
    """
    n = len(base)
    return [(w << n) + (1 << (n - 1 - i)) for i, w in enumerate(base)]


def _greedy(order: list[NodeId], adj: dict[NodeId, set[NodeId]], weight: dict[NodeId, float]) -> set[NodeId]:
    """Repeatedly take the vertex maximising weight / (remaining degree + 1)."""
    alive = set(order)
    deg = {v: len(adj[v]) for v in order}

    def key(v):
        return (-weight[v] / (deg[v] + 1), v)

    heap = [key(v) for v in order]
    heapq.heapify(heap)
    chosen: set[NodeId] = set()
    while heap:
        k = heapq.heappop(heap)
        v = k[1]
        if v not in alive or k != key(v):
            continue  # stale entry
        chosen.add(v)
        gone = (adj[v] & alive) | {v}
        alive -= gone
        touched = set()
        for u in gone:
            for x in adj[u]:
                if x in alive:
                    deg[x] -= 1
                    touched.add(x)
        for x in touched:
            heapq.heappush(heap, key(x))
    return chosen


def max_coherent_subgraph(sys: BeliefSystem, objective: Objective | str = "count",
                          mode: Mode = "auto", *, exact_limit: int = DEFAULT_EXACT_LIMIT
                          ) -> ExtractionResult:
    """Locally coherent node set of maximum total weight.

    Parameters
    ----------
    objective : {"count", "total_cred", "total_conf"}
        Per-node weight: 1, ``cred`` or ``conf``. ``"cred"`` and ``"conf"``
        are accepted as aliases.
    mode : {"exact", "heuristic", "auto"}
        ``exact`` runs branch and bound and is optimal; ``heuristic`` runs a
        weighted greedy rule; ``auto`` picks exact when at most
        ``exact_limit`` nodes are involved in conflicts.

    Notes
    -----
    Ties between optimal sets go to the set containing the smallest node id
    on which they differ. The reported score is the correctly rounded sum of
    the chosen weights.
    """
    objective = _objective(objective)
    if mode not in ("exact", "heuristic", "auto"):
        raise InvalidParameter(f"mode must be exact, heuristic or auto; got {mode!r}")
    if isinstance(exact_limit, bool) or not isinstance(exact_limit, int) or exact_limit < 0:
        raise InvalidParameter(f"exact_limit must be a non-negative integer, got {exact_limit!r}")

    cg = conflict_graph(sys)
    weights = node_weights(sys, objective)
    hot = cg.conflicted()
    free = [n for n in sys.nodes if n not in set(hot)]
    exact = mode == "exact" or (mode == "auto" and len(hot) <= exact_limit)

    if not hot:
        picked: set[NodeId] = set()
    elif exact:
        pos = {v: i for i, v in enumerate(hot)}
        adj = [0] * len(hot)
        for pair in cg.conflicts:
            a, b = (pos[x] for x in pair)
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        w = _tiebreak_weights(_integer_weights([weights[v] for v in hot]))
        mask = _MWIS(len(hot), adj, w).solve()
        picked = {hot[i] for i in _bits(mask)}
    else:
        picked = _greedy(hot, cg.adjacency(), weights)

    chosen = frozenset(free) | frozenset(picked)
    score = _exact_total(weights[n] for n in sorted(chosen))
    return ExtractionResult(chosen, score, exact, objective)


def enumerate_maximal_coherent(sys: BeliefSystem, limit: int = 1000):
    """Inclusion-maximal locally coherent node sets.

    Runs Bron–Kerbosch with pivoting on the complement of the conflict graph,
    so each maximal clique found there is a maximal independent set here.
    Returns an :class:`~beliefgraph.coherence.Enumeration` of frozensets,
    ordered by their sorted member tuples and truncated at ``limit``.
    """
    from .coherence import Enumeration

    if isinstance(limit, bool) or not isinstance(limit, int) or limit < 1:
        raise InvalidParameter(f"limit must be a positive integer, got {limit!r}")
    cg = conflict_graph(sys)
    hot = cg.conflicted()
    free = frozenset(n for n in sys.nodes if n not in set(hot))
    if not hot:
        return Enumeration((free,), False)

    pos = {v: i for i, v in enumerate(hot)}
    n = len(hot)
    full = (1 << n) - 1
    conflict = [0] * n
    for pair in cg.conflicts:
        a, b = (pos[x] for x in pair)
        conflict[a] |= 1 << b
        conflict[b] |= 1 << a
    compat = [full & ~conflict[i] & ~(1 << i) for i in range(n)]

    found: list[int] = []
    truncated = False
    # explicit stack keeps deep searches off the interpreter recursion limit
    stack = [(0, full, 0)]
    while stack:
        r, p, x = stack.pop()
        if p == 0:
            if x == 0:
                if len(found) == limit:
                    truncated = True
                    break
                found.append(r)
            continue
        px = p | x
        pivot = max(_bits(px), key=lambda u: (bin(p & compat[u]).count("1"), -u))
        branch = []
        for v in _bits(p & ~compat[pivot]):
            bit = 1 << v
            branch.append((r | bit, p & compat[v], x & compat[v]))
            p &= ~bit
            x |= bit
        stack.extend(reversed(branch))

    sets = [frozenset(hot[i] for i in _bits(m)) | free for m in found]
    sets.sort(key=lambda s: sorted(s))
    return Enumeration(tuple(sets), truncated)


def coherent_islands(sys: BeliefSystem, min_size: int = 2) -> list[frozenset[NodeId]]:
    """Contradiction-free clusters joined by support or qualification edges.

    Weakly connected components of the support/qualification subgraph that
    hold no endpoint of any contradiction edge. Components smaller than
    ``min_size`` are dropped; the default of 2 leaves out isolated beliefs.
    """
    contested = {x for e in sys.edges if e.kind is EdgeKind.CONTRADICTION for x in (e.source, e.target)}
    pairs = ((e.source, e.target) for e in sys.edges if e.kind is not EdgeKind.CONTRADICTION)
    comps = weak_components(sys.node_ids, pairs)
    return [frozenset(c) for c in comps if len(c) >= min_size and contested.isdisjoint(c)]
