from __future__ import annotations

from typing import Hashable, Iterable


def weak_components(nodes: Iterable[Hashable], pairs: Iterable[tuple]) -> list[list]:
    """Connected components of the undirected graph on ``nodes`` and ``pairs``.

    Members are sorted and components are ordered by their smallest member.
    """
    parent = {n: n for n in nodes}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra
    groups: dict = {}
    for n in parent:
        groups.setdefault(find(n), []).append(n)
    comps = [sorted(g) for g in groups.values()]
    comps.sort(key=lambda c: c[0])
    return comps
