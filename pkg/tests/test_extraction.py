import math
from fractions import Fraction

import pytest
from conftest import make, systems
from hypothesis import given, settings
from oracles import (
    bfs_components,
    brute_independent,
    brute_locally_coherent,
    brute_max_weight,
    brute_maximal_independent,
    random_raw,
    subsets,
    to_system,
)

from beliefgraph import (
    InvalidParameter,
    coherent_islands,
    conflict_graph,
    enumerate_maximal_coherent,
    is_locally_coherent,
    max_coherent_subgraph,
)

OBJECTIVES = ("count", "total_cred", "total_conf")


def _weights(nodes, objective):
    col = {"count": None, "total_cred": 1, "total_conf": 2}[objective]
    return {n[0]: Fraction(1) if col is None else Fraction(n[col]) for n in nodes}


def brute_tiebroken(nodes, edges, objective):
    """Optimal set preferring, at the first differing id, the set that contains it."""
    ids = sorted(n[0] for n in nodes)
    w = _weights(nodes, objective)
    best = None
    for sub in subsets(ids):
        if not brute_independent(edges, sub):
            continue
        key = (sum((w[i] for i in sub), Fraction(0)), tuple(i in sub for i in ids))
        if best is None or key > best[0]:
            best = (key, frozenset(sub))
    return best[1]


class TestConflictGraph:
    def test_examples(self):
        assert conflict_graph(make("ab", ["a->b"])).conflicts == frozenset()
        assert conflict_graph(make("ab", ["a-|b"])).conflicts == {frozenset("ab")}
        assert conflict_graph(make("ab", ["a-|b", "b-|a"])).conflicts == {frozenset("ab")}

    def test_reduction_is_bijective(self, rng):
        for _ in range(100):
            nodes, edges = random_raw(rng, n_max=7)
            s = to_system(nodes, edges)
            cg = conflict_graph(s)
            coherent = {frozenset(x) for x in subsets(s.node_ids) if is_locally_coherent(s, x)}
            independent = {frozenset(x) for x in subsets(s.node_ids) if cg.is_independent(x)}
            assert coherent == independent


class TestMaxCoherent:
    def test_no_conflicts_returns_everything(self):
        s = make("abc", ["a->b", "b~>c"])
        r = max_coherent_subgraph(s, mode="exact")
        assert r.nodes == set("abc") and r.exact and r.score == 3.0

    def test_two_conflicts_tie_break(self):
        s = make("abcd", ["a-|b", "c-|d"])
        r = max_coherent_subgraph(s, "count", "exact")
        assert r.nodes == {"a", "c"} and r.score == 2

    def test_cred_objective(self):
        s = make("abz", ["a-|b"], a=(0.2, 0.5), b=(0.9, 0.5), z=(0.4, 0.5))
        r = max_coherent_subgraph(s, "total_cred", "exact")
        assert r.nodes == {"b", "z"}
        assert r.score == pytest.approx(1.3, abs=1e-15)

    def test_aliases_and_validation(self):
        s = make("ab", ["a-|b"], a=(0.2, 0.7), b=(0.9, 0.1))
        assert max_coherent_subgraph(s, "conf").nodes == {"a"}
        assert max_coherent_subgraph(s, "cred").objective == "total_cred"
        with pytest.raises(InvalidParameter):
            max_coherent_subgraph(s, "size")
        with pytest.raises(InvalidParameter):
            max_coherent_subgraph(s, mode="fast")

    def test_exact_matches_enumeration(self, rng):
        for _ in range(80):
            nodes, edges = random_raw(rng, n_max=9, p_edge=0.3,
                                      score_grid=[0.0, 0.1, 0.25, 0.5, 0.5, 0.75, 1.0])
            s = to_system(nodes, edges)
            for obj in OBJECTIVES:
                r = max_coherent_subgraph(s, obj, "exact")
                assert r.exact and brute_locally_coherent(edges, r.nodes)
                assert sum(_weights(nodes, obj)[n] for n in r.nodes) == brute_max_weight(nodes, edges, obj)
                assert r.nodes == brute_tiebroken(nodes, edges, obj)

    def test_score_is_correctly_rounded_sum(self, rng):
        nodes, edges = random_raw(rng, n_min=8, n_max=8)
        r = max_coherent_subgraph(to_system(nodes, edges), "total_conf", "exact")
        conf = {n: c for n, _, c in nodes}
        assert r.score == math.fsum(conf[n] for n in r.nodes)

    def test_heuristic_is_coherent_and_maximal(self, rng):
        for _ in range(80):
            nodes, edges = random_raw(rng, n_max=12, p_edge=0.3)
            s = to_system(nodes, edges)
            r = max_coherent_subgraph(s, "total_conf", "heuristic")
            assert not r.exact and brute_locally_coherent(edges, r.nodes)
            for extra in set(s.node_ids) - r.nodes:
                assert not brute_locally_coherent(edges, r.nodes | {extra})

    def test_auto_switches_on_limit(self):
        ids = [f"n{i:02d}" for i in range(12)]
        s = make(ids, [f"{ids[i]}-|{ids[i + 1]}" for i in range(11)])
        assert max_coherent_subgraph(s, mode="auto", exact_limit=12).exact
        assert not max_coherent_subgraph(s, mode="auto", exact_limit=11).exact

    def test_exact_handles_sixty_conflict_vertices(self):
        ids = [f"n{i:02d}" for i in range(60)]
        # a cycle of conflicts: optimum is every other node
        s = make(ids, [f"{ids[i]}-|{ids[(i + 1) % 60]}" for i in range(60)])
        r = max_coherent_subgraph(s, mode="exact")
        assert len(r.nodes) == 30 and is_locally_coherent(s, r.nodes)


class TestMaximalSets:
    def test_examples(self):
        assert enumerate_maximal_coherent(make("ab", ["a->b"])) == [frozenset("ab")]
        assert enumerate_maximal_coherent(make("abc", ["a-|b"])) == [frozenset("ac"), frozenset("bc")]
        tri = enumerate_maximal_coherent(make("abc", ["a-|b", "b-|c", "c-|a"]))
        assert tri == [frozenset("a"), frozenset("b"), frozenset("c")]

    def test_matches_exhaustive(self, rng):
        for _ in range(80):
            nodes, edges = random_raw(rng, n_max=8, p_edge=0.35)
            got = enumerate_maximal_coherent(to_system(nodes, edges))
            assert set(got) == brute_maximal_independent(nodes, edges)
            assert len(set(got)) == len(got) and not got.truncated

    def test_limit(self):
        # three disjoint conflict pairs give 2**3 maximal sets
        s = make("abcdef", ["a-|b", "c-|d", "e-|f"])
        assert len(enumerate_maximal_coherent(s)) == 8
        capped = enumerate_maximal_coherent(s, limit=5)
        assert len(capped) == 5 and capped.truncated
        with pytest.raises(InvalidParameter):
            enumerate_maximal_coherent(s, limit=0)


class TestIslands:
    def test_examples(self):
        s = make("abcde", ["a->b", "b->c", "d-|e"])
        assert coherent_islands(s) == [frozenset("abc")]
        assert coherent_islands(make("ab", ["a-|b", "b-|a"])) == []
        assert len(coherent_islands(make("abcd", ["a->b", "c->d"]))) == 2

    def test_min_size(self):
        s = make("abc", ["a->b"])
        assert coherent_islands(s) == [frozenset("ab")]
        assert coherent_islands(s, min_size=1) == [frozenset("ab"), frozenset("c")]

    def test_oracle_and_containment(self, rng):
        for _ in range(60):
            nodes, edges = random_raw(rng, n_max=8)
            s = to_system(nodes, edges)
            contested = {x for a, b, k, _ in edges if k == "contradiction" for x in (a, b)}
            comps = bfs_components([n[0] for n in nodes],
                                   [(a, b) for a, b, k, _ in edges if k != "contradiction"])
            expected = {c for c in comps if len(c) >= 2 and not c & contested}
            got = coherent_islands(s)
            assert set(got) == expected
            maximal = enumerate_maximal_coherent(s)
            for isl in got:
                assert all(isl <= m for m in maximal)


@settings(max_examples=40)
@given(systems(max_nodes=10))
def test_exact_never_worse_than_heuristic(s):
    for obj in OBJECTIVES:
        ex = max_coherent_subgraph(s, obj, "exact")
        he = max_coherent_subgraph(s, obj, "heuristic")
        assert ex.score >= he.score - 1e-12
