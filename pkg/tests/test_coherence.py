import itertools
import random

import pytest
from conftest import make, systems
from hypothesis import given, settings
from oracles import (
    bfs_components,
    brute_locally_coherent,
    brute_maximal_chains,
    brute_simple_cycles,
    cycle_has_contradiction,
    naive_undermined,
    random_raw,
    subsets,
    to_system,
)

from beliefgraph import (
    InvalidParameter,
    SupportDeficit,
    Thresholds,
    UnknownNode,
    coherence_report,
    find_contradiction_chains,
    find_contradiction_cycles,
    is_globally_coherent,
    is_locally_coherent,
    tension_zones,
    undermined_set,
    undersupported_beliefs,
)


class TestLocalCoherence:
    def test_examples(self):
        assert is_locally_coherent(make("a"), [])
        assert is_locally_coherent(make("ab", ["a->b"]), {"a", "b"})
        s = make("abc", ["a-|b", "b->c"])
        assert not is_locally_coherent(s, {"a", "b", "c"})
        assert is_locally_coherent(s, {"a", "c"})

    def test_unknown_node(self):
        with pytest.raises(UnknownNode):
            is_locally_coherent(make("a"), {"zz"})

    def test_matches_brute_force_small(self, rng):
        for _ in range(60):
            nodes, edges = random_raw(rng, n_max=6)
            s = to_system(nodes, edges)
            for sub in subsets([n[0] for n in nodes]):
                assert is_locally_coherent(s, sub) == brute_locally_coherent(edges, sub)

    @given(systems())
    def test_downward_closed(self, s):
        ids = s.node_ids
        for sub in subsets(ids[:6]):
            if is_locally_coherent(s, sub):
                for k in range(len(sub)):
                    assert is_locally_coherent(s, sub[:k] + sub[k + 1:])


class TestGlobalCoherence:
    def test_examples(self):
        assert is_globally_coherent(make(""))
        assert is_globally_coherent(make("abc", ["a->b", "b->c", "a->c"]))
        assert not is_globally_coherent(make("abc", ["a->b", "b-|c"]))

    @given(systems())
    def test_equivalence_law(self, s):
        no_contra = all(e.kind.value != "contradiction" for e in s.edges)
        assert is_globally_coherent(s) == is_locally_coherent(s, s.node_ids) == no_contra


class TestUndermined:
    def test_examples(self):
        assert undermined_set(make("ab", ["a->b"])) == frozenset()
        assert undermined_set(make("cxy", ["c-|x", "x->y"])) == {"x", "y"}
        assert undermined_set(make("cxz", ["c-|x", "x~>z"])) == {"x"}
        assert undermined_set(make("cxz", ["c-|x", "x~>z"]), through_qualification=True) == {"x", "z"}

    def test_matches_naive_fixpoint(self, rng):
        for _ in range(200):
            nodes, edges = random_raw(rng, n_max=10)
            s = to_system(nodes, edges)
            assert undermined_set(s) == naive_undermined(nodes, edges)
            assert undermined_set(s, through_qualification=True) == naive_undermined(
                nodes, edges, ("support", "qualification"))

    @given(systems())
    def test_closed_under_support(self, s):
        u = undermined_set(s)
        for e in s.edges:
            if e.kind.value == "contradiction":
                assert e.target in u
            if e.kind.value == "support" and e.source in u:
                assert e.target in u


class TestCycles:
    def test_examples(self):
        assert find_contradiction_cycles(make("abc", ["a->b", "b-|c"])) == []
        assert find_contradiction_cycles(make("ab", ["a-|b", "b->a"])) == [("a", "b")]
        assert find_contradiction_cycles(make("abc", ["a->b", "b->c", "c->a"])) == []

    def test_matches_exhaustive_enumeration(self, rng):
        for _ in range(80):
            nodes, edges = random_raw(rng, n_max=6, p_edge=0.35)
            s = to_system(nodes, edges)
            expected = {c for c in brute_simple_cycles(nodes, edges) if cycle_has_contradiction(c, edges)}
            got = find_contradiction_cycles(s)
            assert set(got) == expected and len(got) == len(expected)
            assert not got.truncated

    def test_limit_and_truncation(self):
        ids = [f"n{i}" for i in range(7)]
        # complete digraph: many cycles, all containing some contradiction edge
        edges = [f"{a}-|{b}" if a < b else f"{a}->{b}" for a, b in itertools.permutations(ids, 2)]
        s = make(ids, edges)
        full = find_contradiction_cycles(s)
        assert not full.truncated and len(full) > 50
        capped = find_contradiction_cycles(s, limit=50)
        assert capped.truncated and len(capped) == 50
        assert set(capped) <= set(full)
        exact = find_contradiction_cycles(s, limit=len(full))
        assert not exact.truncated and len(exact) == len(full)

    def test_bad_limit(self):
        with pytest.raises(InvalidParameter):
            find_contradiction_cycles(make("a"), limit=0)


class TestChains:
    def test_examples(self):
        assert find_contradiction_chains(make("ab", ["a-|b"])) == [("a", "b")]
        assert find_contradiction_chains(make("abc", ["a->b", "b-|c"])) == [("a", "b", "c")]
        assert find_contradiction_chains(make("abc", ["a->b", "b->c"])) == []

    @pytest.mark.parametrize("max_len", [2, 3, 4, 5])
    def test_matches_exhaustive_paths(self, rng, max_len):
        for _ in range(60):
            nodes, edges = random_raw(rng, n_max=6, p_edge=0.3)
            s = to_system(nodes, edges)
            got = find_contradiction_chains(s, max_len=max_len)
            expected = brute_maximal_chains(nodes, edges, max_len)
            assert len(got) == len(expected) and set(got) == expected

    def test_limit(self):
        s = make([f"n{i}" for i in range(6)],
                 [f"n{i}-|n{j}" for i in range(6) for j in range(6) if i != j])
        full = find_contradiction_chains(s, max_len=3)
        capped = find_contradiction_chains(s, max_len=3, limit=10)
        assert len(capped) == 10 and capped.truncated and not full.truncated

    def test_bad_max_len(self):
        with pytest.raises(InvalidParameter):
            find_contradiction_chains(make("a"), max_len=1)


class TestUndersupported:
    th = Thresholds()

    def test_examples(self):
        assert undersupported_beliefs(make("n", n=(0.5, 0.9)), self.th) == [("n", SupportDeficit.NO_SUPPORT)]
        s = make("cun", ["c-|u", "u->n"], n=(0.5, 0.9))
        assert undersupported_beliefs(s, self.th) == [("n", SupportDeficit.INCOHERENT_SUPPORT)]
        assert undersupported_beliefs(make("n", n=(0.5, 0.3)), self.th) == []

    def test_one_good_supporter_is_enough(self):
        s = make("cugn", ["c-|u", "u->n", "g->n"], n=(0.5, 0.9))
        assert undersupported_beliefs(s, self.th) == []

    def test_qualification_is_not_support(self):
        s = make("qn", ["q~>n"], n=(0.5, 0.9))
        assert undersupported_beliefs(s, self.th) == [("n", SupportDeficit.NO_SUPPORT)]


class TestTensionZones:
    def test_examples(self):
        assert tension_zones(make("ab", ["a->b"])) == []
        zones = tension_zones(make("abcd", ["a-|b", "c-|d"]))
        assert [z.node_ids for z in zones] == [("a", "b"), ("c", "d")]
        (z,) = tension_zones(make("abc", ["a-|b", "b-|c"]))
        assert z.node_ids == ("a", "b", "c")

    def test_zone_keeps_induced_edges(self):
        (z,) = tension_zones(make("abc", ["a-|b", "b->a", "b->c"]))
        assert {e.pair for e in z.edges} == {("a", "b"), ("b", "a")}

    def test_matches_component_oracle(self):
        r = random.Random(5)
        for _ in range(100):
            nodes, edges = random_raw(r, n_max=9)
            contra = [(a, b) for a, b, k, _ in edges if k == "contradiction"]
            ends = sorted({x for p in contra for x in p})
            expected = {c for c in bfs_components(ends, contra)}
            got = {frozenset(z.node_ids) for z in tension_zones(to_system(nodes, edges))}
            assert got == expected


@settings(max_examples=30)
@given(systems())
def test_report_is_consistent(s):
    r = coherence_report(s)
    assert r.globally_coherent == is_globally_coherent(s)
    assert r.undermined == undermined_set(s)
    d = r.to_dict()
    assert d["contradiction_cycles"]["computed"] is True
