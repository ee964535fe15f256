import itertools
import json

import pytest
from conftest import make, systems
from hypothesis import given, settings

from beliefgraph import (
    DivergenceClass,
    InvalidParameter,
    Thresholds,
    ViolationKind,
    audit_confidence_consistency,
    divergence_map,
    graph_report,
)
from beliefgraph.diagnostics import classify, render_text

CU, DR, AL, IN = (DivergenceClass.CREDIBLE_UNSUPPORTED, DivergenceClass.DUBIOUS_REINFORCED,
                  DivergenceClass.ALIGNED, DivergenceClass.INDETERMINATE)
TH = Thresholds()


class TestClassify:
    def test_examples(self):
        assert classify(0.9, 0.2, TH) is CU
        assert classify(0.2, 0.9, TH) is DR
        assert classify(0.8, 0.8, TH) is AL

    def test_boundaries_are_inclusive(self):
        assert classify(0.7, 0.3, TH) is CU
        assert classify(0.3, 0.7, TH) is DR

    def test_indeterminate(self):
        assert classify(0.65, 0.0, TH) is IN
        assert classify(0.5, 0.5, TH) is AL

    def test_totality_on_grid(self):
        grid = [i / 20 for i in range(21)]
        for cr, cf in itertools.product(grid, grid):
            c = classify(cr, cf, TH)
            assert c in DivergenceClass
            if c is AL:
                assert abs(cf - cr) <= TH.tau_high - TH.tau_low

    def test_widening_band_only_relaxes_divergent_labels(self):
        narrow, wide = Thresholds(0.8, 0.2), Thresholds(0.7, 0.3)
        grid = [i / 20 for i in range(21)]
        for cr, cf in itertools.product(grid, grid):
            if classify(cr, cf, narrow) is CU:
                assert classify(cr, cf, wide) is CU
            if classify(cr, cf, narrow) is DR:
                assert classify(cr, cf, wide) is DR

    def test_threshold_validation(self):
        with pytest.raises(InvalidParameter):
            Thresholds(tau_high=0.3, tau_low=0.7)
        with pytest.raises(InvalidParameter):
            Thresholds(sigma_strong=0)


class TestDivergenceMap:
    def test_sorted_by_magnitude_then_id(self):
        s = make("abcd", a=(0.9, 0.2), b=(0.2, 0.9), c=(0.5, 0.5), d=(0.1, 0.3))
        entries = divergence_map(s, TH)
        assert [e.node for e in entries] == ["a", "b", "d", "c"]
        assert entries[0].delta == pytest.approx(-0.7)
        assert entries[0].to_dict()["class"] == "CredibleUnsupported"

    def test_propagated_source(self):
        s = make("ab", ["a->b"], a=(0.9, 0.9), b=(0.9, 0.1))
        by = {e.node: e for e in divergence_map(s, TH, "propagated")}
        assert by["b"].conf == pytest.approx(0.9) and by["b"].cls is AL
        assert {e.node: e.cls for e in divergence_map(s, TH)}["b"] is CU

    def test_bad_source(self):
        with pytest.raises(ValueError):
            divergence_map(make("a"), TH, "guessed")

    @given(systems())
    def test_one_entry_per_node(self, s):
        entries = divergence_map(s, TH)
        assert sorted(e.node for e in entries) == list(s.node_ids)
        mags = [abs(e.delta) for e in entries]
        assert mags == sorted(mags, reverse=True)


class TestAudit:
    def test_undermined_high_conf(self):
        s = make("ct", ["c-|t"], t=(0.5, 0.9))
        (v,) = audit_confidence_consistency(s, TH)
        assert v.kind is ViolationKind.UNDERMINED_HIGH_CONF and v.node == "t"

    def test_starved_low_conf(self):
        s = make("abn", ["a->n", "b->n"], a=(0.5, 0.8), b=(0.5, 0.8), n=(0.5, 0.1))
        (v,) = audit_confidence_consistency(s, TH)
        assert v.kind is ViolationKind.STARVED_LOW_CONF and v.node == "n"
        assert v.support_mass == pytest.approx(1.6, abs=1e-15)

    def test_clean_graph(self):
        assert audit_confidence_consistency(make("abc", ["a->b", "b->c"]), TH) == []

    def test_undermined_supporters_do_not_count(self):
        s = make("xabn", ["x-|a", "a->n", "b->n"], a=(0.5, 0.8), b=(0.5, 0.8), n=(0.5, 0.1))
        kinds = [v.kind for v in audit_confidence_consistency(s, TH)]
        assert kinds == [ViolationKind.UNDERMINED_HIGH_CONF]

    def test_mass_just_below_sigma(self):
        s = make("an", ["a->n@1.2"], a=(0.5, 0.8), n=(0.5, 0.1))
        assert audit_confidence_consistency(s, TH) == []  # 0.96 < 1.0
        assert len(audit_confidence_consistency(s, Thresholds(sigma_strong=0.96))) == 1


class TestReport:
    def test_empty(self):
        r = graph_report(make(""))
        d = r.to_dict()
        assert d["summary"]["nodes"] == 0 and d["summary"]["components"] == 0
        assert d["coherence"]["tension_zones"] == [] and d["islands"] == []
        assert d["divergence"]["assigned"] == []

    def test_two_components(self):
        assert graph_report(make("abcd", ["a->b", "c->d"])).summary["components"] == 2

    def test_example_corpus(self, covid):
        r = graph_report(covid)
        zones = [z.node_ids for z in r.coherence.tension_zones]
        assert zones == [("natural_immunity", "risk_benefit"), ("pharma_distrust", "regulator_approval"),
                         ("vaccines_dangerous", "vaccines_safe")]
        assert r.coherence.undermined == {"regulator_approval", "risk_benefit", "vaccines_safe"}
        assert len(r.coherence.contradiction_cycles) == 0
        assert len(r.coherence.contradiction_chains) == 4
        assert [(v.kind.value, v.node) for v in r.consistency_violations] == [
            ("UnderminedHighConf", "regulator_approval"), ("UnderminedHighConf", "risk_benefit")]
        divergent = [(e.node, e.cls.value) for e in r.divergence_assigned if e.cls in (CU, DR)]
        assert divergent == [("vaccines_dangerous", "DubiousReinforced"), ("vaccines_safe", "CredibleUnsupported"),
                             ("social_posts", "DubiousReinforced"), ("pharma_distrust", "DubiousReinforced"),
                             ("friend_anecdotes", "DubiousReinforced")]
        p = r.propagation
        assert p.converged and p.damping == 1.0 and p.iterations == 3
        assert p.conf_out["vaccines_safe"] == pytest.approx(0.85, abs=1e-12)
        assert p.conf_out["vaccines_dangerous"] == pytest.approx(1.38 / 1.8, abs=1e-12)
        assert [sorted(i) for i in r.islands] == [["hand_hygiene", "masks_help"]]
        assert [len(c) for c in r.components] == [10, 2]

    def test_threads_do_not_change_result(self, covid):
        a = graph_report(covid).to_json()
        b = graph_report(covid, threads=4).to_json()
        assert a == b

    def test_skip_cycles(self, covid):
        d = graph_report(covid, include_cycles=False).to_dict()
        assert d["coherence"]["contradiction_cycles"]["computed"] is False

    def test_render_text(self, covid):
        txt = render_text(graph_report(covid))
        assert txt.startswith("12 nodes, 13 edges")
        assert "tension zones: 3" in txt

    @settings(max_examples=25)
    @given(systems())
    def test_json_is_deterministic(self, s):
        a, b = graph_report(s).to_json(), graph_report(s).to_json()
        assert a == b
        json.loads(a)
