import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from oracles import KINDS, to_system  # noqa: E402

from beliefgraph import BeliefNode, Edge, build_system, load_example  # noqa: E402

# wall-clock deadlines are meaningless on a shared single-core runner
settings.register_profile("ci", deadline=None)
settings.load_profile("ci")

_ID = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True)
_SCORE = st.floats(0.0, 1.0, allow_nan=False)
_WEIGHT = st.floats(1e-3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def raw_graphs(draw, max_nodes=8, kinds=KINDS):
    ids = draw(st.lists(_ID, min_size=0, max_size=max_nodes, unique=True))
    nodes = [(i, draw(_SCORE), draw(_SCORE)) for i in ids]
    pairs = [(a, b) for a in ids for b in ids if a != b]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * len(ids))) if pairs else []
    edges = [(a, b, draw(st.sampled_from(kinds)), draw(_WEIGHT)) for a, b in chosen]
    return nodes, edges


@st.composite
def systems(draw, max_nodes=8, kinds=KINDS):
    nodes, edges = draw(raw_graphs(max_nodes, kinds))
    return to_system(nodes, edges)


def make(nodes, edges=(), **scores):
    """Small builder: ``make("abc", ["a->b", "b-|c"], a=(0.9, 0.2))``."""
    arrows = {"->": "support", "~>": "qualification", "-|": "contradiction"}
    bn = []
    for n in nodes:
        cr, cf = scores.get(n, (0.5, 0.5))
        bn.append(BeliefNode(n, "", cr, cf))
    es = []
    for item in edges:
        w = 1.0
        if "@" in item:
            item, w = item.split("@")
            w = float(w)
        for arrow, kind in arrows.items():
            if arrow in item:
                a, b = item.split(arrow)
                es.append(Edge(a.strip(), b.strip(), kind, w))
                break
    return build_system(bn, es)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def covid():
    return load_example().system


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
