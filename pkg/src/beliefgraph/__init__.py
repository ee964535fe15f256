"""Typed belief graphs with credibility and confidence scores.

Build a :class:`BeliefSystem` from nodes and edges (or parse one from BGL or
JSON), then run the structural diagnostics in :mod:`beliefgraph.coherence`,
:mod:`beliefgraph.propagation`, :mod:`beliefgraph.extraction` and
:mod:`beliefgraph.diagnostics`.
"""

from __future__ import annotations

__version__ = "0.1.0"

from importlib import resources as _resources

from .coherence import (
    CoherenceReport,
    Enumeration,
    SupportDeficit,
    coherence_report,
    find_contradiction_chains,
    find_contradiction_cycles,
    is_globally_coherent,
    is_locally_coherent,
    tension_zones,
    undermined_set,
    undersupported_beliefs,
)
from .config import PropagationConfig, Thresholds
from .core import BeliefNode, BeliefSystem, Edge, EdgeKind, build_system, induced_subgraph, neighbors
from .diagnostics import (
    DivergenceClass,
    DivergenceEntry,
    GraphReport,
    Violation,
    ViolationKind,
    audit_confidence_consistency,
    divergence_map,
    graph_report,
)
from .exceptions import *  # noqa: F401,F403
from .extraction import (
    ConflictGraph,
    ExtractionResult,
    coherent_islands,
    conflict_graph,
    enumerate_maximal_coherent,
    max_coherent_subgraph,
)
from .format import from_json, parse_bgl, render_bgl, to_dot, to_graphml, to_json
from .propagation import PropagationResult, propagate_confidence


def load_example(name: str = "covid_vaccine"):
    """Parse one of the bundled example documents and return its report."""
    from .format import parse_bgl as _parse

    text = _resources.files(__package__).joinpath("data", f"{name}.bgl").read_text(encoding="utf-8")
    return _parse(text)
