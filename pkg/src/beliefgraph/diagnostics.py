"""Credibility/confidence diagnostics and whole-graph reports.

Credibility measures trust in a belief's source, confidence measures its
structural support. The divergence map classifies every node by how the two
relate; the consistency audit flags confident beliefs that are undermined and
unconfident beliefs that enjoy strong, consistent support.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

from ._graphutil import weak_components
from .coherence import CoherenceReport, coherence_report, undermined_set
from .config import PropagationConfig, Thresholds
from .core import BeliefSystem, EdgeKind, NodeId
from .extraction import coherent_islands
from .propagation import PropagationResult, propagate_confidence

__all__ = [
    "Thresholds",
    "DivergenceClass",
    "DivergenceEntry",
    "Violation",
    "ViolationKind",
    "GraphReport",
    "classify",
    "divergence_map",
    "audit_confidence_consistency",
    "graph_report",
    "render_text",
]

ConfSource = Literal["assigned", "propagated"]


class DivergenceClass(str, enum.Enum):
    CREDIBLE_UNSUPPORTED = "CredibleUnsupported"
    DUBIOUS_REINFORCED = "DubiousReinforced"
    ALIGNED = "Aligned"
    INDETERMINATE = "Indeterminate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DivergenceEntry:
    node: NodeId
    cred: float
    conf: float
    delta: float
    cls: DivergenceClass

    def to_dict(self) -> dict:
        return {"node": self.node, "cred": self.cred, "conf": self.conf,
                "delta": self.delta, "class": self.cls.value}


def classify(cred: float, conf: float, th: Thresholds) -> DivergenceClass:
    """Divergence class of one ``(cred, conf)`` pair.

    High credibility with low confidence is ``CredibleUnsupported``; the
    mirror case is ``DubiousReinforced``. Otherwise the pair is ``Aligned``
    when the two scores differ by no more than ``tau_high - tau_low``, and
    ``Indeterminate`` when they differ by more.
    """
    if cred >= th.tau_high and conf <= th.tau_low:
        return DivergenceClass.CREDIBLE_UNSUPPORTED
    if cred <= th.tau_low and conf >= th.tau_high:
        return DivergenceClass.DUBIOUS_REINFORCED
    if abs(conf - cred) <= th.tau_high - th.tau_low:
        return DivergenceClass.ALIGNED
    return DivergenceClass.INDETERMINATE


def divergence_map(sys: BeliefSystem, th: Thresholds | None = None,
                   conf_source: ConfSource = "assigned", *,
                   cfg: PropagationConfig | None = None,
                   propagated: PropagationResult | None = None) -> list[DivergenceEntry]:
    """One entry per node, largest ``|conf - cred|`` first, ties by node id.

    With ``conf_source="propagated"`` the confidence used is the output of
    :func:`propagate_confidence` (pass ``propagated`` to reuse a result).
    """
    th = th or Thresholds()
    if conf_source == "assigned":
        conf = sys.conf()
    elif conf_source == "propagated":
        conf = dict((propagated or propagate_confidence(sys, cfg)).conf_out)
    else:
        raise ValueError(f"conf_source must be 'assigned' or 'propagated', got {conf_source!r}")
    entries = []
    for n, node in sys.nodes.items():
        c = conf[n]
        entries.append(DivergenceEntry(n, node.cred, c, c - node.cred, classify(node.cred, c, th)))
    entries.sort(key=lambda e: (-abs(e.delta), e.node))
    return entries


class ViolationKind(str, enum.Enum):
    UNDERMINED_HIGH_CONF = "UnderminedHighConf"
    STARVED_LOW_CONF = "StarvedLowConf"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    node: NodeId
    conf: float
    support_mass: float | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "node": self.node, "conf": self.conf}
        if self.support_mass is not None:
            out["support_mass"] = self.support_mass
        return out


def audit_confidence_consistency(sys: BeliefSystem, th: Thresholds | None = None,
                                 undermined: frozenset[NodeId] | None = None) -> list[Violation]:
    """Check that confidence agrees with structure.

    Flags ``UnderminedHighConf`` for nodes with ``conf >= tau_high`` in the
    undermined set, and ``StarvedLowConf`` for nodes with ``conf <= tau_low``
    whose support mass reaches ``sigma_strong``. Support mass sums
    ``w * conf`` over incoming support from supporters that are themselves
    highly confident and not undermined.

    An empty list means the system is confidence-consistent under ``th``.
    """
    th = th or Thresholds()
    u = undermined if undermined is not None else undermined_set(sys)
    high, starved = [], []
    for n, node in sys.nodes.items():
        if node.conf >= th.tau_high and n in u:
            high.append(Violation(ViolationKind.UNDERMINED_HIGH_CONF, n, node.conf))
        elif node.conf <= th.tau_low:
            terms = [
                e.weight * sys.nodes[e.source].conf
                for e in sys.in_edges(n)
                if e.kind is EdgeKind.SUPPORT
                and sys.nodes[e.source].conf >= th.tau_high
                and e.source not in u
            ]
            mass = math.fsum(terms)
            if terms and mass >= th.sigma_strong:
                starved.append(Violation(ViolationKind.STARVED_LOW_CONF, n, node.conf, mass))
    return high + starved


def _histogram(values) -> list[int]:
    bins = [0] * 10
    for v in values:
        # the small offset keeps values like 0.3 out of the lower bin after scaling
        bins[min(int(v * 10 + 1e-9), 9)] += 1
    return bins


@dataclass(frozen=True)
class GraphReport:
    thresholds: Thresholds
    propagation_config: PropagationConfig
    coherence: CoherenceReport
    propagation: PropagationResult
    divergence_assigned: tuple[DivergenceEntry, ...]
    divergence_propagated: tuple[DivergenceEntry, ...]
    consistency_violations: tuple[Violation, ...]
    islands: tuple[frozenset[NodeId], ...]
    components: tuple[tuple[NodeId, ...], ...]
    summary: dict

    def to_dict(self) -> dict:
        return {
            "thresholds": self.thresholds.to_dict(),
            "propagation_config": self.propagation_config.to_dict(),
            "summary": self.summary,
            "coherence": self.coherence.to_dict(),
            "propagation": self.propagation.to_dict(),
            "divergence": {
                "assigned": [e.to_dict() for e in self.divergence_assigned],
                "propagated": [e.to_dict() for e in self.divergence_propagated],
            },
            "consistency": {
                "consistent": not self.consistency_violations,
                "support_mass": "sum of w*conf over support edges from supporters with "
                                "conf >= tau_high that are not undermined",
            },
            "consistency_violations": [v.to_dict() for v in self.consistency_violations],
            "islands": [sorted(i) for i in self.islands],
            "components": {
                "count": len(self.components),
                "sizes": [len(c) for c in self.components],
            },
        }

    def to_json(self) -> str:
        # compact keeps the C encoder in play; large reports are otherwise slow to write
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def graph_report(sys: BeliefSystem, th: Thresholds | None = None,
                 cfg: PropagationConfig | None = None, *,
                 include_cycles: bool = True,
                 max_cycles: int = 10_000,
                 chain_max_len: int = 5,
                 max_chains: int = 10_000,
                 threads: int = 1) -> GraphReport:
    """Assemble every diagnostic for one system into a single report.

    ``threads > 1`` runs the independent sub-analyses concurrently; the result
    is identical either way.
    """
    th = th or Thresholds()
    cfg = cfg or PropagationConfig()

    def coh():
        return coherence_report(sys, th, include_cycles=include_cycles, max_cycles=max_cycles,
                                chain_max_len=chain_max_len, max_chains=max_chains)

    def prop():
        return propagate_confidence(sys, cfg)

    def isl():
        return tuple(coherent_islands(sys))

    def comps():
        return tuple(tuple(c) for c in weak_components(sys.node_ids, (e.pair for e in sys.edges)))

    jobs = (coh, prop, isl, comps)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            coherence, propagation, islands, components = [f.result() for f in [pool.submit(j) for j in jobs]]
    else:
        coherence, propagation, islands, components = (j() for j in jobs)

    kinds = {k.value: 0 for k in EdgeKind}
    for e in sys.edges:
        kinds[e.kind.value] += 1
    summary = {
        "nodes": len(sys.nodes),
        "edges": len(sys.edges),
        "edges_by_kind": kinds,
        "histogram_bin_width": 0.1,
        "cred_histogram": _histogram(n.cred for n in sys.nodes.values()),
        "conf_histogram": _histogram(n.conf for n in sys.nodes.values()),
        "propagated_conf_histogram": _histogram(propagation.conf_out.values()),
        "tension_zones": len(coherence.tension_zones),
        "undermined": len(coherence.undermined),
        "islands": len(islands),
        "components": len(components),
    }
    return GraphReport(
        thresholds=th,
        propagation_config=cfg,
        coherence=coherence,
        propagation=propagation,
        divergence_assigned=tuple(divergence_map(sys, th, "assigned")),
        divergence_propagated=tuple(divergence_map(sys, th, "propagated", propagated=propagation)),
        consistency_violations=tuple(audit_confidence_consistency(sys, th, coherence.undermined)),
        islands=islands,
        components=components,
        summary=summary,
    )


def render_text(report: GraphReport) -> str:
    """Human-readable summary of a report."""
    s = report.summary
    c = report.coherence
    th = report.thresholds
    p = report.propagation
    k = s["edges_by_kind"]
    lines = [
        f"{s['nodes']} nodes, {s['edges']} edges "
        f"({k['support']} support, {k['qualification']} qualification, {k['contradiction']} contradiction)",
        f"thresholds: tau_high={th.tau_high} tau_low={th.tau_low} sigma_strong={th.sigma_strong}",
        f"globally coherent: {'yes' if c.globally_coherent else 'no'}",
        f"tension zones: {len(c.tension_zones)}",
    ]
    for z in c.tension_zones:
        lines.append(f"  {{{', '.join(z.node_ids)}}}")
    cyc = "not computed" if not c.cycles_computed else (
        f"{len(c.contradiction_cycles)}" + (" (truncated)" if c.contradiction_cycles.truncated else ""))
    lines.append(f"contradiction cycles: {cyc}")
    lines.append(f"contradiction chains: {len(c.contradiction_chains)}"
                 + (" (truncated)" if c.contradiction_chains.truncated else ""))
    lines.append(f"undermined: {', '.join(sorted(c.undermined)) or '-'}")
    lines.append("undersupported: " + (", ".join(f"{n} ({r})" for n, r in c.undersupported) or "-"))
    lines.append("confidence-consistency violations: " + (
        ", ".join(f"{v.node} ({v.kind})" for v in report.consistency_violations) or "-"))
    divergent = [e for e in report.divergence_assigned
                 if e.cls in (DivergenceClass.CREDIBLE_UNSUPPORTED, DivergenceClass.DUBIOUS_REINFORCED)]
    lines.append("divergent (assigned conf): " + (
        ", ".join(f"{e.node} ({e.cls}, delta={e.delta:+.2f})" for e in divergent) or "-"))
    lines.append(f"propagation: {'converged' if p.converged else 'did not converge'} after "
                 f"{p.iterations} iterations (residual {p.residual:.3g}, damping {p.damping})")
    lines.append(f"coherent islands: {len(report.islands)}")
    for isl in report.islands:
        lines.append(f"  {{{', '.join(sorted(isl))}}}")
    lines.append(f"weakly connected components: {len(report.components)} "
                 f"(sizes {', '.join(str(len(x)) for x in report.components) or '-'})")
    return "\n".join(lines) + "\n"
