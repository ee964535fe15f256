"""DOT and GraphML exporters.

Both encode the same attributes: edge kind drives the line style (support
solid, qualification dashed, contradiction bold red) and node labels carry
the id with both scores. An optional :class:`DiagnosticsOverlay` tags nodes
with diagnostic classes such as ``undermined`` or ``divergent``.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Mapping

from ..core import BeliefSystem, EdgeKind

__all__ = ["DiagnosticsOverlay", "to_dot", "to_graphml", "EDGE_STYLE"]

EDGE_STYLE: dict[EdgeKind, dict[str, str]] = {
    EdgeKind.SUPPORT: {"style": "solid", "color": "black"},
    EdgeKind.QUALIFICATION: {"style": "dashed", "color": "gray40"},
    EdgeKind.CONTRADICTION: {"style": "bold", "color": "red"},
}

# first matching class wins the fill colour
_FILL = {
    "undermined": "mistyrose",
    "undersupported": "lightyellow",
    "divergent": "lightblue",
    "inconsistent": "orange",
    "tension": "lavender",
}

_DIVERGENT = {"CredibleUnsupported", "DubiousReinforced"}


@dataclass(frozen=True)
class DiagnosticsOverlay:
    """Per-node diagnostic classes used to decorate exports."""

    classes: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def of(self, node_id: str) -> tuple[str, ...]:
        return tuple(self.classes.get(node_id, ()))

    @classmethod
    def from_report(cls, report: Mapping) -> "DiagnosticsOverlay":
        """Build an overlay from a serialized graph report.

        A plain ``{"classes": {node: [class, ...]}}`` mapping is accepted too.
        """
        if "classes" in report and "coherence" not in report:
            return cls({k: tuple(v) for k, v in report["classes"].items()})
        tags: dict[str, list[str]] = {}

        def tag(node, name):
            if name not in tags.setdefault(node, []):
                tags[node].append(name)

        coherence = report.get("coherence", {})
        for n in coherence.get("undermined", []):
            tag(n, "undermined")
        for item in coherence.get("undersupported", []):
            tag(item["node"], "undersupported")
        for entry in report.get("divergence", {}).get("assigned", []):
            if entry["class"] in _DIVERGENT:
                tag(entry["node"], "divergent")
        for v in report.get("consistency_violations", []):
            tag(v["node"], "inconsistent")
        for zone in coherence.get("tension_zones", []):
            for n in zone["nodes"]:
                tag(n, "tension")
        return cls({k: tuple(v) for k, v in sorted(tags.items())})


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _score(x: float) -> str:
    return f"{x:.3g}"


def to_dot(sys: BeliefSystem, overlay: DiagnosticsOverlay | None = None) -> str:
    lines = [
        "digraph belief {",
        "  graph [rankdir=LR];",
        '  node [shape=box, style="rounded"];',
    ]
    for node in sys.nodes.values():
        attrs = [
            f"label={_q(f'{node.id}' + chr(10) + f'cred={_score(node.cred)} conf={_score(node.conf)}')}",
            f"tooltip={_q(node.content)}",
            f"cred={node.cred!r}",
            f"conf={node.conf!r}",
        ]
        classes = overlay.of(node.id) if overlay else ()
        if classes:
            attrs.append(f"class={_q(' '.join(classes))}")
            fill = next((_FILL[c] for c in classes if c in _FILL), None)
            if fill:
                attrs.append('style="rounded,filled"')
                attrs.append(f"fillcolor={fill}")
        lines.append(f"  {_q(node.id)} [{', '.join(attrs)}];")
    for e in sys.edges:
        st = EDGE_STYLE[e.kind]
        attrs = [f"kind={e.kind.value}", f"style={st['style']}", f"color={st['color']}", f"w={e.weight!r}"]
        lines.append(f"  {_q(e.source)} -> {_q(e.target)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_NS = "http://graphml.graphdrawing.org/xmlns"

_NODE_KEYS = [("label", "string"), ("text", "string"), ("cred", "double"), ("conf", "double"), ("class", "string")]
_EDGE_KEYS = [("kind", "string"), ("weight", "double"), ("style", "string"), ("color", "string")]


def to_graphml(sys: BeliefSystem, overlay: DiagnosticsOverlay | None = None) -> str:
    ET.register_namespace("", _NS)
    root = ET.Element(f"{{{_NS}}}graphml")
    for domain, keys in (("node", _NODE_KEYS), ("edge", _EDGE_KEYS)):
        for name, typ in keys:
            ET.SubElement(root, f"{{{_NS}}}key", {
                "id": f"{domain[0]}_{name}", "for": domain, "attr.name": name, "attr.type": typ,
            })
    graph = ET.SubElement(root, f"{{{_NS}}}graph", {"id": "belief", "edgedefault": "directed"})

    def data(parent, key, value):
        d = ET.SubElement(parent, f"{{{_NS}}}data", {"key": key})
        d.text = value

    for node in sys.nodes.values():
        el = ET.SubElement(graph, f"{{{_NS}}}node", {"id": node.id})
        data(el, "n_label", f"{node.id}\ncred={_score(node.cred)} conf={_score(node.conf)}")
        data(el, "n_text", node.content)
        data(el, "n_cred", repr(node.cred))
        data(el, "n_conf", repr(node.conf))
        classes = overlay.of(node.id) if overlay else ()
        if classes:
            data(el, "n_class", " ".join(classes))
    for i, e in enumerate(sys.edges):
        el = ET.SubElement(graph, f"{{{_NS}}}edge", {"id": f"e{i}", "source": e.source, "target": e.target})
        st = EDGE_STYLE[e.kind]
        data(el, "e_kind", e.kind.value)
        data(el, "e_weight", repr(e.weight))
        data(el, "e_style", st["style"])
        data(el, "e_color", st["color"])
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"
