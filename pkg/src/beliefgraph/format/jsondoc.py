"""Canonical JSON document format.

Layout::

    {
      "nodes": [{"id": ..., "text": ..., "cred": ..., "conf": ...}, ...],
      "edges": [{"from": ..., "to": ..., "kind": "support|qualification|contradiction",
                 "weight": ...}, ...],
      "metadata": {"key": "value", ...}
    }

Output is emitted with sorted keys so equal systems serialize to identical
bytes.
"""

from __future__ import annotations

import json
import math
from typing import Any

from ..core import BeliefNode, BeliefSystem, Edge, EdgeKind, build_system
from ..exceptions import SchemaError
from .bgl import DEFAULT_SCORE, DEFAULT_WEIGHT, ParseReport, ParseWarning

__all__ = ["to_json", "from_json", "parse_json", "system_to_dict", "system_from_dict"]

_NODE_KEYS = {"id", "text", "cred", "conf"}
_EDGE_KEYS = {"from", "to", "kind", "weight"}
_KINDS = {k.value: k for k in EdgeKind}


def system_to_dict(sys: BeliefSystem) -> dict:
    return {
        "nodes": [
            {"id": n.id, "text": n.content, "cred": n.cred, "conf": n.conf}
            for n in sys.nodes.values()
        ],
        "edges": [
            {"from": e.source, "to": e.target, "kind": e.kind.value, "weight": e.weight}
            for e in sys.edges
        ],
        "metadata": dict(sys.metadata),
    }


def to_json(sys: BeliefSystem) -> str:
    return json.dumps(system_to_dict(sys), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check_keys(obj: Any, path: str, allowed: set[str], required: tuple[str, ...]) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    extra = obj.keys() - allowed
    if extra:
        raise SchemaError(f"{path}.{min(extra)}", "unknown field")
    for key in required:
        if key not in obj:
            raise SchemaError(f"{path}.{key}", "required field missing")


def system_from_dict(doc: Any) -> ParseReport:
    """Validate a decoded document and build the system it describes."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    _check_keys(doc, "$", {"nodes", "edges", "metadata"}, ("nodes", "edges"))
    warnings: list[ParseWarning] = []

    raw_nodes = doc["nodes"]
    if not isinstance(raw_nodes, list):
        raise SchemaError("nodes", "expected an array")
    nodes = []
    for i, obj in enumerate(raw_nodes):
        path = f"nodes[{i}]"
        _check_keys(obj, path, _NODE_KEYS, ("id", "text"))
        if not isinstance(obj["id"], str) or not obj["id"]:
            raise SchemaError(f"{path}.id", "expected a non-empty string")
        if not isinstance(obj["text"], str):
            raise SchemaError(f"{path}.text", "expected a string")
        scores = {}
        for key in ("cred", "conf"):
            if key in obj:
                if not _is_number(obj[key]):
                    raise SchemaError(f"{path}.{key}", "expected a number")
                scores[key] = obj[key]
            else:
                scores[key] = DEFAULT_SCORE
                warnings.append(ParseWarning(None, None, f"{key} missing, defaulted to {DEFAULT_SCORE}",
                                             f"{path}.{key}"))
        nodes.append(BeliefNode(obj["id"], obj["text"], scores["cred"], scores["conf"]))

    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise SchemaError("edges", "expected an array")
    edges = []
    for i, obj in enumerate(raw_edges):
        path = f"edges[{i}]"
        _check_keys(obj, path, _EDGE_KEYS, ("from", "to"))
        for key in ("from", "to"):
            if not isinstance(obj[key], str) or not obj[key]:
                raise SchemaError(f"{path}.{key}", "expected a non-empty string")
        if "kind" in obj:
            kind = _KINDS.get(obj["kind"]) if isinstance(obj["kind"], str) else None
            if kind is None:
                raise SchemaError(f"{path}.kind", f"expected one of {', '.join(_KINDS)}, got {obj['kind']!r}")
        else:
            kind = EdgeKind.SUPPORT
            warnings.append(ParseWarning(None, None, "kind missing, defaulted to support", f"{path}.kind"))
        if "weight" in obj:
            weight = obj["weight"]
            if not _is_number(weight) or not math.isfinite(weight):
                raise SchemaError(f"{path}.weight", "expected a finite number")
        else:
            weight = DEFAULT_WEIGHT
            warnings.append(ParseWarning(None, None, f"weight missing, defaulted to {DEFAULT_WEIGHT}",
                                         f"{path}.weight"))
        edges.append(Edge(obj["from"], obj["to"], kind, weight))

    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise SchemaError("metadata", "expected an object")
    for k, v in metadata.items():
        if not isinstance(v, str):
            raise SchemaError(f"metadata.{k}", "expected a string")
    return ParseReport(build_system(nodes, edges, metadata), warnings)


def parse_json(text: str) -> ParseReport:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return system_from_dict(doc)


def from_json(text: str) -> BeliefSystem:
    """Decode a JSON document into a :class:`BeliefSystem`.

    Raises :class:`SchemaError` for malformed documents and the usual
    construction errors for structurally invalid ones.
    """
    return parse_json(text).system
