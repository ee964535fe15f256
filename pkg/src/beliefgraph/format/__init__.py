"""Reading and writing belief systems: BGL text, JSON documents, DOT and GraphML."""

from __future__ import annotations

from pathlib import Path

from .bgl import ParseReport, ParseWarning, parse_bgl, render_bgl
from .export import DiagnosticsOverlay, to_dot, to_graphml
from .jsondoc import from_json, parse_json, system_from_dict, system_to_dict, to_json

__all__ = [
    "ParseReport",
    "ParseWarning",
    "parse_bgl",
    "render_bgl",
    "to_json",
    "from_json",
    "parse_json",
    "system_to_dict",
    "system_from_dict",
    "DiagnosticsOverlay",
    "to_dot",
    "to_graphml",
    "detect_format",
    "parse_text",
    "load",
]


def detect_format(path: str | Path | None, text: str | None = None) -> str:
    """Guess ``"bgl"`` or ``"json"`` from a file extension, else from content."""
    if path is not None:
        suffix = Path(path).suffix.lower()
        if suffix == ".json":
            return "json"
        if suffix == ".bgl":
            return "bgl"
    if text is not None and text.lstrip().startswith("{"):
        return "json"
    return "bgl"


def parse_text(text: str, fmt: str) -> ParseReport:
    if fmt == "json":
        return parse_json(text)
    if fmt == "bgl":
        return parse_bgl(text)
    raise ValueError(f"unknown input format {fmt!r}")


def load(path: str | Path, fmt: str | None = None) -> ParseReport:
    """Read a ``.bgl`` or ``.json`` file."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_text(text, fmt or detect_format(path, text))
