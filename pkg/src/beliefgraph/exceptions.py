"""Exception hierarchy.

Every error raised by the library derives from :class:`BeliefGraphError`.
Construction and parse errors may carry a source position (``line``,
``column``) when they originate from a BGL document.
"""

from __future__ import annotations

__all__ = [
    "BeliefGraphError",
    "ValidationError",
    "DuplicateNodeId",
    "DanglingEdgeEndpoint",
    "SelfLoop",
    "DuplicateEdge",
    "ScoreOutOfRange",
    "NonPositiveWeight",
    "InvalidNodeId",
    "UnknownNode",
    "InvalidParameter",
    "BGLSyntaxError",
    "SchemaError",
]


class BeliefGraphError(ValueError):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def with_position(self, line: int, column: int) -> "BeliefGraphError":
        self.line = line
        self.column = column
        return self

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.line}:{self.column}: {self.message}"
        return self.message

    def to_dict(self) -> dict:
        out = {"type": type(self).__name__, "message": self.message}
        if self.line is not None:
            out["line"] = self.line
            out["column"] = self.column
        return out


class ValidationError(BeliefGraphError):
    """A belief system violates a structural invariant."""


class DuplicateNodeId(ValidationError):
    def __init__(self, node_id: str, **kw):
        super().__init__(f"duplicate node id {node_id!r}", **kw)
        self.node_id = node_id


class DanglingEdgeEndpoint(ValidationError):
    def __init__(self, source: str, target: str, missing: str, **kw):
        super().__init__(f"edge {source!r} -> {target!r} references unknown node {missing!r}", **kw)
        self.source = source
        self.target = target
        self.missing = missing


class SelfLoop(ValidationError):
    def __init__(self, node_id: str, **kw):
        super().__init__(f"self-loop on node {node_id!r} is not allowed", **kw)
        self.node_id = node_id


class DuplicateEdge(ValidationError):
    def __init__(self, source: str, target: str, **kw):
        super().__init__(f"more than one edge from {source!r} to {target!r}", **kw)
        self.source = source
        self.target = target


class ScoreOutOfRange(ValidationError):
    def __init__(self, field: str, value: object, **kw):
        super().__init__(f"{field}={value!r} is outside [0, 1]", **kw)
        self.field = field
        self.value = value


class NonPositiveWeight(ValidationError):
    def __init__(self, value: object, **kw):
        super().__init__(f"edge weight must be positive and finite, got {value!r}", **kw)
        self.value = value


class InvalidNodeId(ValidationError):
    def __init__(self, value: object, **kw):
        super().__init__(f"node id must be a non-empty string, got {value!r}", **kw)
        self.value = value


class UnknownNode(BeliefGraphError):
    def __init__(self, node_id: object, **kw):
        super().__init__(f"unknown node {node_id!r}", **kw)
        self.node_id = node_id


class InvalidParameter(BeliefGraphError):
    """A configuration value or argument is out of its allowed range."""


class BGLSyntaxError(BeliefGraphError):
    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        msg = f"expected {expected}" + (f", found {found}" if found else "")
        super().__init__(msg, line=line, column=column)
        self.expected = expected
        self.found = found

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["expected"] = self.expected
        return out


class SchemaError(BeliefGraphError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.detail = message

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["path"] = self.path
        return out
