"""BGL, a small text format for authoring belief systems.

Grammar::

    document   := { statement } ;
    statement  := node_decl | edge_decl ;
    node_decl  := "belief" IDENT "{" "text" ":" STRING
                  ["," "cred" ":" NUMBER] ["," "conf" ":" NUMBER] "}" ;
    edge_decl  := IDENT arrow IDENT ["[" "w" "=" NUMBER "]"] ;
    arrow      := "->" | "~>" | "-|" ;   (support, qualification, contradiction)
    IDENT      := letter { letter | digit | "_" } ;

``#`` starts a comment that runs to the end of the line. Strings use JSON
escaping. Missing ``cred``/``conf`` default to 0.5 and a missing weight to
1.0; each applied default produces one warning in the parse report.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator

from ..core import BeliefNode, BeliefSystem, Edge, EdgeKind, build_system
from ..exceptions import (
    BeliefGraphError,
    BGLSyntaxError,
    DanglingEdgeEndpoint,
    DuplicateEdge,
    DuplicateNodeId,
    InvalidParameter,
)

__all__ = ["ParseWarning", "ParseReport", "parse_bgl", "render_bgl", "IDENT_RE"]

DEFAULT_SCORE = 0.5
DEFAULT_WEIGHT = 1.0

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

ARROWS = {"->": EdgeKind.SUPPORT, "~>": EdgeKind.QUALIFICATION, "-|": EdgeKind.CONTRADICTION}
ARROW_FOR = {kind: arrow for arrow, kind in ARROWS.items()}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->|~>|-\|)
  | (?P<number>[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[{}:,\[\]=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class ParseWarning:
    """A default applied while reading a document.

    BGL warnings carry a 1-based ``line``/``column``; JSON warnings carry a
    document ``path`` instead.
    """

    line: int | None
    column: int | None
    message: str
    path: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"message": self.message}
        if self.line is not None:
            out["line"] = self.line
            out["column"] = self.column
        if self.path is not None:
            out["path"] = self.path
        return out


@dataclass(frozen=True)
class ParseReport:
    system: BeliefSystem
    warnings: list[ParseWarning] = field(default_factory=list)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def _tokenize(text: str) -> Iterator[_Tok]:
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise BGLSyntaxError(line, pos - line_start + 1, "a token", repr(text[pos]))
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            yield _Tok(kind, m.group(), line, m.start() - line_start + 1)
        pos = m.end()
    yield _Tok("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokenize(text))
        self.i = 0
        self.warnings: list[ParseWarning] = []
        self.nodes: list[tuple[BeliefNode, _Tok]] = []
        self.edges: list[tuple[Edge, _Tok]] = []

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            raise BGLSyntaxError(tok.line, tok.col, what or (repr(text) if text else kind), tok.describe())
        return self.next()

    def number(self) -> float:
        return float(self.expect("number", what="a number").text)

    def document(self) -> None:
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "ident":
                raise BGLSyntaxError(tok.line, tok.col, "a belief declaration or an edge", tok.describe())
            if tok.text == "belief" and self.peek(1).kind == "ident":
                self.node_decl()
            else:
                self.edge_decl()

    def node_decl(self) -> None:
        self.next()  # "belief"
        ident = self.expect("ident", what="a belief identifier")
        self.expect("punct", "{")
        self.expect("ident", "text")
        self.expect("punct", ":")
        s = self.expect("string", what="a quoted string")
        try:
            content = json.loads(s.text)
        except json.JSONDecodeError:
            raise BGLSyntaxError(s.line, s.col, "a string with valid escapes", s.describe()) from None
        scores: dict[str, float] = {}
        for key in ("cred", "conf"):
            if self.peek().text == "," and self.peek(1).text == key:
                self.next()
                self.next()
                self.expect("punct", ":")
                scores[key] = self.number()
        close = self.peek()
        if close.text != "}":
            pending = [k for k in ("cred", "conf") if k not in scores]
            expected = " or ".join([f"', {k}'" for k in pending] + ["'}'"])
            raise BGLSyntaxError(close.line, close.col, expected, close.describe())
        self.next()
        for key in ("cred", "conf"):
            if key not in scores:
                scores[key] = DEFAULT_SCORE
                self.warnings.append(ParseWarning(
                    ident.line, ident.col, f"belief {ident.text!r}: {key} missing, defaulted to {DEFAULT_SCORE}"))
        node = _at(ident, BeliefNode, ident.text, content, scores["cred"], scores["conf"])
        self.nodes.append((node, ident))

    def edge_decl(self) -> None:
        src = self.expect("ident", what="a belief identifier")
        arrow = self.expect("arrow", what="'->', '~>' or '-|'")
        dst = self.expect("ident", what="a belief identifier")
        if self.peek().text == "[":
            self.next()
            self.expect("ident", "w")
            self.expect("punct", "=")
            weight = self.number()
            self.expect("punct", "]")
        else:
            weight = DEFAULT_WEIGHT
            self.warnings.append(ParseWarning(
                src.line, src.col, f"edge {src.text} {arrow.text} {dst.text}: weight missing, defaulted to {DEFAULT_WEIGHT}"))
        edge = _at(src, Edge, src.text, dst.text, ARROWS[arrow.text], weight)
        self.edges.append((edge, src))


def _at(tok: _Tok, factory, *args):
    try:
        return factory(*args)
    except BeliefGraphError as exc:
        raise exc.with_position(tok.line, tok.col) from None


def parse_bgl(text: str) -> ParseReport:
    """Parse a BGL document into a validated :class:`BeliefSystem`.

    Raises
    ------
    BGLSyntaxError
        On malformed input, with the offending line and column.
    ValidationError
        Any construction error, positioned at the declaration that caused it.
    """
    p = _Parser(text)
    p.document()
    try:
        system = build_system([n for n, _ in p.nodes], [e for e, _ in p.edges])
    except DuplicateNodeId as exc:
        toks = [t for n, t in p.nodes if n.id == exc.node_id]
        raise exc.with_position(toks[1].line, toks[1].col) from None
    except DanglingEdgeEndpoint as exc:
        tok = next(t for e, t in p.edges if e.pair == (exc.source, exc.target))
        raise exc.with_position(tok.line, tok.col) from None
    except DuplicateEdge as exc:
        toks = [t for e, t in p.edges if e.pair == (exc.source, exc.target)]
        raise exc.with_position(toks[1].line, toks[1].col) from None
    warnings = sorted(p.warnings, key=lambda w: (w.line, w.column))
    return ParseReport(system, warnings)


def render_bgl(sys: BeliefSystem) -> str:
    """Render a system as BGL text that parses back to an equal system.

    Metadata has no BGL syntax and is emitted as comments only.
    """
    lines = []
    for k, v in sys.metadata.items():
        lines.append(f"# {k}: {' '.join(v.splitlines())}")
    for node in sys.nodes.values():
        if not IDENT_RE.match(node.id):
            raise InvalidParameter(f"node id {node.id!r} is not a valid BGL identifier")
        text = json.dumps(node.content, ensure_ascii=False)
        lines.append(f"belief {node.id} {{ text: {text}, cred: {node.cred!r}, conf: {node.conf!r} }}")
    for e in sys.edges:
        lines.append(f"{e.source} {ARROW_FOR[e.kind]} {e.target} [w={e.weight!r}]")
    return "\n".join(lines) + ("\n" if lines else "")
