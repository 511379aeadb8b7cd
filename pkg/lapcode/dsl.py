"""Construction expressions and edge-list files.

Expression grammar (whitespace is ignored)::

    expr  := atom | "W" [int] "(" expr ")" | "W*" [int] "(" expr ")"
           | "B(" expr ("," expr)+ ")"
    atom  := ("C" | "K" | "P" | "S" | "T") int | "T:" shape
    shape := "P" int | "S" int | "[" [int ("," int)*] "]"

"Tn" is the n-vertex path; "T:[...]" decodes a Pruefer sequence.
"""
import logging
from dataclasses import replace
from pathlib import Path

from .errors import InvalidGraphError, ParseError
from .graphs import (
    Graph, bridge, complete, cycle, path, star, star_whisker, tree_from_pruefer, whisker,
)

logger = logging.getLogger(__name__)

_ATOMS = {"C": cycle, "K": complete, "P": path, "S": star, "T": path}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected: str):
        if self.peek() != expected:
            found = self.peek() or "end of input"
            raise ParseError(f"expected '{expected}', found '{found}'", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            found = self.peek() or "end of input"
            raise ParseError(f"expected an integer, found '{found}'", start)
        return int(self.text[start:self.pos])

    def optional_integer(self) -> int | None:
        return self.integer() if self.peek().isdigit() else None

    def parse(self) -> Graph:
        graph = self.expr()
        if self.peek():
            raise ParseError(f"unexpected '{self.peek()}' after expression", self.pos)
        return graph

    def expr(self) -> Graph:
        start = self.pos
        head = self.peek()
        if not head:
            raise ParseError("unexpected end of input", self.pos)
        self.pos += 1
        if head == "B":
            self.take("(")
            parts = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.expr())
            self.take(")")
            if len(parts) < 2:
                raise ParseError("bridge needs at least two graphs", start)
            return self._build(start, bridge, parts)
        if head == "W":
            starred = self.peek() == "*"
            if starred:
                self.pos += 1
            k = self.optional_integer()
            if k is None:
                k = 1
            self.take("(")
            inner = self.expr()
            self.take(")")
            if starred:
                return self._build(start, star_whisker, inner, k)
            return self._build(start, whisker, inner, k)
        if head == "T" and self.peek() == ":":
            self.pos += 1
            return self.shape(start)
        if head in _ATOMS:
            n = self.integer()
            graph = self._build(start, _ATOMS[head], n)
            return replace(graph, name=f"{head}{n}")
        raise ParseError(f"unknown construction '{head}'", start)

    def shape(self, start: int) -> Graph:
        kind = self.peek()
        if kind in ("P", "S"):
            self.pos += 1
            n = self.integer()
            graph = self._build(start, path if kind == "P" else star, n)
            return replace(graph, name=f"T:{kind}{n}")
        if kind == "[":
            self.pos += 1
            sequence = []
            if self.peek() != "]":
                sequence.append(self.integer())
                while self.peek() == ",":
                    self.pos += 1
                    sequence.append(self.integer())
            self.take("]")
            return self._build(start, tree_from_pruefer, sequence)
        raise ParseError("expected 'P', 'S' or '[' after 'T:'", self.pos)

    @staticmethod
    def _build(start, constructor, *args) -> Graph:
        try:
            return constructor(*args)
        except InvalidGraphError as e:
            raise ParseError(str(e), start)


def parse_construct(expr: str) -> Graph:
    graph = _Parser(expr).parse()
    logger.debug(f"parsed {expr!r} as {graph.label} with {graph.n} vertices")
    return graph


def read_edge_list(text: str, name: str = "") -> Graph:
    """Parse the "n m" header plus m "u v" lines; '#' starts a comment."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            lines.append((lineno, content.split()))
    if not lines:
        raise ParseError("edge list is empty")

    lineno, header = lines[0]
    n, m = _pair(lineno, header)
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"line {lineno}: header announces {m} edges, found {len(body)}")
    edges = []
    for lineno, fields in body:
        u, v = _pair(lineno, fields)
        if not 1 <= u < v <= n:
            raise ParseError(f"line {lineno}: expected 1 <= u < v <= {n}, got {u} {v}")
        edges.append((u, v))
    try:
        return Graph.from_edges(n, edges, name)
    except InvalidGraphError as e:
        raise ParseError(str(e))


def read_edge_file(filename: str | Path) -> Graph:
    path_ = Path(filename)
    try:
        text = path_.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{path_}: not valid UTF-8 at byte {e.start}")
    except OSError as e:
        raise ParseError(f"{path_}: {e.strerror or e}")
    return read_edge_list(text, path_.stem)


def _pair(lineno: int, fields: list[str]) -> tuple[int, int]:
    if len(fields) != 2:
        raise ParseError(f"line {lineno}: expected two integers, got {' '.join(fields)!r}")
    try:
        return int(fields[0]), int(fields[1])
    except ValueError:
        raise ParseError(f"line {lineno}: expected two integers, got {' '.join(fields)!r}")
