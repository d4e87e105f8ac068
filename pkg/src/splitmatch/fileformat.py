"""
Text formats: the line-oriented graph file and the JSON result document.

Graph file::

    # comment
    p bmatch <n> <m>
    b <v> <cap>        (vertices without a b line get capacity 1)
    e <u> <v>          (exactly m lines)

``serialize_graph`` writes the canonical form: header, one ``b`` line per
vertex, then ``e`` lines in edge-id order. Canonical text survives
parse -> serialize byte for byte.

Result document (JSON, keys sorted, two-space indent, trailing newline)::

    {"cardinality": int, "edges": [[u, v, w], ...], "stats": {...}}

``edges`` lists edges with positive weight, ``u < v``, in edge-id order.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from typing import Any, Optional

from .graph import Graph, GraphError, build_graph, check_capacities


class ParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


def parse_graph(text: str) -> tuple[Graph, list[int]]:
    """Parse graph-file text into a graph and its capacity map."""
    n: Optional[int] = None
    m_declared = 0
    caps: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tok) != 4 or tok[1] != "bmatch":
                raise ParseError(lineno, "header must be 'p bmatch <n> <m>'")
            n, m_declared = _ints(tok[2:], lineno)
            if n < 0 or m_declared < 0:
                raise ParseError(lineno, "negative size in header")
            continue
        if n is None:
            raise ParseError(lineno, "missing 'p bmatch' header")
        if tok[0] == "b":
            if len(tok) != 3:
                raise ParseError(lineno, "expected 'b <v> <cap>'")
            v, c = _ints(tok[1:], lineno)
            if not 0 <= v < n:
                raise ParseError(lineno, f"vertex {v} out of range")
            if c < 0:
                raise ParseError(lineno, f"negative capacity {c}")
            caps[v] = c
        elif tok[0] == "e":
            if len(tok) != 3:
                raise ParseError(lineno, "expected 'e <u> <v>'")
            u, v = _ints(tok[1:], lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(lineno, f"edge ({u}, {v}) out of range")
            if u == v:
                raise ParseError(lineno, f"loop at vertex {u}")
            edges.append((u, v))
        else:
            raise ParseError(lineno, f"unknown line type {tok[0]!r}")
    if n is None:
        raise ParseError(0, "missing 'p bmatch' header")
    if len(edges) != m_declared:
        raise ParseError(0, f"header declares {m_declared} edges, found {len(edges)}")
    g = build_graph(n, edges)
    b = [caps.get(v, 1) for v in range(n)]
    try:
        b = check_capacities(g, b)
    except GraphError as exc:
        raise ParseError(0, str(exc)) from None
    return g, b


def serialize_graph(g: Graph, b: Sequence[int], comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"p bmatch {g.n} {g.m}")
    lines.extend(f"b {v} {b[v]}" for v in range(g.n))
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> tuple[Graph, list[int]]:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(path: str, g: Graph, b: Sequence[int], comment: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(g, b, comment))


def result_document(g: Graph, x: Sequence[int], stats: Optional[dict[str, Any]] = None) -> dict[str, Any]:
    return {
        "cardinality": int(sum(x)),
        "edges": [[u, v, int(w)] for (u, v), w in zip(g.edges, x) if w > 0],
        "stats": dict(stats or {}),
    }


def dump_result(doc: dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_result(text: str) -> dict[str, Any]:
    doc = json.loads(text)
    if not isinstance(doc, dict) or "cardinality" not in doc or "edges" not in doc:
        raise ValueError("result document needs 'cardinality' and 'edges'")
    return doc
