"""Graph ingestion from plain edge-list text and DIMACS-like files.

Edge-list format: optional '#' comment lines, a first meaningful line
``n <count>``, then one ``u v`` pair per line, 1-indexed.

DIMACS-like format: optional ``c`` comment lines, a ``p edge <n> <e>``
header, then ``e u v`` lines.

Both parsers reject out-of-range endpoints, loops, and duplicate edges.
"""

from __future__ import annotations

import os

from .errors import ParameterError, ParseError
from .model import Graph

__all__ = ["parse_edge_list", "parse_dimacs", "parse_graph_text", "load_graph"]


def _int_token(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"line {lineno}: {what} {token!r} is not an integer") from None


def _add_edge(edges: list, seen: set, u: int, v: int, n: int, lineno: int) -> None:
    if u == v:
        raise ParseError(f"line {lineno}: loop at vertex {u}")
    if not (1 <= u <= n and 1 <= v <= n):
        raise ParseError(f"line {lineno}: endpoint outside 1..{n} in edge ({u}, {v})")
    key = (u, v) if u < v else (v, u)
    if key in seen:
        raise ParseError(f"line {lineno}: duplicate edge {key}")
    seen.add(key)
    edges.append(key)


def parse_edge_list(text: str) -> Graph:
    """Parse plain edge-list text into a Graph."""
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if tokens[0] != "n" or len(tokens) != 2:
                raise ParseError(f"line {lineno}: expected header 'n <count>', got {raw.strip()!r}")
            n = _int_token(tokens[1], "vertex count", lineno)
            if n < 1:
                raise ParseError(f"line {lineno}: vertex count must be positive")
            continue
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {raw.strip()!r}")
        u = _int_token(tokens[0], "endpoint", lineno)
        v = _int_token(tokens[1], "endpoint", lineno)
        _add_edge(edges, seen, u, v, n, lineno)
    if n is None:
        raise ParseError("no 'n <count>' header found")
    try:
        return Graph(n, edges)
    except ParameterError as exc:  # pragma: no cover - already screened above
        raise ParseError(str(exc)) from exc


def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS-like text ('p edge <n> <e>' header, 'e u v' lines) into a Graph."""
    n = None
    declared = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if n is not None:
                raise ParseError(f"line {lineno}: repeated problem line")
            if len(tokens) != 4 or tokens[1] != "edge":
                raise ParseError(f"line {lineno}: expected 'p edge <n> <e>', got {raw.strip()!r}")
            n = _int_token(tokens[2], "vertex count", lineno)
            declared = _int_token(tokens[3], "edge count", lineno)
            if n < 1 or declared < 0:
                raise ParseError(f"line {lineno}: counts must be nonnegative, vertex count positive")
        elif tokens[0] == "e":
            if n is None:
                raise ParseError(f"line {lineno}: edge line before the problem line")
            if len(tokens) != 3:
                raise ParseError(f"line {lineno}: expected 'e u v', got {raw.strip()!r}")
            u = _int_token(tokens[1], "endpoint", lineno)
            v = _int_token(tokens[2], "endpoint", lineno)
            _add_edge(edges, seen, u, v, n, lineno)
        else:
            raise ParseError(f"line {lineno}: unrecognized line {raw.strip()!r}")
    if n is None:
        raise ParseError("no 'p edge <n> <e>' problem line found")
    if declared != len(edges):
        raise ParseError(f"problem line declares {declared} edges but {len(edges)} were given")
    try:
        return Graph(n, edges)
    except ParameterError as exc:  # pragma: no cover - already screened above
        raise ParseError(str(exc)) from exc


def parse_graph_text(text: str) -> Graph:
    """Parse graph text, detecting the format from the first meaningful line."""
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line[0] == "#" or line.split()[0] == "n":
            return parse_edge_list(text)
        if line[0] in "cp":
            return parse_dimacs(text)
        raise ParseError(f"unrecognized graph format near {line!r}")
    raise ParseError("empty graph file")


def load_graph(path: str | os.PathLike) -> Graph:
    """Read and parse a graph file in either supported format."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_graph_text(text)
