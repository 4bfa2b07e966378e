"""Reading and writing graphs: graph6 and JSON edge lists (1-based vertices)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import networkx as nx

from .errors import ParseError
from .graphs import MultiGraph, SimpleGraph


def to_graph6(g: SimpleGraph) -> str:
    """graph6 string (no header). Vertex k of the encoding is the k-th smallest id."""
    order = sorted(g.vertices)
    nxg = nx.Graph()
    nxg.add_nodes_from(range(len(order)))
    index = {v: k for k, v in enumerate(order)}
    nxg.add_edges_from((index[u], index[v]) for u, v in g.edges())
    return nx.to_graph6_bytes(nxg, header=False).decode("ascii").strip()


def from_graph6(text: str) -> SimpleGraph:
    """Parse a graph6 string into a graph on vertices ``1..n``."""
    data = text.strip()
    if data.startswith(">>graph6<<"):
        data = data[len(">>graph6<<"):]
    try:
        nxg = nx.from_graph6_bytes(data.encode("ascii"))
    except (nx.NetworkXError, ValueError, UnicodeEncodeError) as exc:
        raise ParseError(f"bad graph6 string {text!r}: {exc}") from exc
    return SimpleGraph.from_edges(nxg.number_of_nodes(), ((u + 1, v + 1) for u, v in nxg.edges()))


def _check_edge_doc(doc: Any) -> tuple[int, list[tuple[int, int]]]:
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise ParseError('expected an object {"n": int, "edges": [[u, v], ...]}')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"bad vertex count {n!r}")
    pairs = []
    for item in doc["edges"]:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise ParseError(f"bad edge {item!r}")
        u, v = item
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"edge {item!r} outside 1..{n}")
        pairs.append((u, v))
    return n, pairs


def simple_from_json(doc: Any) -> SimpleGraph:
    n, pairs = _check_edge_doc(doc)
    seen = set()
    for u, v in pairs:
        key = (min(u, v), max(u, v))
        if u == v:
            raise ParseError(f"self-loop [{u}, {v}] in a simple graph")
        if key in seen:
            raise ParseError(f"repeated edge {list(key)} in a simple graph")
        seen.add(key)
    return SimpleGraph.from_edges(n, pairs)


def simple_to_json(g: SimpleGraph) -> dict[str, Any]:
    """Relabels to ``1..n`` in increasing id order."""
    order = sorted(g.vertices)
    index = {v: k + 1 for k, v in enumerate(order)}
    return {"n": len(order), "edges": [[index[u], index[v]] for u, v in g.edges()]}


def multi_from_json(doc: Any) -> MultiGraph:
    n, pairs = _check_edge_doc(doc)
    return MultiGraph.from_edge_list(n, pairs)


def multi_to_json(g: MultiGraph) -> dict[str, Any]:
    """Serialises the *original* graph: edges in EdgeId order, so ids round-trip exactly."""
    n = len({t for tags in g.aliases.values() for t in tags})
    return {"n": n, "edges": [list(p) for p in g.pairs()]}


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_json(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: invalid JSON: {exc}") from exc


def detect_format(path: str | Path) -> str:
    text = _read_text(path).lstrip()
    return "json" if text.startswith("{") else "graph6"


def read_simple(path: str | Path, fmt: str | None = None) -> SimpleGraph:
    fmt = fmt or detect_format(path)
    text = _read_text(path)
    if fmt == "graph6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise ParseError(f"{path}: expected exactly one graph6 line, got {len(lines)}")
        return from_graph6(lines[0])
    return simple_from_json(_load_json(text, str(path)))


def write_simple(g: SimpleGraph, path: str | Path, fmt: str = "graph6") -> None:
    if fmt == "graph6":
        Path(path).write_text(to_graph6(g) + "\n")
    else:
        Path(path).write_text(json.dumps(simple_to_json(g)) + "\n")


def read_multi(path: str | Path) -> MultiGraph:
    return multi_from_json(_load_json(_read_text(path), str(path)))
