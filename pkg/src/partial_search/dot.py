"""Graphviz DOT snapshots of the evolving graphs.

Old (input) vertices are drawn filled, gadget vertices hollow.
"""

from __future__ import annotations

from pathlib import Path

from .graphs import MultiGraph
from .hc_engine import LeftRightContext
from .iso_engine import GadgetGraph

_OLD = 'style=filled, fillcolor=black, fontcolor=white'
_NEW = 'style=solid'


def _gadget_cluster(name: str, gadget: GadgetGraph) -> list[str]:
    lines = [f"  subgraph cluster_{name} {{", f'    label="{name}";']
    for v in gadget.vertices():
        style = _OLD if gadget.is_old(v) else _NEW
        lines.append(f'    "{name}{v}" [label="{v}", shape=circle, {style}];')
    for u, v in gadget.graph.edges():
        lines.append(f'    "{name}{u}" -- "{name}{v}";')
    lines.append("  }")
    return lines


def gadget_pair_dot(gG: GadgetGraph, gH: GadgetGraph, title: str = "") -> str:
    """Both gadget graphs side by side in one DOT document."""
    lines = ["graph gadgets {"]
    if title:
        lines.append(f'  label="{title}";')
    lines += _gadget_cluster("G", gG)
    lines += _gadget_cluster("H", gH)
    lines.append("}")
    return "\n".join(lines) + "\n"


def multigraph_dot(g: MultiGraph, ctx: LeftRightContext, title: str = "") -> str:
    """Contracted multigraph; edges carry their ids and the L/R side at each context endpoint."""
    lines = ["graph contracted {"]
    if title:
        lines.append(f'  label="{title}";')
    for v in sorted(g.vertices):
        style = _NEW if v in ctx else _OLD
        lines.append(f'  "{v}" [shape=circle, {style}];')

    def side(w: int, e: int) -> str:
        if w not in ctx:
            return ""
        L, R = ctx[w]
        return "L" if e in L else "R" if e in R else ""

    for e in sorted(g.edges):
        a, b = g.edges[e]
        attrs = [f'label="{e}"']
        if side(a, e):
            attrs.append(f'taillabel="{side(a, e)}"')
        if side(b, e):
            attrs.append(f'headlabel="{side(b, e)}"')
        lines.append(f'  "{a}" -- "{b}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(directory: str | Path, name: str, text: str) -> Path:
    path = Path(directory) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
