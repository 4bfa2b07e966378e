"""Scripted oracles and small-instance checks shared by several test modules."""

from __future__ import annotations

from typing import Any, Callable

from partial_search.graphs import SimpleGraph
from partial_search.iso_engine import GadgetGraph


def scripted(*answers: Any) -> Callable[..., Any]:
    """Oracle replaying ``answers`` in order; callables are evaluated on the query."""
    queue = list(answers)

    def oracle(*query: Any) -> Any:
        a = queue.pop(0)
        return a(*query) if callable(a) else a

    return oracle


def member(side: str, anchor: int, k: int = 0) -> Callable[[GadgetGraph, GadgetGraph], int]:
    """The first member of the k-th clique anchored at ``anchor`` in gG or gH."""

    def pick(gG: GadgetGraph, gH: GadgetGraph) -> int:
        g = gG if side == "G" else gH
        return g.cliques_at(anchor)[k].members[0]

    return pick


def pair(x: Any, y: Any) -> Callable[[GadgetGraph, GadgetGraph], tuple[int, int]]:
    def pick(gG: GadgetGraph, gH: GadgetGraph) -> tuple[int, int]:
        return (x(gG, gH) if callable(x) else x, y(gG, gH) if callable(y) else y)

    return pick


def graph(n: int, *edges: tuple[int, int]) -> SimpleGraph:
    return SimpleGraph.from_edges(n, edges)
