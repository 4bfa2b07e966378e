"""Graph data model: simple graphs, multigraphs with persistent edge ids, validators."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ContractionError


class SimpleGraph:
    """Undirected graph without loops or parallel edges.

    Vertex ids are arbitrary non-negative ints and are never renumbered;
    removing a vertex simply drops it.
    """

    __slots__ = ("adj",)

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        self.adj: dict[int, set[int]] = {v: set() for v in vertices}
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
        """Graph on vertices ``1..n``."""
        return cls(range(1, n + 1), edges)

    @property
    def vertices(self) -> set[int]:
        return set(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def __contains__(self, v: object) -> bool:
        return v in self.adj

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimpleGraph) and self.adj == other.adj

    def __repr__(self) -> str:
        return f"SimpleGraph(vertices={sorted(self.adj)}, edges={self.edges()})"

    def add_vertex(self, v: int) -> None:
        self.adj.setdefault(v, set())

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at {u} in a simple graph")
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def remove_vertex(self, v: int) -> None:
        for w in self.adj.pop(v):
            self.adj[w].discard(v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, ())

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, nb in self.adj.items() for v in nb if u < v)

    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2

    def copy(self) -> SimpleGraph:
        g = SimpleGraph()
        g.adj = {v: set(nb) for v, nb in self.adj.items()}
        return g

    def subgraph(self, keep: Iterable[int]) -> SimpleGraph:
        keep = set(keep)
        g = SimpleGraph()
        g.adj = {v: self.adj[v] & keep for v in self.adj if v in keep}
        return g

    def relabel(self, mapping: Mapping[int, int]) -> SimpleGraph:
        return SimpleGraph((mapping[v] for v in self.adj), ((mapping[u], mapping[v]) for u, v in self.edges()))


def validate_isomorphism(g: SimpleGraph, h: SimpleGraph, phi: Mapping[int, int]) -> bool:
    """True iff ``phi`` is a bijection V(g) -> V(h) preserving adjacency and non-adjacency."""
    if set(phi) != g.vertices or len(g) != len(h):
        return False
    if set(phi.values()) != h.vertices:
        return False
    # Bijective with equal edge counts, so checking edges of g in one direction is enough.
    if g.num_edges() != h.num_edges():
        return False
    return all(h.has_edge(phi[u], phi[v]) for u, v in g.edges())


@dataclass
class MultiGraph:
    """Undirected multigraph whose edges keep their ids across contractions.

    ``edges`` maps an EdgeId to its current endpoint pair (sorted; equal for a
    self-loop), ``origin`` to the pair in the input graph. ``aliases`` records
    the original vertex tags carried by each live vertex.
    """

    vertices: set[int] = field(default_factory=set)
    edges: dict[int, tuple[int, int]] = field(default_factory=dict)
    origin: dict[int, tuple[int, int]] = field(default_factory=dict)
    aliases: dict[int, frozenset[int]] = field(default_factory=dict)

    @classmethod
    def from_edge_list(cls, n: int, pairs: Iterable[tuple[int, int]]) -> MultiGraph:
        """Vertices ``1..n``; edge ids ``0..m-1`` in the given order."""
        g = cls(vertices=set(range(1, n + 1)))
        g.aliases = {v: frozenset((v,)) for v in g.vertices}
        for eid, (a, b) in enumerate(pairs):
            if a not in g.vertices or b not in g.vertices:
                raise ValueError(f"edge {eid} ({a}, {b}) has an endpoint outside 1..{n}")
            pair = (min(a, b), max(a, b))
            g.edges[eid] = pair
            g.origin[eid] = pair
        return g

    def __len__(self) -> int:
        return len(self.vertices)

    def copy(self) -> MultiGraph:
        return MultiGraph(set(self.vertices), dict(self.edges), self.origin, dict(self.aliases))

    def is_loop(self, e: int) -> bool:
        a, b = self.edges[e]
        return a == b

    def incident(self, v: int) -> list[int]:
        return sorted(e for e, (a, b) in self.edges.items() if a == v or b == v)

    def incidence(self) -> dict[int, list[int]]:
        inc: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in sorted(self.edges):
            a, b = self.edges[e]
            inc[a].append(e)
            if b != a:
                inc[b].append(e)
        return inc

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if a == v else a

    def pairs(self) -> list[tuple[int, int]]:
        """Original endpoint pairs in EdgeId order (the JSON serialisation)."""
        return [self.origin[e] for e in sorted(self.origin)]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        inc = self.incidence()
        start = min(self.vertices)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in inc[v]:
                w = self.other_end(e, v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == self.vertices


def contract_edge(g: MultiGraph, e: int) -> MultiGraph:
    """Delete edge ``e`` and identify its endpoints into the smaller id.

    Every other edge keeps its id; parallel copies of ``e`` turn into self-loops.
    """
    if e not in g.edges:
        raise ContractionError(f"edge {e} is not live")
    u, v = g.edges[e]
    if u == v:
        raise ContractionError(f"edge {e} is a self-loop at {u}")
    keep, gone = min(u, v), max(u, v)
    out = g.copy()
    del out.edges[e]
    for f, (a, b) in g.edges.items():
        if f == e or (a != gone and b != gone):
            continue
        a = keep if a == gone else a
        b = keep if b == gone else b
        out.edges[f] = (min(a, b), max(a, b))
    out.vertices.discard(gone)
    out.aliases[keep] = g.aliases[keep] | g.aliases[gone]
    del out.aliases[gone]
    return out


@dataclass(frozen=True)
class HamiltonianCycle:
    """Cyclic vertex order plus the edge used for each hop.

    ``edges[k]`` joins ``order[k]`` and ``order[(k + 1) % n]``. A one-vertex
    cycle may carry a single self-loop or no edge at all.
    """

    order: tuple[int, ...]
    edges: tuple[int, ...]

    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)


def validate_hamiltonian_cycle(g: MultiGraph, c: HamiltonianCycle) -> bool:
    n = len(g)
    order = tuple(c.order)
    if len(order) != n or set(order) != g.vertices:
        return False
    if n == 0:
        return not c.edges
    if n == 1:
        if not c.edges:
            return True
        return len(c.edges) == 1 and c.edges[0] in g.edges and g.edges[c.edges[0]] == (order[0], order[0])
    if len(c.edges) != n or len(set(c.edges)) != n:
        return False
    for k, e in enumerate(c.edges):
        if e not in g.edges:
            return False
        a, b = order[k], order[(k + 1) % n]
        if g.edges[e] != (min(a, b), max(a, b)):
            return False
    return True


def cycle_from_order(g: MultiGraph, order: Iterable[int]) -> HamiltonianCycle | None:
    """Pick the least unused edge id for each hop of ``order``; None if some hop has no edge."""
    order = tuple(order)
    n = len(order)
    if n <= 1:
        return HamiltonianCycle(order, ())
    by_pair: dict[tuple[int, int], list[int]] = {}
    for e in sorted(g.edges):
        by_pair.setdefault(g.edges[e], []).append(e)
    used: Counter[tuple[int, int]] = Counter()
    edges = []
    for k in range(n):
        a, b = order[k], order[(k + 1) % n]
        pair = (min(a, b), max(a, b))
        options = by_pair.get(pair, [])
        if used[pair] >= len(options):
            return None
        edges.append(options[used[pair]])
        used[pair] += 1
    return HamiltonianCycle(order, tuple(edges))


def cycle_from_edges(pairs: Mapping[int, tuple[int, int]]) -> HamiltonianCycle | None:
    """Assemble a cycle from edge id -> endpoint pairs, or None if they do not form one n-cycle.

    The walk starts at the least vertex and leaves along its least edge id.
    """
    if not pairs:
        return None
    inc: dict[int, list[int]] = {}
    for e in sorted(pairs):
        a, b = pairs[e]
        if a == b:
            if len(pairs) == 1:
                return HamiltonianCycle((a,), (e,))
            return None
        inc.setdefault(a, []).append(e)
        inc.setdefault(b, []).append(e)
    if any(len(es) != 2 for es in inc.values()) or len(inc) != len(pairs):
        return None
    start = min(inc)
    order = [start]
    edges: list[int] = []
    v, e = start, inc[start][0]
    while True:
        edges.append(e)
        a, b = pairs[e]
        w = b if a == v else a
        if w == start:
            break
        order.append(w)
        e = inc[w][0] if inc[w][0] != e else inc[w][1]
        v = w
    if len(order) != len(inc):
        return None
    return HamiltonianCycle(tuple(order), tuple(edges))
