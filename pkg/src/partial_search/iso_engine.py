"""Complete graph isomorphisms from an oracle that names one matched vertex pair.

Each loop asks the oracle for a pair ``(x, y)`` of the current gadget graphs,
maps it back to a pair of surviving input ("old") vertices, records it, and
deletes both. Old neighbours of a deleted vertex get a fresh clique of size
``i`` hung on them, ``i`` growing by one per loop, so that every isomorphism of
the reduced graphs stays compatible with the pairs chosen so far.

Clique edges are never materialised: a :class:`GadgetGraph` keeps the old
subgraph plus a registry of cliques, and :attr:`GadgetGraph.graph` builds the
plain :class:`SimpleGraph` on demand.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from .errors import InternalInvariantFailure, OracleViolation
from .formats import to_graph6
from .graphs import SimpleGraph, validate_isomorphism

IsoOracle = Callable[["GadgetGraph", "GadgetGraph"], tuple[int, int]]

OLD_OLD = "old-old"
OLD_NEW = "old-new"
NEW_OLD = "new-old"
NEW_NEW = "new-new"


@dataclass(frozen=True)
class CliqueRecord:
    """``size - 1`` new vertices that form a ``size``-clique together with ``anchor``."""

    anchor: int
    size: int
    members: range
    loop: int

    def ordinal(self, v: int) -> int:
        return v - self.members.start


class GadgetGraph:
    """Surviving old vertices plus the clique gadgets hung on them."""

    def __init__(self, base: SimpleGraph, first_new_id: int):
        if base.vertices and first_new_id <= max(base.vertices):
            raise ValueError("new vertex ids must not collide with old ones")
        self.old = base.copy()
        self.cliques: dict[int, CliqueRecord] = {}
        self.anchored: dict[int, list[CliqueRecord]] = {v: [] for v in base.vertices}
        self._starts: list[int] = []
        self.next_id = first_new_id
        self.new_count = 0
        self.ops = 0

    def __contains__(self, v: object) -> bool:
        return v in self.old or (isinstance(v, int) and self.clique_of(v) is not None)

    @property
    def order(self) -> int:
        return len(self.old) + self.new_count

    def is_old(self, v: int) -> bool:
        return v in self.old

    def clique_of(self, v: int) -> CliqueRecord | None:
        """The clique containing new vertex ``v``, or None."""
        k = bisect.bisect_right(self._starts, v) - 1
        if k < 0:
            return None
        rec = self.cliques.get(self._starts[k])
        if rec is None or v not in rec.members:
            return None
        return rec

    def old_neighbors(self, v: int) -> set[int]:
        return self.old.neighbors(v)

    def cliques_at(self, anchor: int) -> list[CliqueRecord]:
        return self.anchored[anchor]

    def signature(self, v: int) -> tuple[int, tuple[int, ...]]:
        """Old degree and sorted clique sizes of an old vertex; preserved by every isomorphism."""
        return self.old.degree(v), tuple(sorted(c.size for c in self.anchored[v]))

    def is_clique_component(self, v: int, size: int) -> bool:
        """Whether old ``v`` together with one clique of ``size`` is a whole component."""
        cl = self.anchored[v]
        return self.old.degree(v) == 0 and len(cl) == 1 and cl[0].size == size

    def vertices(self) -> Iterator[int]:
        yield from sorted(self.old.vertices)
        for start in self._starts:
            rec = self.cliques.get(start)
            if rec is not None:
                yield from rec.members

    def attach_clique(self, anchor: int, size: int, loop: int) -> CliqueRecord:
        rec = CliqueRecord(anchor, size, range(self.next_id, self.next_id + size - 1), loop)
        self.next_id += size - 1
        self.cliques[rec.members.start] = rec
        self._starts.append(rec.members.start)
        self.anchored[anchor].append(rec)
        self.new_count += size - 1
        self.ops += size
        return rec

    def delete_old(self, v: int) -> tuple[list[int], int]:
        """Remove old ``v`` with every clique anchored at it.

        Returns the old neighbours ``v`` had and the number of vertices removed.
        """
        removed = 1
        for rec in self.anchored.pop(v):
            del self.cliques[rec.members.start]
            removed += len(rec.members)
        self.new_count -= removed - 1
        nbrs = sorted(self.old.neighbors(v))
        self.old.remove_vertex(v)
        self.ops += removed + len(nbrs)
        return nbrs, removed

    @property
    def graph(self) -> SimpleGraph:
        g = self.old.copy()
        for rec in self.cliques.values():
            members = list(rec.members)
            for k, a in enumerate(members):
                g.add_edge(rec.anchor, a)
                for b in members[k + 1:]:
                    g.add_edge(a, b)
        return g


@dataclass
class PartialIsomorphism:
    pairs: list[tuple[int, int]] = field(default_factory=list)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class IsoEngineState:
    G: SimpleGraph
    H: SimpleGraph
    gG: GadgetGraph
    gH: GadgetGraph
    n: int
    i: int
    phi: PartialIsomorphism = field(default_factory=PartialIsomorphism)
    trace: list[dict[str, Any]] = field(default_factory=list)
    ops: int = 0
    last_delta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def start(cls, G: SimpleGraph, H: SimpleGraph) -> IsoEngineState:
        first_new = max(G.vertices | H.vertices, default=0) + 1
        n = len(G)
        return cls(G, H, GadgetGraph(G, first_new), GadgetGraph(H, first_new), n=n, i=n)

    @property
    def loops_done(self) -> int:
        return len(self.phi)

    def total_ops(self) -> int:
        return self.ops + self.gG.ops + self.gH.ops


@dataclass
class IsoRun:
    phi: dict[int, int]
    trace: list[dict[str, Any]]
    oracle_calls: int
    ops: int


def resolve_answer(state: IsoEngineState, x: int, y: int) -> tuple[str, int, int]:
    """Classify an oracle answer and map it to a pair of old vertices.

    Raises OracleViolation when the answer contradicts what any isomorphism of
    the gadget graphs could produce.
    """
    gG, gH = state.gG, state.gH
    if x not in gG or y not in gH:
        raise OracleViolation(f"answer ({x}, {y}) names a vertex outside the queried graphs")

    if gG.is_old(x) and gH.is_old(y):
        if gG.signature(x) != gH.signature(y):
            raise OracleViolation(
                f"old vertices {x} and {y} differ in old degree or clique sizes "
                f"({gG.signature(x)} vs {gH.signature(y)})"
            )
        return OLD_OLD, x, y

    if gG.is_old(x):
        rec = gH.clique_of(y)
        assert rec is not None
        y_anchor, j = rec.anchor, rec.size
        # y's closed neighbourhood is a j-clique, so x must be an isolated j-clique anchor,
        # and so must y's anchor.
        if not gG.is_clique_component(x, j):
            raise OracleViolation(f"old {x} is not an isolated {j}-clique but was paired with new {y}")
        if not gH.is_clique_component(y_anchor, j):
            raise OracleViolation(f"anchor {y_anchor} of new {y} has neighbours outside its {j}-clique")
        return OLD_NEW, x, y_anchor

    rec_x = gG.clique_of(x)
    assert rec_x is not None
    x_anchor, j = rec_x.anchor, rec_x.size
    if gH.is_old(y):
        # A new vertex's closed neighbourhood is exactly its clique, so y's must be too,
        # which makes both cliques whole components.
        if not (gH.is_clique_component(y, j) and gG.is_clique_component(x_anchor, j)):
            raise OracleViolation(f"new {x} paired with old {y} but the {j}-cliques are not both components")
        return NEW_OLD, x_anchor, y
    rec_y = gH.clique_of(y)
    assert rec_y is not None
    y_anchor = rec_y.anchor
    if rec_y.size != j:
        raise OracleViolation(f"new {x} lies in a {j}-clique but new {y} in a {rec_y.size}-clique")
    if gG.signature(x_anchor) != gH.signature(y_anchor):
        raise OracleViolation(
            f"anchors {x_anchor} and {y_anchor} differ in old degree or clique sizes "
            f"({gG.signature(x_anchor)} vs {gH.signature(y_anchor)})"
        )
    return NEW_NEW, x_anchor, y_anchor


def _delete_and_attach(gadget: GadgetGraph, v: int, size: int, loop: int) -> tuple[list[dict[str, int]], int]:
    nbrs, removed = gadget.delete_old(v)
    added = [gadget.attach_clique(w, size, loop) for w in nbrs]
    return [{"anchor": c.anchor, "size": c.size} for c in added], removed


def reduce_pair(state: IsoEngineState, xs: int, ys: int, tag: str) -> IsoEngineState:
    """Record ``(xs, ys)`` and shrink both gadget graphs (in place; returns ``state``).

    Deleting an old vertex drops every clique anchored at it; each surviving old
    neighbour gets a new clique of the current size ``i``. For an old vertex
    matched to a new one both sides are bare clique components, so this
    deletes the two components and attaches nothing.
    """
    loop = state.loops_done + 1
    if tag == OLD_NEW and (state.gG.old.degree(xs) or state.gH.old.degree(ys)):
        raise InternalInvariantFailure(f"component deletion of {xs}/{ys} with old neighbours left")
    state.phi.pairs.append((xs, ys))
    added_g, removed_g = _delete_and_attach(state.gG, xs, state.i, loop)
    added_h, removed_h = _delete_and_attach(state.gH, ys, state.i, loop)
    state.last_delta = {
        "cliques_added": {"G": added_g, "H": added_h},
        "vertices_deleted": {"G": removed_g, "H": removed_h},
    }
    state.i += 1
    return state


def _check_compatible(state: IsoEngineState, xs: int, ys: int) -> None:
    G, H = state.G, state.H
    for xj, yj in state.phi.pairs:
        state.ops += 1
        if G.has_edge(xs, xj) != H.has_edge(ys, yj):
            raise OracleViolation(f"pair ({xs}, {ys}) is incompatible with earlier pair ({xj}, {yj})")


def _snapshot(gadget: GadgetGraph, limit: int) -> str | None:
    return to_graph6(gadget.graph) if gadget.order <= limit else None


def complete_isomorphism(
    G: SimpleGraph,
    H: SimpleGraph,
    oracle: IsoOracle,
    *,
    snapshot_limit: int = 64,
    on_loop: Callable[[IsoEngineState], None] | None = None,
) -> IsoRun:
    """Build a full isomorphism G -> H with exactly ``n`` oracle calls.

    ``on_loop`` is called with the state at every loop entry, before the query.
    Gadget graphs above ``snapshot_limit`` vertices are not written into the
    trace as graph6.
    """
    if len(G) != len(H):
        raise OracleViolation(f"graphs have {len(G)} and {len(H)} vertices")
    state = IsoEngineState.start(G, H)
    calls = 0
    while state.gG.order > 0 or state.gH.order > 0:
        if state.loops_done >= state.n:
            raise InternalInvariantFailure("more loops than input vertices")
        if on_loop is not None:
            on_loop(state)
        record: dict[str, Any] = {
            "loop": state.loops_done + 1,
            "i": state.i,
            "query": {
                "gG": _snapshot(state.gG, snapshot_limit),
                "gH": _snapshot(state.gH, snapshot_limit),
                "order": [state.gG.order, state.gH.order],
            },
        }
        x, y = oracle(state.gG, state.gH)
        calls += 1
        state.ops += 1
        record["answer"] = [x, y]
        try:
            tag, xs, ys = resolve_answer(state, x, y)
            record["case"] = tag
            record["resolved"] = [xs, ys]
            _check_compatible(state, xs, ys)
        except OracleViolation as exc:
            exc.record = record
            raise
        reduce_pair(state, xs, ys, tag)
        record.update(state.last_delta)
        state.trace.append(record)

    phi = state.phi.as_dict()
    if calls != state.n or not validate_isomorphism(G, H, phi):
        raise InternalInvariantFailure(f"engine finished with an invalid map after {calls} calls")
    return IsoRun(phi=phi, trace=state.trace, oracle_calls=calls, ops=state.total_ops())
