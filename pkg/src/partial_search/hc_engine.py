"""Complete Hamiltonian cycles from an oracle that names one edge of a consistent cycle.

Every step contracts the answered edge. A contracted vertex stands for a path
of the input graph; its left-right context ``(L, R)`` holds the edges leaving
the two ends of that path, and a cycle is consistent when it uses exactly one
edge from each side at every such vertex. After ``n - 1`` contractions one
vertex remains and the closing edge is taken from the single non-empty side.

Update rule for an answered edge ``e = {u, v}``. Each endpoint contributes its
*surviving side*: for a contracted vertex the side not containing ``e`` (the
oracle must put ``e`` on exactly one side), for an input vertex all its other
non-loop edges. Edges that become self-loops on the merged vertex are dropped,
except the *closers*, edges in both surviving sides, which join the two ends of
the new path. Slots: a surviving side keeps its slot (an input vertex takes
the free one); when both want the same slot the smaller vertex id gets L.
Closers go to the L slot, or stay with the contracted endpoint when the other
endpoint is an input vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import ContractionError, InternalInvariantFailure, OracleViolation
from .graphs import HamiltonianCycle, MultiGraph, contract_edge, cycle_from_edges, validate_hamiltonian_cycle

Side = frozenset[int]


@dataclass
class LeftRightContext:
    """Partial map vertex -> (L, R) of disjoint incident edge-id sets."""

    entries: dict[int, tuple[Side, Side]] = field(default_factory=dict)

    def __contains__(self, v: object) -> bool:
        return v in self.entries

    def __getitem__(self, v: int) -> tuple[Side, Side]:
        return self.entries[v]

    @property
    def domain(self) -> set[int]:
        return set(self.entries)

    def copy(self) -> LeftRightContext:
        return LeftRightContext(dict(self.entries))

    def problems(self, g: MultiGraph) -> list[str]:
        out = []
        for v, (L, R) in sorted(self.entries.items()):
            if v not in g.vertices:
                out.append(f"context on dead vertex {v}")
                continue
            inc = set(g.incident(v))
            if not (L | R) <= inc:
                out.append(f"context at {v} names non-incident edges {sorted((L | R) - inc)}")
            if L & R:
                out.append(f"context at {v} has {sorted(L & R)} on both sides")
        return out

    def to_json(self) -> list[list[Any]]:
        return [[v, sorted(L), sorted(R)] for v, (L, R) in sorted(self.entries.items())]

    @classmethod
    def from_json(cls, doc: list[list[Any]]) -> LeftRightContext:
        return cls({v: (frozenset(L), frozenset(R)) for v, L, R in doc})


def is_consistent(edges: frozenset[int] | set[int], ctx: LeftRightContext) -> bool:
    """Exactly one edge from L(v) and one from R(v) at every vertex of the context."""
    return all(len(edges & L) == 1 and len(edges & R) == 1 for L, R in ctx.entries.values())


HcOracle = Callable[[MultiGraph, LeftRightContext], int]


@dataclass
class HcEngineState:
    graph: MultiGraph
    ctx: LeftRightContext
    n: int
    chosen: list[int] = field(default_factory=list)
    step: int = 0
    last_step: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def start(cls, g: MultiGraph) -> HcEngineState:
        return cls(graph=g, ctx=LeftRightContext(), n=len(g))


@dataclass
class HcRun:
    cycle: HamiltonianCycle
    trace: list[dict[str, Any]]
    oracle_calls: int


def _surviving(g: MultiGraph, ctx: LeftRightContext, p: int, e: int) -> tuple[str | None, Side]:
    if p in ctx:
        L, R = ctx[p]
        if (e in L) == (e in R):
            raise OracleViolation(f"edge {e} is on neither side of the context at {p}")
        return ("R", R) if e in L else ("L", L)
    return None, frozenset(f for f in g.incident(p) if f != e and not g.is_loop(f))


def contract_and_update(state: HcEngineState, e: int) -> HcEngineState:
    """Contract ``e`` and derive the context of the merged vertex; returns a new state."""
    g, ctx = state.graph, state.ctx
    if e not in g.edges:
        raise OracleViolation(f"edge {e} is not live")
    u, v = g.edges[e]
    if u == v:
        raise ContractionError(f"edge {e} is a self-loop")
    slot_u, side_u = _surviving(g, ctx, u, e)
    slot_v, side_v = _surviving(g, ctx, v, e)

    closers = side_u & side_v
    joined = {f for f in side_u | side_v if set(g.edges[f]) <= {u, v}}
    keep_u, keep_v = side_u - joined, side_v - joined

    if slot_u is None and slot_v is None:
        case, sub = "1", ""
        L, R = keep_u | closers, keep_v
    elif slot_u is None or slot_v is None:
        case = "2"
        if slot_u is None:
            x_slot, x_keep, w_keep, sub = slot_v, keep_v, keep_u, "v"
        else:
            x_slot, x_keep, w_keep, sub = slot_u, keep_u, keep_v, "u"
        sub += "L" if x_slot == "R" else "R"  # side of x that held e
        if x_slot == "L":
            L, R = x_keep | closers, w_keep
        else:
            L, R = w_keep, x_keep | closers
    else:
        case = "3"
        sub = ("L" if slot_u == "R" else "R") + ("L" if slot_v == "R" else "R")
        if slot_u != slot_v:
            left, right = (keep_u, keep_v) if slot_u == "L" else (keep_v, keep_u)
        else:
            left, right = keep_u, keep_v  # u < v
        L, R = left | closers, right

    survivor = min(u, v)
    new_graph = contract_edge(g, e)
    new_ctx = LeftRightContext({w: s for w, s in ctx.entries.items() if w not in (u, v)})
    new_ctx.entries[survivor] = (frozenset(L), frozenset(R))
    out = HcEngineState(new_graph, new_ctx, state.n, state.chosen + [e], state.step + 1)
    out.last_step = {"case": case, "subcase": sub, "merged": [u, v], "survivor": survivor}
    bad = new_ctx.problems(new_graph)
    if bad:
        raise InternalInvariantFailure("; ".join(bad))
    return out


def finalize(state: HcEngineState, original: MultiGraph) -> HamiltonianCycle:
    """Pick the closing edge at the last vertex and assemble the cycle on ``original``."""
    if len(state.graph) != 1:
        raise InternalInvariantFailure(f"finalize with {len(state.graph)} vertices left")
    (z,) = state.graph.vertices
    if z not in state.ctx:
        raise InternalInvariantFailure(f"last vertex {z} has no context")
    L, R = state.ctx[z]
    if bool(L) == bool(R):
        raise InternalInvariantFailure(f"context at {z} must have exactly one empty side, got L={sorted(L)} R={sorted(R)}")
    chosen = state.chosen + [min(L or R)]
    cycle = cycle_from_edges({f: original.edges[f] for f in chosen})
    if cycle is None or len(cycle.order) != len(original) or not validate_hamiltonian_cycle(original, cycle):
        raise InternalInvariantFailure(f"chosen edges {chosen} do not form a Hamiltonian cycle")
    return cycle


def query_json(g: MultiGraph, ctx: LeftRightContext) -> dict[str, Any]:
    return {"edges": [[f, *g.edges[f]] for f in sorted(g.edges)], "ctx": ctx.to_json()}


def complete_hamiltonian_cycle(
    G: MultiGraph,
    oracle: HcOracle,
    *,
    on_step: Callable[[HcEngineState, HcEngineState, int], None] | None = None,
) -> HcRun:
    """Build a Hamiltonian cycle of ``G`` with exactly ``n - 1`` oracle calls.

    ``on_step(before, after, e)`` is called after every contraction.
    """
    state = HcEngineState.start(G)
    trace: list[dict[str, Any]] = []
    n = len(G)
    if n <= 1:
        return HcRun(HamiltonianCycle(tuple(sorted(G.vertices)), ()), trace, 0)
    for step in range(1, n):
        record: dict[str, Any] = {"step": step, "query": query_json(state.graph, state.ctx)}
        e = oracle(state.graph, state.ctx)
        record["answer"] = e
        try:
            if e not in state.graph.edges or state.graph.is_loop(e):
                raise OracleViolation(f"answer {e} is not a live non-loop edge")
            nxt = contract_and_update(state, e)
        except OracleViolation as exc:
            exc.record = record
            raise
        record.update(nxt.last_step)
        trace.append(record)
        if on_step is not None:
            on_step(state, nxt, e)
        state = nxt
    cycle = finalize(state, G)
    (closing,) = set(cycle.edges) - set(state.chosen)
    trace.append({"step": n, "closing_edge": closing, "cycle": list(cycle.order)})
    return HcRun(cycle, trace, n - 1)
