"""Edge oracles for the Hamiltonian-cycle engine."""

from __future__ import annotations

import json
import os
import random
from collections import Counter
from dataclasses import dataclass

from .errors import InstanceTooLarge, NoWitness, PlantedViolation
from .graphs import HamiltonianCycle, MultiGraph
from .hc_engine import LeftRightContext

HONEST = "honest-lex"
ADVERSARIAL = "adversarial-min-freedom"
RANDOM = "seeded-random"
PLANTED = "planted"
CONTEXT_FREE = "context-free-experimental"
HC_POLICIES = (HONEST, ADVERSARIAL, RANDOM, PLANTED, CONTEXT_FREE)

DEFAULT_GUARD = 9


def default_guard() -> int:
    value = os.environ.get("P2C_GUARD")
    return int(value) if value else DEFAULT_GUARD


def enumerate_consistent_cycles(
    g: MultiGraph, ctx: LeftRightContext | None = None, max_vertices: int = DEFAULT_GUARD
) -> list[HamiltonianCycle]:
    """Hamiltonian cycles of ``g`` (as distinct edge sets) consistent with ``ctx``.

    Sorted by their sorted edge-id tuples. Cycles start at the least vertex; each
    undirected cycle is reported once, in the direction whose first edge id is
    smaller than its last.
    """
    ctx = ctx or LeftRightContext()
    n = len(g)
    if n > max_vertices:
        raise InstanceTooLarge(f"cycle enumeration limited to {max_vertices} vertices, got {n}")
    if n == 0:
        return []
    inc = g.incidence()
    if n == 1:
        (v,) = g.vertices
        if v in ctx:
            return []  # one edge cannot be on both sides
        return [HamiltonianCycle((v,), (e,)) for e in inc[v]]

    side: dict[int, dict[int, int]] = {}  # vertex -> edge -> 0 (L) / 1 (R)
    for v, (L, R) in ctx.entries.items():
        side[v] = {**{e: 0 for e in L}, **{e: 1 for e in R}}
    used_sides: dict[int, list[int]] = {v: [0, 0] for v in side}

    def admit(e: int, v: int) -> bool:
        if v not in side:
            return True
        s = side[v].get(e)
        return s is not None and used_sides[v][s] == 0

    def mark(e: int, v: int, delta: int) -> None:
        if v in side:
            used_sides[v][side[v][e]] += delta

    start = min(g.vertices)
    order = [start]
    edges: list[int] = []
    visited = {start}
    out: list[HamiltonianCycle] = []

    def extend(cur: int) -> None:
        if len(order) == n:
            for e in inc[cur]:
                if g.other_end(e, cur) != start or e in edges or e <= edges[0]:
                    continue
                if cur == start or not (admit(e, cur) and admit(e, start)):
                    continue
                out.append(HamiltonianCycle(tuple(order), tuple(edges + [e])))
            return
        for e in inc[cur]:
            w = g.other_end(e, cur)
            if w in visited or not (admit(e, cur) and admit(e, w)):
                continue
            mark(e, cur, 1)
            mark(e, w, 1)
            order.append(w)
            edges.append(e)
            visited.add(w)
            extend(w)
            visited.discard(w)
            edges.pop()
            order.pop()
            mark(e, cur, -1)
            mark(e, w, -1)

    extend(start)
    out.sort(key=lambda c: tuple(sorted(c.edges)))
    return out


@dataclass(frozen=True)
class HcOraclePolicy:
    kind: str
    seed: int | None = None
    planted_cycle: HamiltonianCycle | None = None
    guard: int = DEFAULT_GUARD

    def __post_init__(self) -> None:
        if self.kind not in HC_POLICIES:
            raise ValueError(f"unknown hc oracle policy {self.kind!r}")
        if self.kind == PLANTED and self.planted_cycle is None:
            raise ValueError("planted policy needs planted_cycle")
        if self.kind == RANDOM and self.seed is None:
            raise ValueError("seeded-random policy needs a seed")

    def __call__(self, g: MultiGraph, ctx: LeftRightContext) -> int:
        return answer(self, g, ctx)


def _query_rng(seed: int, g: MultiGraph, ctx: LeftRightContext) -> random.Random:
    key = json.dumps([seed, sorted(g.edges.items()), ctx.to_json()])
    return random.Random(key)


def answer(policy: HcOraclePolicy, g: MultiGraph, ctx: LeftRightContext) -> int:
    """An edge lying on some Hamiltonian cycle of ``g`` consistent with ``ctx``."""
    if policy.kind == PLANTED:
        return _planted_answer(policy.planted_cycle, g)

    cycles = enumerate_consistent_cycles(g, None if policy.kind == CONTEXT_FREE else ctx, policy.guard)
    if not cycles:
        raise NoWitness("no Hamiltonian cycle is consistent with the context")
    if policy.kind == HONEST:
        return min(cycles[0].edges)
    if policy.kind == ADVERSARIAL:
        counts = Counter(e for c in cycles for e in c.edges)
        fewest = min(counts.values())
        return _query_rng(policy.seed or 0, g, ctx).choice(sorted(e for e, k in counts.items() if k == fewest))
    edges = sorted({e for c in cycles for e in c.edges})
    return _query_rng(policy.seed or 0, g, ctx).choice(edges)


def _planted_answer(cycle: HamiltonianCycle, g: MultiGraph) -> int:
    # Edge ids survive contraction, so the unchosen planted edges are exactly the live ones.
    remaining = [e for e in cycle.edges if e in g.edges]
    if not remaining:
        raise PlantedViolation("every planted edge has been contracted away")
    if len(g) >= 2 and any(g.is_loop(e) for e in remaining):
        raise PlantedViolation("a planted edge became a self-loop before being chosen")
    return min(remaining)
