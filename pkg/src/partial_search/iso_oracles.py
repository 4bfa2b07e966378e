"""Executable single-pair oracles for the isomorphism engine.

The enumeration-backed policies need, for the queried pair of gadget graphs,
the set of *feasible* pairs: ``(x, y)`` such that some isomorphism maps ``x`` to
``y``. Listing every isomorphism is hopeless once cliques appear (a 4-clique
alone contributes 4! automorphisms), so feasibility is computed on the twin
quotient instead: vertices with equal open or closed neighbourhoods can be
permuted freely, so orbits of the graph are unions of twin classes lying in
one orbit of the (labelled) quotient. The number of isomorphisms sending
``x`` to ``y`` is ``|ISO(g, h)| / |orbit(x)|``, which is all the adversarial
policy needs.

:func:`enumerate_isomorphisms` is a plain backtracking enumerator kept
independent of the quotient machinery; tests use it to check the latter.
"""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .errors import FixtureNotFound, InstanceTooLarge, NotIsomorphic, OracleViolation, PlantedViolation
from .graphs import SimpleGraph, validate_isomorphism
from .iso_engine import GadgetGraph, IsoRun, complete_isomorphism

HONEST = "honest-lex"
ADVERSARIAL = "adversarial-min-freedom"
RANDOM = "seeded-random"
PLANTED = "planted"
ISO_POLICIES = (HONEST, ADVERSARIAL, RANDOM, PLANTED)

DEFAULT_ENUM_LIMIT = 10
# n = 4 inputs already produce 16-vertex gadget graphs, n = 5 up to 32.
DEFAULT_GUARD = 40

PHI1 = {1: 1, 2: 5, 3: 4, 4: 3, 5: 2}
PHI2 = {1: 5, 2: 1, 3: 4, 4: 3, 5: 2}


def default_guard() -> int:
    value = os.environ.get("P2C_GUARD")
    return int(value) if value else DEFAULT_GUARD


# --------------------------------------------------------------------------
# brute force


def enumerate_isomorphisms(g: SimpleGraph, h: SimpleGraph, max_vertices: int = DEFAULT_ENUM_LIMIT) -> list[dict[int, int]]:
    """All isomorphisms g -> h in lexicographic order of their image tuples."""
    if len(g) > max_vertices or len(h) > max_vertices:
        raise InstanceTooLarge(f"enumeration limited to {max_vertices} vertices, got {len(g)}")
    if len(g) != len(h) or g.num_edges() != h.num_edges():
        return []
    order = sorted(g.vertices)
    targets = sorted(h.vertices)
    out: list[dict[int, int]] = []
    phi: dict[int, int] = {}
    used: set[int] = set()

    def extend(k: int) -> None:
        if k == len(order):
            out.append(dict(phi))
            return
        x = order[k]
        for y in targets:
            if y in used or g.degree(x) != h.degree(y):
                continue
            if any(g.has_edge(x, xp) != h.has_edge(y, phi[xp]) for xp in order[:k]):
                continue
            phi[x] = y
            used.add(y)
            extend(k + 1)
            used.discard(y)
            del phi[x]

    extend(0)
    return out


# --------------------------------------------------------------------------
# twin quotient + individualisation/refinement

Adj = dict[int, frozenset[int]]


def _refine(adjs: list[Adj], colours: list[dict[int, int]]) -> list[dict[int, int]]:
    """Joint colour refinement; colour names are shared across all graphs."""
    count = len({c for col in colours for c in col.values()})
    while True:
        sigs = [
            {v: (col[v], tuple(sorted(col[w] for w in adj[v]))) for v in adj}
            for adj, col in zip(adjs, colours)
        ]
        palette = {s: k for k, s in enumerate(sorted({s for sig in sigs for s in sig.values()}))}
        colours = [{v: palette[s] for v, s in sig.items()} for sig in sigs]
        if len(palette) == count:
            return colours
        count = len(palette)


def _histogram(col: dict[int, int]) -> Counter[int]:
    return Counter(col.values())


def _search(a: Adj, b: Adj, ca: dict[int, int], cb: dict[int, int]) -> dict[int, int] | None:
    """Find one colour-preserving isomorphism a -> b (colours already refined jointly)."""
    if _histogram(ca) != _histogram(cb):
        return None
    classes: dict[int, list[int]] = {}
    for v in sorted(a):
        classes.setdefault(ca[v], []).append(v)
    open_classes = [c for c, vs in classes.items() if len(vs) > 1]
    if not open_classes:
        inverse = {c: v for v, c in cb.items()}
        phi = {v: inverse[ca[v]] for v in a}
        if all(frozenset(phi[w] for w in a[v]) == b[phi[v]] for v in a):
            return phi
        return None
    target = min(open_classes, key=lambda c: (len(classes[c]), c))
    x = classes[target][0]
    fresh = max(max(ca.values()), max(cb.values())) + 1
    for y in sorted(v for v in b if cb[v] == target):
        na, nb = _refine([a, b], [{**ca, x: fresh}, {**cb, y: fresh}])
        phi = _search(a, b, na, nb)
        if phi is not None:
            return phi
    return None


def _twin_quotient(adj: Adj) -> tuple[Adj, dict[int, tuple[str, int]], list[tuple[int, ...]]]:
    """Collapse true twins (equal closed nbhd) and false twins (equal open nbhd).

    A vertex cannot have both a true and a false twin, so the classes partition V.
    """
    by_closed: dict[frozenset[int], list[int]] = {}
    by_open: dict[frozenset[int], list[int]] = {}
    for v in sorted(adj):
        by_closed.setdefault(adj[v] | {v}, []).append(v)
        by_open.setdefault(adj[v], []).append(v)
    classes: list[tuple[int, ...]] = []
    labels: list[tuple[str, int]] = []
    seen: set[int] = set()
    for v in sorted(adj):
        if v in seen:
            continue
        true_cls = by_closed[adj[v] | {v}]
        false_cls = by_open[adj[v]]
        if len(true_cls) > 1:
            cls, kind = true_cls, "true"
        elif len(false_cls) > 1:
            cls, kind = false_cls, "false"
        else:
            cls, kind = [v], "single"
        classes.append(tuple(cls))
        labels.append((kind, len(cls)))
        seen.update(cls)
    index = {v: k for k, cls in enumerate(classes) for v in cls}
    qadj = {k: frozenset(index[w] for w in adj[cls[0]] if index[w] != k) for k, cls in enumerate(classes)}
    return qadj, dict(enumerate(labels)), classes


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _graph_key(g: SimpleGraph) -> tuple:
    return tuple((v, tuple(sorted(g.adj[v]))) for v in sorted(g.adj))


@lru_cache(maxsize=8192)
def _feasible_from_keys(key_g: tuple, key_h: tuple) -> tuple[tuple[int, tuple[int, ...]], ...] | None:
    adj_g: Adj = {v: frozenset(nb) for v, nb in key_g}
    adj_h: Adj = {v: frozenset(nb) for v, nb in key_h}
    if len(adj_g) != len(adj_h):
        return None
    if not adj_g:
        return ()
    qg, lab_g, cls_g = _twin_quotient(adj_g)
    qh, lab_h, cls_h = _twin_quotient(adj_h)
    names = {lab: k for k, lab in enumerate(sorted(set(lab_g.values()) | set(lab_h.values())))}
    cg, ch = _refine([qg, qh], [{k: names[l] for k, l in lab_g.items()}, {k: names[l] for k, l in lab_h.items()}])
    psi = _search(qg, qh, cg, ch)
    if psi is None:
        return None

    # orbits of the labelled quotient of g
    (cgg,) = _refine([qg], [{k: names[l] for k, l in lab_g.items()}])
    uf = _UnionFind(qg)
    fresh = max(cgg.values()) + 1
    for a, b in itertools.combinations(sorted(qg), 2):
        if cgg[a] != cgg[b] or uf.find(a) == uf.find(b):
            continue
        ca, cb = _refine([qg, qg], [{**cgg, a: fresh}, {**cgg, b: fresh}])
        aut = _search(qg, qg, ca, cb)
        if aut is not None:
            for k, m in aut.items():
                uf.union(k, m)

    orbit_images: dict[int, list[int]] = {}
    for k in qg:
        orbit_images.setdefault(uf.find(k), []).extend(cls_h[psi[k]])
    out = []
    for k, cls in enumerate(cls_g):
        ys = tuple(sorted(orbit_images[uf.find(k)]))
        out.extend((x, ys) for x in cls)
    return tuple(sorted(out))


def feasible_pairs(g: SimpleGraph, h: SimpleGraph) -> dict[int, list[int]]:
    """Map each x in V(g) to the sorted y in V(h) with phi(x) = y for some isomorphism phi.

    Raises NotIsomorphic when g and h are not isomorphic.
    """
    result = _feasible_from_keys(_graph_key(g), _graph_key(h))
    if result is None:
        raise NotIsomorphic("queried graphs are not isomorphic")
    return {x: list(ys) for x, ys in result}


def find_isomorphism(g: SimpleGraph, h: SimpleGraph) -> dict[int, int] | None:
    """One isomorphism g -> h, or None (individualisation/refinement on the full graphs)."""
    if len(g) != len(h):
        return None
    a = {v: frozenset(nb) for v, nb in g.adj.items()}
    b = {v: frozenset(nb) for v, nb in h.adj.items()}
    if not a:
        return {}
    ca, cb = _refine([a, b], [{v: 0 for v in a}, {v: 0 for v in b}])
    return _search(a, b, ca, cb)


def is_isomorphic(g: SimpleGraph, h: SimpleGraph) -> bool:
    return len(g) == len(h) and _feasible_from_keys(_graph_key(g), _graph_key(h)) is not None


# --------------------------------------------------------------------------
# policies


@dataclass(frozen=True)
class IsoOraclePolicy:
    kind: str
    seed: int | None = None
    planted_map: Mapping[int, int] | None = None
    guard: int = DEFAULT_GUARD

    def __post_init__(self) -> None:
        if self.kind not in ISO_POLICIES:
            raise ValueError(f"unknown iso oracle policy {self.kind!r}")
        if self.kind == PLANTED and self.planted_map is None:
            raise ValueError("planted policy needs planted_map")
        if self.kind == RANDOM and self.seed is None:
            raise ValueError("seeded-random policy needs a seed")

    def __call__(self, gG: GadgetGraph, gH: GadgetGraph) -> tuple[int, int]:
        return answer(self, gG, gH)


def _query_rng(seed: int, g: SimpleGraph, h: SimpleGraph) -> random.Random:
    # Seeded by the query itself, so a policy object is reentrant and replayable.
    return random.Random(f"{seed}|{_graph_key(g)}|{_graph_key(h)}")


def answer(policy: IsoOraclePolicy, gG: GadgetGraph, gH: GadgetGraph) -> tuple[int, int]:
    """One vertex pair lying in some isomorphism of the two gadget graphs."""
    if policy.kind == PLANTED:
        x = min(gG.vertices())
        return x, planted_image(policy.planted_map, gG, gH, x)

    if max(gG.order, gH.order) > policy.guard:
        raise InstanceTooLarge(f"gadget graph has {gG.order} vertices, guard is {policy.guard}")
    g, h = gG.graph, gH.graph
    feas = feasible_pairs(g, h)
    if policy.kind == HONEST:
        x = min(feas)
        return x, feas[x][0]
    if policy.kind == RANDOM:
        pairs = [(x, y) for x in sorted(feas) for y in feas[x]]
        return _query_rng(policy.seed, g, h).choice(pairs)

    # Pairs whose x has the largest orbit lie in the fewest isomorphisms.
    widest = max(len(ys) for ys in feas.values())
    pairs = [(x, y) for x in sorted(feas) if len(feas[x]) == widest for y in feas[x]]
    with_new = [(x, y) for x, y in pairs if not gG.is_old(x) or not gH.is_old(y)]
    return _query_rng(policy.seed or 0, g, h).choice(with_new or pairs)


def isomorphisms_through(feas: Mapping[int, list[int]], total: int, x: int, y: int) -> int:
    """How many of ``total`` isomorphisms send x to y."""
    if y not in feas.get(x, ()):
        return 0
    return total // len(feas[x])


def planted_image(planted_map: Mapping[int, int], gG: GadgetGraph, gH: GadgetGraph, v: int) -> int:
    """Image of ``v`` under the canonical extension of ``planted_map`` to the gadget graphs.

    Old vertices map by ``planted_map``; a clique member maps to the member with
    the same ordinal in the same-size clique anchored at the anchor's image.
    """
    if gG.is_old(v):
        w = planted_map.get(v)
        if w is None or not gH.is_old(w):
            raise PlantedViolation(f"planted image of old vertex {v} is not a live old vertex")
        if gG.signature(v) != gH.signature(w):
            raise PlantedViolation(f"planted pair ({v}, {w}) disagrees on clique registry")
        if {planted_map.get(a) for a in gG.old_neighbors(v)} != gH.old_neighbors(w):
            raise PlantedViolation(f"planted map does not carry old neighbours of {v} onto those of {w}")
        return w
    rec = gG.clique_of(v)
    if rec is None:
        raise PlantedViolation(f"{v} is not a vertex of the queried graph")
    anchor = planted_image(planted_map, gG, gH, rec.anchor)
    for other in gH.cliques_at(anchor):
        if other.size == rec.size:
            return other.members[rec.ordinal(v)]
    raise PlantedViolation(f"no {rec.size}-clique anchored at planted image {anchor}")


# --------------------------------------------------------------------------
# worked example fixture


WALKTHROUGH = ((5, 2), (1, 5), (2, 1), None, (4, 3))
WALKTHROUGH_RESOLVED = (3, 4)


def replay_walkthrough(G: SimpleGraph, H: SimpleGraph) -> IsoRun | None:
    """Drive the engine with the worked example's answer sequence.

    Answers are (5, 2), (1, 5), (2, 1), then a pair of new vertices whose anchors
    are 3 and 4, then (4, 3). Returns the run, or None if some answer is not a
    legal oracle answer on that pair of graphs.
    """
    step = iter(WALKTHROUGH)

    def scripted(gG: GadgetGraph, gH: GadgetGraph) -> tuple[int, int]:
        feas = feasible_pairs(gG.graph, gH.graph)
        pair = next(step)
        if pair is None:
            ax, ay = WALKTHROUGH_RESOLVED
            options = [
                (x, y)
                for x in sorted(feas)
                if not gG.is_old(x) and gG.clique_of(x).anchor == ax
                for y in feas[x]
                if not gH.is_old(y) and gH.clique_of(y).anchor == ay
            ]
            if not options:
                raise _ScriptFailed
            return options[0]
        if pair[1] not in feas.get(pair[0], ()):
            raise _ScriptFailed
        return pair

    try:
        return complete_isomorphism(G, H, scripted)
    except (_ScriptFailed, OracleViolation):
        return None


class _ScriptFailed(Exception):
    pass


def find_example1_fixture() -> tuple[SimpleGraph, SimpleGraph]:
    """The 5-vertex pair (G, H) of the worked example, recovered by exhaustive search.

    Conditions: ISO(G, H) = {PHI1, PHI2}; deleting 5 from G and 2 from H leaves six
    isomorphisms, exactly two of which extend the pair (5, 2); the gadget step for
    (5, 2) hangs cliques on 4 in G and 3 in H only; and the full answer sequence
    of the walkthrough is legal and ends in PHI2. Returns the least match by edge list.
    """
    all_pairs = list(itertools.combinations(range(1, 6), 2))
    matches = []
    for bits in itertools.product((0, 1), repeat=len(all_pairs)):
        G = SimpleGraph.from_edges(5, (p for p, b in zip(all_pairs, bits) if b))
        H = G.relabel(PHI1)
        isos = enumerate_isomorphisms(G, H)
        if sorted(map(sorted_items, isos)) != sorted(map(sorted_items, (PHI1, PHI2))):
            continue
        naive = enumerate_isomorphisms(G.subgraph(G.vertices - {5}), H.subgraph(H.vertices - {2}))
        extending = [psi for psi in naive if validate_isomorphism(G, H, {**psi, 5: 2})]
        if len(naive) != 6 or len(extending) != 2:
            continue
        if G.neighbors(5) != {4} or H.neighbors(2) != {3}:
            continue
        run = replay_walkthrough(G, H)
        if run is not None and run.phi == PHI2:
            matches.append((tuple(G.edges()), G, H))
    if not matches:
        raise FixtureNotFound("no 5-vertex pair matches the worked example")
    _, G, H = min(matches, key=lambda m: m[0])
    return G, H


def sorted_items(m: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(m.items()))
