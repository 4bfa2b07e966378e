"""Instance generators for the exhaustive and randomized suites."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterator

from .graphs import HamiltonianCycle, MultiGraph, SimpleGraph, cycle_from_order


def labelled_graphs(n: int) -> Iterator[SimpleGraph]:
    """All 2^(n choose 2) simple graphs on vertices 1..n."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        yield SimpleGraph.from_edges(n, (p for p, b in zip(pairs, bits) if b))


def _canonical_simple(g: SimpleGraph) -> tuple:
    vs = sorted(g.vertices)
    best = None
    for perm in itertools.permutations(range(1, len(vs) + 1)):
        m = dict(zip(vs, perm))
        key = tuple(sorted((min(m[u], m[v]), max(m[u], m[v])) for u, v in g.edges()))
        if best is None or key < best:
            best = key
    return best


def isomorphic_pairs(max_n: int) -> Iterator[tuple[SimpleGraph, SimpleGraph]]:
    """Every ordered pair (G, H) of isomorphic labelled graphs on 0..max_n vertices."""
    for n in range(max_n + 1):
        classes: dict[tuple, list[SimpleGraph]] = {}
        for g in labelled_graphs(n):
            classes.setdefault(_canonical_simple(g), []).append(g)
        for members in classes.values():
            for G in members:
                for H in members:
                    yield G, H


def graph_classes(n: int) -> list[SimpleGraph]:
    """One representative per isomorphism class on n vertices."""
    seen: dict[tuple, SimpleGraph] = {}
    for g in labelled_graphs(n):
        seen.setdefault(_canonical_simple(g), g)
    return list(seen.values())


def _canonical_multi(n: int, pairs: tuple[tuple[int, int], ...]) -> tuple:
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        key = tuple(sorted((min(perm[a - 1], perm[b - 1]), max(perm[a - 1], perm[b - 1])) for a, b in pairs))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def hamiltonian_multigraphs(max_n: int = 6, max_m: int = 9) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    """Loopless connected Hamiltonian multigraphs up to isomorphism, as (n, edge pairs).

    Every such graph is isomorphic to one containing the cycle 1-2-...-n-1, so it
    suffices to add multisets of extra edges to that cycle and deduplicate.
    Graphs come in canonical form; n = 1 is the bare vertex.
    """
    out: list[tuple[int, tuple[tuple[int, int], ...]]] = [(1, ())]
    for n in range(2, max_n + 1):
        base = [(1, 2), (1, 2)] if n == 2 else [(k, k % n + 1) for k in range(1, n + 1)]
        base = [(min(a, b), max(a, b)) for a, b in base]
        slots = list(itertools.combinations(range(1, n + 1), 2))
        seen: set[tuple] = set()
        for extra in range(0, max_m - len(base) + 1):
            for add in itertools.combinations_with_replacement(slots, extra):
                canon = _canonical_multi(n, tuple(base) + add)
                if canon not in seen:
                    seen.add(canon)
                    out.append((n, canon))
    return tuple(out)


def random_hamiltonian_multigraph(n: int, rng: random.Random, extra: int | None = None, loops: bool = True) -> tuple[MultiGraph, HamiltonianCycle]:
    """A random multigraph on 1..n with a planted Hamiltonian cycle, edges in shuffled order."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    pairs = [(order[k], order[(k + 1) % n]) for k in range(n)]
    if n == 2:
        pairs = [(order[0], order[1]), (order[1], order[0])]
    extra = rng.randint(0, 2 * n) if extra is None else extra
    for _ in range(extra):
        a = rng.randint(1, n)
        b = a if loops and rng.random() < 0.1 else rng.randint(1, n)
        if a == b and not loops:
            continue
        pairs.append((a, b))
    rng.shuffle(pairs)
    g = MultiGraph.from_edge_list(n, pairs)
    cycle = cycle_from_order(g, order)
    assert cycle is not None
    return g, cycle


def random_isomorphic_pair(n: int, rng: random.Random, p: float = 0.5) -> tuple[SimpleGraph, SimpleGraph, dict[int, int]]:
    """G(n, p) on 1..n, a random relabelling H of it, and the relabelling G -> H."""
    G = SimpleGraph.from_edges(n, (e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < p))
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    mapping = dict(zip(range(1, n + 1), perm))
    return G, G.relabel(mapping), mapping
