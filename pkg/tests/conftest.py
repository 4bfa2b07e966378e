from __future__ import annotations

import itertools

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from partial_search.graphs import MultiGraph, SimpleGraph

settings.register_profile("repo", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@st.composite
def simple_graphs(draw, min_n: int = 0, max_n: int = 5) -> SimpleGraph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph.from_edges(n, chosen)


@st.composite
def permutations_of(draw, g: SimpleGraph) -> dict[int, int]:
    vs = sorted(g.vertices)
    return dict(zip(vs, draw(st.permutations(vs))))


@st.composite
def multigraphs(draw, min_n: int = 2, max_n: int = 5, max_m: int = 9) -> MultiGraph:
    n = draw(st.integers(min_n, max_n))
    v = st.integers(1, n)
    pairs = draw(st.lists(st.tuples(v, v), min_size=1, max_size=max_m))
    return MultiGraph.from_edge_list(n, pairs)


def path(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(k, k + 1) for k in range(1, n)])


def complete(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def multi_complete(n: int) -> MultiGraph:
    return MultiGraph.from_edge_list(n, itertools.combinations(range(1, n + 1), 2))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
