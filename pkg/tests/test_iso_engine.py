from __future__ import annotations

import pytest

from conftest import complete, path
from helpers import graph, member, pair, scripted
from partial_search.errors import InternalInvariantFailure, OracleViolation
from partial_search.graphs import validate_isomorphism
from partial_search.iso_engine import (
    NEW_NEW,
    NEW_OLD,
    OLD_NEW,
    OLD_OLD,
    GadgetGraph,
    IsoEngineState,
    _check_compatible,
    complete_isomorphism,
    reduce_pair,
    resolve_answer,
)
from partial_search.iso_oracles import (
    ADVERSARIAL,
    HONEST,
    PHI1,
    PHI2,
    IsoOraclePolicy,
    enumerate_isomorphisms,
    find_example1_fixture,
)


def test_k3_honest_gives_identity():
    run = complete_isomorphism(complete(3), complete(3), IsoOraclePolicy(HONEST))
    assert run.phi == {1: 1, 2: 2, 3: 3}
    assert run.oracle_calls == 3


@pytest.mark.parametrize("policy", [IsoOraclePolicy(HONEST), IsoOraclePolicy(ADVERSARIAL, seed=3)])
def test_path_result_is_one_of_its_two_isomorphisms(policy):
    run = complete_isomorphism(path(3), path(3), policy)
    assert run.phi in ({1: 1, 2: 2, 3: 3}, {1: 3, 2: 2, 3: 1})


def test_example1_pair_5_2_first():
    G, H = find_example1_fixture()
    run = complete_isomorphism(G, H, scripted((5, 2), *[IsoOraclePolicy(HONEST)] * 4))
    assert run.phi in (PHI1, PHI2)
    assert run.trace[0]["resolved"] == [5, 2]


def test_single_vertex_and_empty():
    g = graph(1)
    run = complete_isomorphism(g, g, IsoOraclePolicy(HONEST))
    assert run.phi == {1: 1} and run.oracle_calls == 1
    assert complete_isomorphism(graph(0), graph(0), IsoOraclePolicy(HONEST)).oracle_calls == 0


def test_k3_first_loop_attaches_size_three_cliques():
    state = IsoEngineState.start(complete(3), complete(3))
    reduce_pair(state, 1, 1, OLD_OLD)
    for gadget in (state.gG, state.gH):
        assert gadget.order == 2 + 2 * 2
        assert [(c.anchor, c.size) for a in (2, 3) for c in gadget.cliques_at(a)] == [(2, 3), (3, 3)]
        assert gadget.graph.num_edges() == 1 + 2 * 3


def test_anchor_accrues_two_cliques_on_p4():
    state = IsoEngineState.start(path(4), path(4))
    reduce_pair(state, 1, 1, OLD_OLD)
    reduce_pair(state, 3, 3, OLD_OLD)
    for gadget in (state.gG, state.gH):
        at2 = gadget.cliques_at(2)
        assert [c.size for c in at2] == [4, 5]
        assert set(at2[0].members).isdisjoint(at2[1].members)
        assert [c.size for c in gadget.cliques_at(4)] == [5]
        g = gadget.graph
        assert g.neighbors(2) == set(at2[0].members) | set(at2[1].members)


def test_deleting_an_anchor_drops_its_cliques():
    state = IsoEngineState.start(path(3), path(3))
    reduce_pair(state, 1, 1, OLD_OLD)
    reduce_pair(state, 2, 2, OLD_OLD)
    # the 3-clique at 2 is gone; 3 carries only the loop-2 clique of size 4
    assert state.gG.order == 1 + 3
    assert [c.size for c in state.gG.cliques_at(3)] == [4]


def test_gadget_graph_members_and_lookup():
    g = GadgetGraph(path(3), first_new_id=10)
    rec = g.attach_clique(2, 4, loop=1)
    assert list(rec.members) == [10, 11, 12]
    assert g.clique_of(11) is rec and rec.ordinal(12) == 2
    assert g.clique_of(13) is None and g.clique_of(3) is None
    assert g.graph.degree(10) == 3 and g.signature(2) == (2, (4,))
    with pytest.raises(ValueError):
        GadgetGraph(path(3), first_new_id=3)


# resolve_answer

def _two_k2():
    return graph(4, (1, 2), (3, 4))


def test_resolve_old_old():
    state = IsoEngineState.start(path(3), path(3))
    assert resolve_answer(state, 1, 3) == (OLD_OLD, 1, 3)


def test_resolve_old_new_component():
    G = H = _two_k2()
    state = IsoEngineState.start(G, H)
    reduce_pair(state, 1, 1, OLD_OLD)
    y = state.gH.cliques_at(2)[0].members[1]
    tag, xs, ys = resolve_answer(state, 2, y)
    assert (tag, xs, ys) == (OLD_NEW, 2, 2)
    # the resolved pair extends the partial map in some isomorphism of the inputs
    assert any(phi[1] == 1 and phi[xs] == ys for phi in enumerate_isomorphisms(G, H))


def test_resolve_new_old_and_new_new():
    state = IsoEngineState.start(_two_k2(), _two_k2())
    reduce_pair(state, 1, 1, OLD_OLD)
    x = state.gG.cliques_at(2)[0].members[0]
    assert resolve_answer(state, x, 2) == (NEW_OLD, 2, 2)
    y = state.gH.cliques_at(2)[0].members[2]
    assert resolve_answer(state, x, y) == (NEW_NEW, 2, 2)


def test_component_answers_delete_components_without_attaching():
    run = complete_isomorphism(_two_k2(), _two_k2(), scripted((1, 1), pair(2, member("H", 2, 0)), (3, 3), (4, 4)))
    assert run.trace[1]["case"] == OLD_NEW
    assert run.trace[1]["cliques_added"] == {"G": [], "H": []}
    assert run.trace[1]["vertices_deleted"] == {"G": 4, "H": 4}
    assert validate_isomorphism(_two_k2(), _two_k2(), run.phi)


# contract-violating oracles

LEAVES = graph(5, (1, 2), (2, 3), (3, 4), (3, 5))  # leaf 1 hangs off a degree-2 vertex, leaves 4, 5 off vertex 3
P3K2 = graph(5, (1, 2), (2, 3), (4, 5))

VIOLATIONS = {
    "outside": (path(3), [(9, 1)]),
    "old-old signature": (path(3), [(1, 2)]),
    "old-new with old neighbours": (path(4), [(1, 1), pair(3, member("H", 2))]),
    "old-new anchor not isolated": (P3K2, [(4, 1), pair(5, member("H", 2))]),
    "new-old not components": (path(4), [(1, 1), pair(member("G", 2), 3)]),
    "new-new size mismatch": (path(4), [(1, 1), (4, 4), pair(member("G", 2), member("H", 3))]),
    "new-new anchor signature": (LEAVES, [(1, 4), pair(member("G", 2), member("H", 3))]),
}


@pytest.mark.parametrize("name", sorted(VIOLATIONS))
def test_violating_oracle_is_rejected(name):
    g, answers = VIOLATIONS[name]
    with pytest.raises(OracleViolation) as info:
        complete_isomorphism(g, g, scripted(*answers))
    assert info.value.record["loop"] == len(answers)
    assert "answer" in info.value.record


def test_compatibility_check_rejects_inconsistent_pair():
    state = IsoEngineState.start(path(3), path(3))
    state.phi.pairs.append((1, 1))
    with pytest.raises(OracleViolation):
        _check_compatible(state, 2, 3)
    _check_compatible(state, 2, 2)


def test_lying_oracle_never_produces_a_wrong_map():
    # Passes every per-loop check at loop 1 but leads nowhere valid.
    with pytest.raises((OracleViolation, InternalInvariantFailure)):
        complete_isomorphism(P3K2, P3K2, scripted((4, 1), (5, 2), (1, 3), (2, 4), (3, 5)))


def test_unequal_orders_rejected():
    with pytest.raises(OracleViolation):
        complete_isomorphism(path(3), path(2), IsoOraclePolicy(HONEST))
