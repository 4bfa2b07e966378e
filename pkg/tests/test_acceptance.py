"""Acceptance criteria 1-9.

Each test records a one-line verdict in ``RESULTS``; the conftest hook prints
them at the end of the pytest run. ``python3 tests/test_acceptance.py`` runs
the criteria directly and prints the same lines.
"""

from __future__ import annotations

import json
import random
import sys
import time
from functools import lru_cache
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import member, pair, scripted  # noqa: E402
from partial_search.cli import main as cli_main  # noqa: E402
from partial_search.corpus import (  # noqa: E402
    graph_classes,
    hamiltonian_multigraphs,
    isomorphic_pairs,
    random_hamiltonian_multigraph,
    random_isomorphic_pair,
)
from partial_search.errors import OracleViolation  # noqa: E402
from partial_search.formats import multi_to_json, simple_to_json  # noqa: E402
from partial_search.graphs import MultiGraph, SimpleGraph, cycle_from_edges, validate_hamiltonian_cycle, validate_isomorphism  # noqa: E402
from partial_search.hc_engine import complete_hamiltonian_cycle, is_consistent  # noqa: E402
from partial_search.hc_oracles import HcOraclePolicy, enumerate_consistent_cycles  # noqa: E402
from partial_search.iso_engine import IsoEngineState, complete_isomorphism, reduce_pair  # noqa: E402
from partial_search.iso_oracles import (  # noqa: E402
    PHI1,
    PHI2,
    IsoOraclePolicy,
    enumerate_isomorphisms,
    find_example1_fixture,
)
from partial_search import hc_oracles, iso_oracles  # noqa: E402

RESULTS: dict[int, str] = {}

SEEDS = range(20)


def verdict(k: int, ok: bool, detail: str) -> None:
    RESULTS[k] = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(RESULTS[k])
    assert ok, RESULTS[k]


def _iso_policies() -> list[IsoOraclePolicy]:
    return ([IsoOraclePolicy(iso_oracles.HONEST), IsoOraclePolicy(iso_oracles.ADVERSARIAL)]
            + [IsoOraclePolicy(iso_oracles.RANDOM, seed=s) for s in SEEDS])


def _to_nx(g: SimpleGraph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(g.vertices)
    out.add_edges_from(g.edges())
    return out


# ---------------------------------------------------------------- criteria 1 and 3


@lru_cache(maxsize=None)
def iso_corpus_runs() -> dict:
    """Every isomorphic labelled pair on <= 4 vertices under every policy, instrumented."""
    stats = {"runs": 0, "bad_map": 0, "bad_calls": 0, "too_many_cliques": 0, "too_big_clique": 0,
             "too_big_order": 0, "max_order": 0, "seconds": 0.0}
    start = time.perf_counter()
    for G, H in isomorphic_pairs(4):
        n = len(G)
        order_bound = n + (n - 1) * (2 * n - 2)
        for policy in _iso_policies():
            run = complete_isomorphism(G, H, policy)
            stats["runs"] += 1
            stats["bad_map"] += not validate_isomorphism(G, H, run.phi)
            stats["bad_calls"] += run.oracle_calls != n
            for rec in run.trace:
                added = rec["cliques_added"]["G"] + rec["cliques_added"]["H"]
                stats["too_many_cliques"] += len(added) > 2 * (n - 1)
                stats["too_big_clique"] += any(c["size"] > 2 * n - 1 for c in added)
                order = max(rec["query"]["order"])
                stats["too_big_order"] += order > order_bound
                stats["max_order"] = max(stats["max_order"], order)
    stats["seconds"] = time.perf_counter() - start
    return stats


def test_criterion_1_exhaustive_iso_soundness():
    s = iso_corpus_runs()
    ok = s["runs"] > 0 and s["bad_map"] == 0 and s["bad_calls"] == 0 and s["seconds"] < 60
    verdict(1, ok, f"{s['runs']} runs, {s['bad_map']} invalid maps, {s['bad_calls']} wrong call counts, {s['seconds']:.1f}s (< 60s)")


def test_criterion_3_gadget_size_bound():
    s = iso_corpus_runs()
    bad = s["too_many_cliques"] + s["too_big_clique"] + s["too_big_order"]
    verdict(3, bad == 0, f"{s['runs']} runs: {s['too_many_cliques']} loops over 2(n-1) cliques, "
            f"{s['too_big_clique']} cliques over 2n-1, {s['too_big_order']} orders over n+(n-1)(2n-2); max order {s['max_order']}")


# ---------------------------------------------------------------- criterion 2


def test_criterion_2_cubic_time():
    ops, secs = {}, {}
    for n in (50, 100, 200):
        G, H, mapping = random_isomorphic_pair(n, random.Random(n))
        t = time.perf_counter()
        run = complete_isomorphism(G, H, IsoOraclePolicy(iso_oracles.PLANTED, planted_map=mapping), snapshot_limit=0)
        secs[n] = time.perf_counter() - t
        assert run.phi == mapping
        ops[n] = run.ops
    r1, r2 = ops[100] / ops[50], ops[200] / ops[100]
    ok = secs[200] < 30 and r1 <= 10 and r2 <= 10
    verdict(2, ok, f"ops {ops[50]}/{ops[100]}/{ops[200]}, ratios {r1:.2f} and {r2:.2f} (<= 10), n=200 in {secs[200]:.1f}s (< 30s)")


# ---------------------------------------------------------------- criterion 4


def test_criterion_4_example_reproduction():
    G, H = find_example1_fixture()
    isos = enumerate_isomorphisms(G, H)
    naive = enumerate_isomorphisms(G.subgraph(G.vertices - {5}), H.subgraph(H.vertices - {2}))
    compatible = sum(validate_isomorphism(G, H, {**psi, 5: 2}) for psi in naive)
    state = IsoEngineState.start(G, H)
    reduce_pair(state, 5, 2, "old-old")
    gadget_isos = enumerate_isomorphisms(state.gG.graph, state.gH.graph)
    all_compatible = bool(gadget_isos) and all(
        validate_isomorphism(G, H, {**{x: phi[x] for x in G.vertices - {5}}, 5: 2}) for phi in gadget_isos
    )
    ok = sorted(map(sorted, map(dict.items, isos))) == sorted(map(sorted, map(dict.items, (PHI1, PHI2)))) \
        and len(naive) == 6 and compatible == 2 and all_compatible
    verdict(4, ok, f"fixture G={G.edges()}; naive 5/2 deletion {len(naive)} isomorphisms, {compatible} compatible; "
            f"gadgeted: {len(gadget_isos)} isomorphisms, all compatible={all_compatible}")


# ---------------------------------------------------------------- criterion 5


def test_criterion_5_intermediate_isomorphy():
    checks = failures = 0
    rng = random.Random(5)

    def check(state: IsoEngineState) -> None:
        nonlocal checks, failures
        g, h = state.gG.graph, state.gH.graph
        checks += 1
        same = nx.is_isomorphic(_to_nx(g), _to_nx(h))
        if len(g) <= 10:
            same = same and bool(enumerate_isomorphisms(g, h))
        failures += not same

    policies = [IsoOraclePolicy(iso_oracles.HONEST), IsoOraclePolicy(iso_oracles.ADVERSARIAL, seed=1),
                IsoOraclePolicy(iso_oracles.RANDOM, seed=2)]
    for n in range(1, 6):
        for G in graph_classes(n):
            perm = list(range(1, n + 1))
            rng.shuffle(perm)
            H = G.relabel(dict(zip(range(1, n + 1), perm)))
            for policy in policies:
                complete_isomorphism(G, H, policy, on_loop=check)
    verdict(5, checks > 0 and failures == 0, f"{checks} loop entries over all graphs on <= 5 vertices, {failures} non-isomorphic pairs")


# ---------------------------------------------------------------- criteria 6 and 7


def _hc_policies(planted) -> list[HcOraclePolicy]:
    out = [HcOraclePolicy(hc_oracles.HONEST), HcOraclePolicy(hc_oracles.ADVERSARIAL)]
    out += [HcOraclePolicy(hc_oracles.RANDOM, seed=s) for s in SEEDS]
    if planted is not None:
        out.append(HcOraclePolicy(hc_oracles.PLANTED, planted_cycle=planted))
    return out


def _lift_violations(before, after, e) -> int:
    if len(after.graph) < 2:
        return 0
    now = enumerate_consistent_cycles(after.graph, after.ctx)
    bad = 0 if now else 1  # non-emptiness
    for c in now:
        edges = set(c.edges) | {e}
        lifted = cycle_from_edges({f: before.graph.edges[f] for f in edges})
        if lifted is None or not validate_hamiltonian_cycle(before.graph, lifted) or not is_consistent(frozenset(edges), before.ctx):
            bad += 1
    return bad


@lru_cache(maxsize=None)
def hc_corpus_runs() -> dict:
    stats = {"graphs": 0, "runs": 0, "bad_cycle": 0, "bad_calls": 0, "steps": 0, "lift_checks": 0,
             "lift_violations": 0, "seconds": 0.0}
    start = time.perf_counter()

    def one(g: MultiGraph, planted, lift: bool) -> None:
        stats["graphs"] += 1
        for policy in _hc_policies(planted):
            def on_step(before, after, e):
                stats["steps"] += 1
                if lift:
                    stats["lift_checks"] += 1
                    stats["lift_violations"] += _lift_violations(before, after, e)

            run = complete_hamiltonian_cycle(g, policy, on_step=on_step)
            stats["runs"] += 1
            stats["bad_cycle"] += not validate_hamiltonian_cycle(g, run.cycle)
            stats["bad_calls"] += run.oracle_calls != max(len(g) - 1, 0)

    pick = random.Random(6)
    for n, pairs in hamiltonian_multigraphs(6, 9):
        g = MultiGraph.from_edge_list(n, pairs)
        cycles = enumerate_consistent_cycles(g)
        one(g, pick.choice(cycles) if cycles else None, lift=True)
    for k in range(200):
        g, planted = random_hamiltonian_multigraph(7 + k % 2, random.Random(1000 + k))
        one(g, planted, lift=False)
    stats["seconds"] = time.perf_counter() - start
    return stats


def test_criterion_6_exhaustive_hc_soundness():
    s = hc_corpus_runs()
    ok = s["runs"] > 0 and s["bad_cycle"] == 0 and s["bad_calls"] == 0 and s["seconds"] < 300
    verdict(6, ok, f"{s['graphs']} graphs (319 exhaustive + 200 random), {s['runs']} runs, {s['bad_cycle']} invalid cycles, "
            f"{s['bad_calls']} wrong call counts, {s['seconds']:.1f}s (< 300s)")


def test_criterion_7_consistency_preservation():
    s = hc_corpus_runs()
    verdict(7, s["lift_checks"] > 0 and s["lift_violations"] == 0,
            f"{s['lift_checks']} steps on the exhaustive corpus checked, {s['lift_violations']} lift/non-emptiness violations")


# ---------------------------------------------------------------- criterion 8


def _random_config(rng: random.Random, work: Path, k: int) -> list[str]:
    trace = str(work / f"trace-{k}.json")
    kind = rng.choice(["honest", "adversarial", "random", "planted"])
    seed = ["--seed", str(rng.randint(0, 10**6))]
    if rng.random() < 0.5:
        G, H, mapping = random_isomorphic_pair(rng.randint(1, 5), rng, p=rng.random())  # n=6 gadgets exceed the guard
        gp, hp = work / f"G-{k}.json", work / f"H-{k}.json"
        gp.write_text(json.dumps(simple_to_json(G)))
        hp.write_text(json.dumps(simple_to_json(H)))
        args = ["iso-complete", "--input", str(gp), "--input2", str(hp), "--oracle", kind, "--trace", trace, *seed]
        if kind == "planted":
            pp = work / f"P-{k}.json"
            pp.write_text(json.dumps({str(a): b for a, b in mapping.items()}))
            args += ["--planted", str(pp)]
    else:
        g, cycle = random_hamiltonian_multigraph(rng.randint(2, 7), rng)
        gp = work / f"M-{k}.json"
        gp.write_text(json.dumps(multi_to_json(g)))
        args = ["hc-complete", "--input", str(gp), "--oracle", kind, "--trace", trace, *seed]
        if kind == "planted":
            pp = work / f"C-{k}.json"
            pp.write_text(json.dumps(list(cycle.order)))
            args += ["--planted", str(pp)]
    return args


def test_criterion_8_replay(tmp_path, capsys):
    rng = random.Random(8)
    identical = 0
    for k in range(100):
        args = _random_config(rng, tmp_path, k)
        assert cli_main(args) == 0, args
        first = Path(args[args.index("--trace") + 1]).read_bytes()
        code = cli_main(["replay", "--trace", args[args.index("--trace") + 1]])
        assert cli_main(args) == 0
        again = Path(args[args.index("--trace") + 1]).read_bytes()
        identical += code == 0 and first == again
    capsys.readouterr()
    verdict(8, identical == 100, f"{identical}/100 random runs replay byte-identically")


# ---------------------------------------------------------------- criterion 9


def _g(n: int, *edges) -> SimpleGraph:
    return SimpleGraph.from_edges(n, edges)


P3 = _g(3, (1, 2), (2, 3))
P4 = _g(4, (1, 2), (2, 3), (3, 4))
P3K2 = _g(5, (1, 2), (2, 3), (4, 5))
LEAVES = _g(5, (1, 2), (2, 3), (3, 4), (3, 5))
K4 = MultiGraph.from_edge_list(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
K5 = MultiGraph.from_edge_list(5, [(a, b) for a in range(1, 6) for b in range(a + 1, 6)])

ISO_NEGATIVE = {
    "answer outside the graphs": (P3, [(9, 1)]),
    "old-old signature mismatch": (P3, [(1, 2)]),
    "old-new, old vertex has old neighbours": (P4, [(1, 1), pair(3, member("H", 2))]),
    "old-new, anchor not an isolated clique": (P3K2, [(4, 1), pair(5, member("H", 2))]),
    "new-old, cliques not components": (P4, [(1, 1), pair(member("G", 2), 3)]),
    "new-new, clique size mismatch": (P4, [(1, 1), (4, 4), pair(member("G", 2), member("H", 3))]),
    "new-new, anchor signature mismatch": (LEAVES, [(1, 4), pair(member("G", 2), member("H", 3))]),
}
HC_NEGATIVE = {
    "case 2, edge on neither side": (K4, [0, 1, 2]),
    "case 3, edge on neither side": (K5, [0, 1, 9, 2]),
}


def _cli_exit_for_forged_trace(tmp_path: Path, problem: str, inputs: dict, answers: list) -> int:
    doc = {"version": 1, "problem": problem, "config": {"oracle": "honest", "seed": None, "guard": 40},
           "input": inputs, "records": [{"answer": a} for a in answers], "solution": None}
    path = tmp_path / f"forged-{problem}-{len(list(tmp_path.iterdir()))}.json"
    path.write_text(json.dumps(doc))
    return cli_main(["replay", "--trace", str(path)])


def test_criterion_9_negative_paths(tmp_path, capsys):
    caught, lines = 0, []
    for name, (g, answers) in ISO_NEGATIVE.items():
        try:
            complete_isomorphism(g, g, scripted(*answers))
            lines.append(f"{name}: accepted")
            continue
        except OracleViolation as exc:
            recorded = _recorded_iso_answers(g, answers)
            code = _cli_exit_for_forged_trace(tmp_path, "iso", {"G": simple_to_json(g), "H": simple_to_json(g)}, recorded)
            caught += exc.exit_code == 3 and code == 3
            lines.append(f"{name}: exit {code}")
    for name, (g, answers) in HC_NEGATIVE.items():
        try:
            complete_hamiltonian_cycle(g, scripted(*answers))
            lines.append(f"{name}: accepted")
            continue
        except OracleViolation as exc:
            code = _cli_exit_for_forged_trace(tmp_path, "hc", {"G": multi_to_json(g)}, answers)
            caught += exc.exit_code == 3 and code == 3
            lines.append(f"{name}: exit {code}")
    capsys.readouterr()
    total = len(ISO_NEGATIVE) + len(HC_NEGATIVE)
    verdict(9, caught == total, f"{caught}/{total} violating oracles end in oracle-violation (exit 3); " + "; ".join(lines))


def _recorded_iso_answers(g: SimpleGraph, answers: list) -> list:
    """Concrete answers of a scripted run, as recorded in its trace."""
    seen: list = []
    oracle = scripted(*answers)

    def recording(gG, gH):
        a = oracle(gG, gH)
        seen.append(list(a))
        return a

    try:
        complete_isomorphism(g, g, recording)
    except OracleViolation:
        pass
    return seen


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
