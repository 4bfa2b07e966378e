"""Command-line entry point ``p2c``.

Results go to stdout as JSON; failures print an error JSON to stderr and exit
with 2 (parse), 3 (oracle violation / no witness), 4 (guard exceeded) or
5 (internal failure). ``verify`` exits 1 when the solution is wrong.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import hc_oracles, iso_oracles
from .dot import gadget_pair_dot, multigraph_dot, write_dot
from .errors import InternalInvariantFailure, ParseError, ReductionError, ReplayMismatch
from .formats import multi_from_json, multi_to_json, read_multi, read_simple, simple_from_json, simple_to_json
from .graphs import MultiGraph, SimpleGraph, cycle_from_order, validate_hamiltonian_cycle, validate_isomorphism
from .hc_engine import HcEngineState, complete_hamiltonian_cycle
from .iso_engine import IsoEngineState, complete_isomorphism

TRACE_VERSION = 1

ISO_KINDS = {
    "honest": iso_oracles.HONEST,
    "adversarial": iso_oracles.ADVERSARIAL,
    "random": iso_oracles.RANDOM,
    "planted": iso_oracles.PLANTED,
}
HC_KINDS = {
    "honest": hc_oracles.HONEST,
    "adversarial": hc_oracles.ADVERSARIAL,
    "random": hc_oracles.RANDOM,
    "planted": hc_oracles.PLANTED,
    "context-free": hc_oracles.CONTEXT_FREE,
}


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"


def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def _parse_map(doc: Any) -> dict[int, int]:
    try:
        if isinstance(doc, dict):
            return {int(k): int(v) for k, v in doc.items()}
        return {int(a): int(b) for a, b in doc}
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected a vertex map, got {doc!r}") from exc


def _parse_order(doc: Any) -> list[int]:
    if not isinstance(doc, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in doc):
        raise ParseError(f"expected a JSON vertex sequence, got {doc!r}")
    return doc


def _guard(args: argparse.Namespace, default: Callable[[], int]) -> int:
    return args.guard if args.guard is not None else default()


def _map_json(phi: dict[int, int]) -> dict[str, int]:
    return {str(k): v for k, v in sorted(phi.items())}


# --- iso ------------------------------------------------------------------


def _iso_policy(config: dict[str, Any]) -> iso_oracles.IsoOraclePolicy:
    planted = config.get("planted")
    return iso_oracles.IsoOraclePolicy(
        ISO_KINDS[config["oracle"]],
        seed=config.get("seed"),
        planted_map=_parse_map(planted) if planted is not None else None,
        guard=config["guard"],
    )


def _run_iso(G: SimpleGraph, H: SimpleGraph, oracle: Any, dot_dir: str | None) -> tuple[dict[int, int], list[dict[str, Any]]]:
    def snapshot(state: IsoEngineState) -> None:
        k = state.loops_done + 1
        write_dot(dot_dir, f"loop-{k:03d}.dot", gadget_pair_dot(state.gG, state.gH, f"loop {k}, i = {state.i}"))

    run = complete_isomorphism(G, H, oracle, on_loop=snapshot if dot_dir else None)
    return run.phi, run.trace


def _iso_doc(config: dict[str, Any], G: SimpleGraph, H: SimpleGraph, records: list, phi: dict[int, int]) -> dict[str, Any]:
    return {
        "version": TRACE_VERSION,
        "problem": "iso",
        "config": config,
        "input": {"G": simple_to_json(G), "H": simple_to_json(H)},
        "records": records,
        "solution": _map_json(phi),
    }


def cmd_iso_complete(args: argparse.Namespace) -> int:
    if args.input2 is None:
        raise ParseError("iso-complete needs --input and --input2")
    if args.oracle not in ISO_KINDS:
        raise ParseError(f"oracle {args.oracle!r} is not available for iso-complete")
    G = read_simple(args.input, args.format)
    H = read_simple(args.input2, args.format)
    config: dict[str, Any] = {"oracle": args.oracle, "seed": args.seed, "guard": _guard(args, iso_oracles.default_guard)}
    if args.oracle == "planted":
        if not args.planted:
            raise ParseError("planted oracle needs --planted FILE")
        config["planted"] = _map_json(_parse_map(_load_json(args.planted)))
    if args.oracle == "random" and args.seed is None:
        raise ParseError("random oracle needs --seed")
    phi, records = _run_iso(G, H, _iso_policy(config), args.dot)
    return _emit(args, _iso_doc(config, G, H, records, phi), {"solution": _map_json(phi), "oracle_calls": len(records)})


# --- hc -------------------------------------------------------------------


def _hc_policy(config: dict[str, Any], g: MultiGraph) -> hc_oracles.HcOraclePolicy:
    planted = None
    if config.get("planted") is not None:
        planted = cycle_from_order(g, _parse_order(config["planted"]))
        if planted is None or not validate_hamiltonian_cycle(g, planted):
            raise ParseError(f"planted sequence {config['planted']} is not a Hamiltonian cycle of the input")
    return hc_oracles.HcOraclePolicy(HC_KINDS[config["oracle"]], seed=config.get("seed"), planted_cycle=planted, guard=config["guard"])


def _run_hc(g: MultiGraph, oracle: Any, dot_dir: str | None) -> tuple[list[int], list[dict[str, Any]]]:
    def snapshot(before: HcEngineState, after: HcEngineState, e: int) -> None:
        if before.step == 0:
            write_dot(dot_dir, "step-000.dot", multigraph_dot(before.graph, before.ctx, "input"))
        write_dot(dot_dir, f"step-{after.step:03d}.dot", multigraph_dot(after.graph, after.ctx, f"after contracting {e}"))

    run = complete_hamiltonian_cycle(g, oracle, on_step=snapshot if dot_dir else None)
    return list(run.cycle.order), run.trace


def _hc_doc(config: dict[str, Any], g: MultiGraph, records: list, order: list[int]) -> dict[str, Any]:
    return {
        "version": TRACE_VERSION,
        "problem": "hc",
        "config": config,
        "input": {"G": multi_to_json(g)},
        "records": records,
        "solution": order,
    }


def _hc_config(args: argparse.Namespace, kind: str) -> dict[str, Any]:
    config: dict[str, Any] = {"oracle": kind, "seed": args.seed, "guard": _guard(args, hc_oracles.default_guard)}
    if kind == "planted":
        if not args.planted:
            raise ParseError("planted oracle needs --planted FILE")
        config["planted"] = _parse_order(_load_json(args.planted))
    if kind == "random" and args.seed is None:
        raise ParseError("random oracle needs --seed")
    return config


def cmd_hc_complete(args: argparse.Namespace) -> int:
    g = read_multi(args.input)
    config = _hc_config(args, args.oracle)
    order, records = _run_hc(g, _hc_policy(config, g), args.dot)
    calls = sum(1 for r in records if "answer" in r)
    return _emit(args, _hc_doc(config, g, records, order), {"solution": order, "oracle_calls": calls})


# --- output / verify / replay ---------------------------------------------


def _emit(args: argparse.Namespace, doc: dict[str, Any], summary: dict[str, Any]) -> int:
    if args.trace:
        Path(args.trace).write_text(dumps(doc))
    if args.output:
        Path(args.output).write_text(dumps(doc["solution"]))
    sys.stdout.write(dumps({"status": "ok", **summary}))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if not args.solution:
        raise ParseError("verify needs --solution FILE")
    sol = _load_json(args.solution)
    if isinstance(sol, dict):
        if args.input2 is None:
            raise ParseError("verifying an isomorphism needs --input and --input2")
        ok = validate_isomorphism(read_simple(args.input, args.format), read_simple(args.input2, args.format), _parse_map(sol))
    else:
        g = read_multi(args.input)
        order = _parse_order(sol)
        cycle = cycle_from_order(g, order) if order else None
        ok = cycle is not None and validate_hamiltonian_cycle(g, cycle)
    sys.stdout.write(dumps({"valid": ok}))
    return 0 if ok else 1


def _scripted(answers: list[Any]) -> Callable[..., Any]:
    queue = list(answers)

    def oracle(*_: Any) -> Any:
        if not queue:
            raise ReplayMismatch("trace ran out of recorded answers")
        a = queue.pop(0)
        return tuple(a) if isinstance(a, list) else a

    return oracle


def replay_doc(doc: dict[str, Any]) -> tuple[str, str]:
    """Re-execute a trace document; returns (scripted replay, policy re-run) serialisations."""
    if not isinstance(doc, dict) or doc.get("version") != TRACE_VERSION or doc.get("problem") not in ("iso", "hc"):
        raise ParseError("not a trace document")
    config = doc["config"]
    answers = [r["answer"] for r in doc["records"] if "answer" in r]
    if doc["problem"] == "iso":
        G, H = simple_from_json(doc["input"]["G"]), simple_from_json(doc["input"]["H"])
        phi, records = _run_iso(G, H, _scripted(answers), None)
        scripted = _iso_doc(config, G, H, records, phi)
        phi2, records2 = _run_iso(G, H, _iso_policy(config), None)
        rerun = _iso_doc(config, G, H, records2, phi2)
    else:
        g = multi_from_json(doc["input"]["G"])
        order, records = _run_hc(g, _scripted(answers), None)
        scripted = _hc_doc(config, g, records, order)
        order2, records2 = _run_hc(g, _hc_policy(config, g), None)
        rerun = _hc_doc(config, g, records2, order2)
    return dumps(scripted), dumps(rerun)


def cmd_replay(args: argparse.Namespace) -> int:
    path = args.trace or args.input
    if not path:
        raise ParseError("replay needs --trace FILE")
    original = Path(path).read_text()
    doc = _load_json(path)
    scripted, rerun = replay_doc(doc)
    if scripted != original:
        raise ReplayMismatch("scripted replay diverges from the recorded trace")
    if rerun != original:
        raise ReplayMismatch("re-running the recorded policy diverges from the recorded trace")
    sys.stdout.write(dumps({"status": "ok", "identical": True, "solution": doc["solution"]}))
    return 0


def cmd_fixture(args: argparse.Namespace) -> int:
    G, H = iso_oracles.find_example1_fixture()
    doc = {
        "G": simple_to_json(G),
        "H": simple_to_json(H),
        "phi1": _map_json(iso_oracles.PHI1),
        "phi2": _map_json(iso_oracles.PHI2),
    }
    if args.output:
        Path(args.output).write_text(dumps(doc))
    sys.stdout.write(dumps(doc))
    return 0


def cmd_probe_context_free(args: argparse.Namespace) -> int:
    g = read_multi(args.input)
    outcomes: dict[str, int] = {}
    runs = []
    for seed in range(args.seeds):
        config = {"oracle": "context-free", "seed": seed, "guard": _guard(args, hc_oracles.default_guard)}
        try:
            order, _ = _run_hc(g, _hc_policy(config, g), None)
            outcome, detail = "success", order
        except ReductionError as exc:
            outcome, detail = exc.kind, str(exc)
        outcomes[outcome] = outcomes.get(outcome, 0) + 1
        runs.append({"seed": seed, "outcome": outcome, "detail": detail})
    sys.stdout.write(dumps({"seeds": args.seeds, "outcomes": outcomes, "runs": runs}))
    return 0


COMMANDS = {
    "iso-complete": cmd_iso_complete,
    "hc-complete": cmd_hc_complete,
    "verify": cmd_verify,
    "replay": cmd_replay,
    "fixture": cmd_fixture,
    "probe-context-free": cmd_probe_context_free,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ParseError(f"usage: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="p2c", description="Oracle-driven completion of isomorphisms and Hamiltonian cycles.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", help="graph file (graph6 or JSON; multigraph JSON for hc)")
    p.add_argument("--input2", help="second graph for iso commands")
    p.add_argument("--oracle", default="honest", choices=sorted(set(ISO_KINDS) | set(HC_KINDS)))
    p.add_argument("--seed", type=int)
    p.add_argument("--planted", help="JSON vertex map (iso) or vertex sequence (hc)")
    p.add_argument("--trace", help="trace file to write (or to read, for replay)")
    p.add_argument("--dot", help="directory for per-loop DOT snapshots")
    p.add_argument("--guard", type=int, help="enumeration size guard (default: $P2C_GUARD or built-in)")
    p.add_argument("--format", choices=["graph6", "json"], help="input format for simple graphs (default: detect)")
    p.add_argument("--solution", help="solution file for verify")
    p.add_argument("--output", help="write the solution (or fixture) JSON here")
    p.add_argument("--seeds", type=int, default=20, help="number of seeds for probe-context-free")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command not in ("fixture", "replay") and not args.input:
            raise ParseError(f"{args.command} needs --input")
        return COMMANDS[args.command](args)
    except ReductionError as exc:
        sys.stderr.write(dumps(exc.to_json()))
        return exc.exit_code
    except Exception as exc:  # anything unexpected is an engine bug
        err = InternalInvariantFailure(f"{type(exc).__name__}: {exc}")
        sys.stderr.write(dumps(err.to_json()))
        return err.exit_code


if __name__ == "__main__":
    sys.exit(main())
