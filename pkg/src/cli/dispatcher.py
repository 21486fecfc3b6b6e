# src/cli/dispatcher.py
import argparse
import logging
import sys
from enum import IntEnum
from typing import Any, Dict, List, Optional

from src.cli.components.tables import (format_table, render_bounds, render_branches, render_code,
                                       render_fixture_rows, render_plan, render_report,
                                       render_simulation)
from src.core.bounds import bounds_report, mais_exact
from src.core.broadcast_simulator import BroadcastSimulator
from src.core.decomposition_search import suggest_decompositions
from src.core.errors import (BudgetExceededError, IndexCodingError, InfeasibleProfileError,
                             InputFormatError)
from src.core.export_formatter import IndexCodingExportFormatter
from src.core.fixture_library import fixture_names, load_fixture
from src.core.graph import SuicpInstance, vertex_name
from src.core.ic_structure import InnerVertexSet, verify_ic
from src.core.index_code import apply_code, decode_receiver, encode_oic, make_decoding_plan
from src.core.instance_generator import parse_profile, random_oic
from src.core.minrank_oracle import exhaustive_code_search, minrank_gf2, optimality_verdict
from src.core.oic_structure import PolytreeDecomposition, verify_oic

logger = logging.getLogger(__name__)


class ExitStatus(IntEnum):
    OK = 0
    FAILED = 1
    INPUT_ERROR = 2
    BUDGET_REFUSED = 3


class _Loaded:
    def __init__(self, instance: SuicpInstance, decomp: Optional[PolytreeDecomposition],
                 inner_set: Optional[InnerVertexSet] = None, name: str = ""):
        self.instance = instance
        self.decomp = decomp
        self.inner_set = inner_set
        self.name = name


def _load(args, formatter: IndexCodingExportFormatter, need_decomp: bool = True) -> _Loaded:
    if args.fixture:
        if args.fixture not in fixture_names():
            raise InputFormatError(f"unknown fixture {args.fixture!r}; known: {', '.join(fixture_names())}")
        fixture = load_fixture(args.fixture)
        return _Loaded(fixture.instance, fixture.decomposition, fixture.inner_set, fixture.name)
    if not args.graph:
        raise InputFormatError("give a graph file or --fixture NAME")
    instance = formatter.load_instance(args.graph)
    if not args.decomp:
        if need_decomp:
            raise InputFormatError("this command needs a decomposition file")
        return _Loaded(instance, None, name=args.graph)
    data = formatter.load_json(args.decomp)
    inner_set = formatter.parse_inner_set(data, args.decomp) if "V_I" in data else None
    return _Loaded(instance, formatter.parse_decomposition(data, args.decomp), inner_set, args.graph)


def _emit(args, formatter: IndexCodingExportFormatter, data: Dict[str, Any], text: str,
          title: str = "Index coding report") -> None:
    print(formatter.dumps(data) if args.json else text)
    if args.txt:
        formatter.export_to_txt(text, args.txt, title)


def cmd_verify(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter)
    g = loaded.instance.graph
    if loaded.inner_set is not None:
        report = verify_ic(g, loaded.inner_set)
        text = render_report(report)
    else:
        report = verify_oic(g, loaded.decomp)
        text = render_report(report)
        if args.branches and report.branches:
            text += "\n\n" + render_branches(report)
    _emit(args, formatter, report.to_dict(), text, f"Verification of {loaded.name}")
    return ExitStatus.OK if report.passed else ExitStatus.FAILED


def cmd_encode(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter)
    code = encode_oic(loaded.instance.graph, loaded.decomp)
    _emit(args, formatter, code.to_dict(), render_code(code), f"Code of {loaded.name}")
    return ExitStatus.OK


def cmd_plan(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter)
    plan = make_decoding_plan(loaded.instance.graph, loaded.decomp)
    _emit(args, formatter, plan.to_dict(), render_plan(plan), f"Decoding plan of {loaded.name}")
    return ExitStatus.OK


def cmd_decode(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter)
    instance = loaded.instance
    messages = formatter.parse_messages(args.messages, instance.K, instance.message_bits)
    code = encode_oic(instance.graph, loaded.decomp)
    plan = make_decoding_plan(instance.graph, loaded.decomp, code=code)
    broadcast = apply_code(code, messages)

    rows, results = [], []
    for k in range(instance.K):
        side = {v: messages.values[v] for v in plan.receiver(k).side_vertices}
        value = decode_receiver(plan, k, broadcast, side)
        results.append({"receiver": k, "decoded": value, "expected": messages.values[k]})
        rows.append([vertex_name(k), str(value), str(messages.values[k])])
    data = {"broadcast": broadcast, "labels": list(code.labels), "receivers": results}
    text = "broadcast " + ", ".join(f"{label}={word}" for label, word in zip(code.labels, broadcast))
    text += "\n\n" + format_table(["receiver", "decoded", "message"], rows)
    _emit(args, formatter, data, text, f"Decoding of {loaded.name}")
    return ExitStatus.OK if all(r["decoded"] == r["expected"] for r in results) else ExitStatus.FAILED


def cmd_mais(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter, need_decomp=False)
    size, witness = mais_exact(loaded.instance.graph, args.limit)
    data = {"mais": size, "witness": sorted(witness)}
    text = f"MAIS {size}: {', '.join(vertex_name(v) for v in sorted(witness))}"
    _emit(args, formatter, data, text, f"MAIS of {loaded.name}")
    return ExitStatus.OK


def cmd_capacity(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter)
    report = bounds_report(loaded.instance.graph, loaded.decomp, run_mais=not args.no_mais)
    _emit(args, formatter, report.to_dict(), render_bounds(report), f"Capacity of {loaded.name}")
    return ExitStatus.OK if report.identity_holds else ExitStatus.FAILED


def cmd_oracle(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter, need_decomp=False)
    g = loaded.instance.graph
    result = minrank_gf2(g, budget=args.budget)
    data: Dict[str, Any] = {"minrank": result.rank, "lower_bound": result.lower_bound,
                            "witness_hex": result.witness.hex_rows(), "explored": result.explored}
    lines = [f"minrank {result.rank} (lower bound {result.lower_bound}, {result.explored} states)"]
    status = ExitStatus.OK
    if loaded.decomp is not None:
        code = encode_oic(g, loaded.decomp)
        data = optimality_verdict(code.length, result)
        lines.append(f"code length {code.length}: {'optimal' if data['optimal'] else 'not optimal'}")
        if not data["optimal"]:
            status = ExitStatus.FAILED
    if args.search:
        found = exhaustive_code_search(g, args.search, budget=args.budget)
        data["search_length"] = found.length if found else None
        lines.append(f"shortest code up to length {args.search}: "
                     f"{found.length if found else 'none'}")
    _emit(args, formatter, data, "\n".join(lines), f"Oracle for {loaded.name}")
    return status


def cmd_simulate(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter)
    simulator = BroadcastSimulator(loaded.instance, loaded.decomp)
    exhaustive = True if args.exhaustive else None
    report = simulator.simulate(args.trials, args.seed, exhaustive)
    _emit(args, formatter, report.to_dict(), render_simulation(report), f"Simulation of {loaded.name}")
    return ExitStatus.OK if report.passed else ExitStatus.FAILED


def cmd_gen(args, formatter) -> ExitStatus:
    profile = parse_profile(args.profile)
    instance, decomp = random_oic(profile, args.seed)
    graph_data = formatter.graph_to_dict(instance)
    decomp_data = formatter.decomposition_to_dict(decomp)
    if args.out:
        formatter.export_to_json(graph_data, f"{args.out}.graph.json")
        formatter.export_to_json(decomp_data, f"{args.out}.decomp.json")
    print(formatter.dumps({"profile": profile.to_dict(), "seed": args.seed,
                           "graph": graph_data, "decomposition": decomp_data}))
    return ExitStatus.OK


def cmd_suggest(args, formatter) -> ExitStatus:
    loaded = _load(args, formatter, need_decomp=False)
    result = suggest_decompositions(loaded.instance.graph, budget=args.budget)
    data = {"verified": result.verified, "budget_exhausted": result.budget_exhausted,
            "decompositions": [dict(formatter.decomposition_to_dict(s.decomposition),
                                    code_length=s.code_length) for s in result.suggestions]}
    lines = [f"{len(result)} decompositions after {result.verified} checks"]
    for s in result.suggestions:
        nodes = "; ".join(f"({n.depth},{n.index})={{{', '.join(vertex_name(v) for v in sorted(n.vertices))}}}"
                          for n in s.decomposition.nodes)
        lines.append(f"length {s.code_length}: {nodes}")
    if result.budget_exhausted:
        lines.append("search budget exhausted")
    _emit(args, formatter, data, "\n".join(lines), f"Decompositions of {loaded.name}")
    if result.suggestions:
        return ExitStatus.OK
    return ExitStatus.BUDGET_REFUSED if result.budget_exhausted else ExitStatus.FAILED


def run_fixture(name: str) -> Dict[str, Any]:
    """Every check the acceptance table reports for one fixture."""
    row: Dict[str, Any] = {"name": name, "passed": False, "length": None, "mais": None,
                           "minrank": None, "capacity": "-", "failures": None}
    notes: List[str] = []
    try:
        fixture = load_fixture(name)
        g = fixture.instance.graph
        bounds = bounds_report(g, fixture.decomposition)
        row.update(length=bounds.code_length, mais=bounds.mais,
                   capacity=str(bounds.capacity or bounds.formula_capacity))
        checks = [bounds.code_length == fixture.expected_length, bounds.identity_holds,
                  bounds.mais == fixture.expected["mais"]]
        if fixture.expected.get("minrank") is not None:
            try:
                row["minrank"] = minrank_gf2(g, lower_bound=bounds.mais).rank
                checks.append(row["minrank"] == fixture.expected["minrank"])
            except BudgetExceededError as e:
                notes.append(f"minrank skipped ({e})")
        simulation = BroadcastSimulator(fixture.instance, fixture.decomposition,
                                        fixture.code, fixture.plan).simulate()
        row["failures"] = simulation.failures
        checks.append(simulation.passed)
        if fixture.capacity_discrepancy:
            notes.append(fixture.capacity_discrepancy)
        row["passed"] = all(checks)
    except IndexCodingError as e:
        logger.error(f"Fixture {name} failed: {str(e)}")
        notes.append(str(e))
    row["note"] = "; ".join(notes)
    return row


def cmd_fixtures(args, formatter) -> ExitStatus:
    if not args.run_all:
        names = fixture_names()
        _emit(args, formatter, {"fixtures": names}, "\n".join(names), "Fixtures")
        return ExitStatus.OK
    rows = [run_fixture(name) for name in fixture_names()]
    _emit(args, formatter, {"fixtures": rows}, render_fixture_rows(rows), "Fixture reproduction")
    return ExitStatus.OK if all(r["passed"] for r in rows) else ExitStatus.FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable JSON instead of tables")
    common.add_argument("--txt", metavar="PATH", help="also write the human table to PATH")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("graph", nargs="?", help="graph JSON {K, edges, t}")
    inputs.add_argument("decomp", nargs="?", help="decomposition JSON or inner set {V_I}")
    inputs.add_argument("--fixture", metavar="NAME", help="use a shipped fixture instead of files")

    parser = argparse.ArgumentParser(prog="IndexCodingLab",
                                     description="Interlinked-cycle index codes: verify, encode, decode, bound")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", parents=[common, inputs], help="check the structure conditions").add_argument(
        "--branches", action="store_true", help="also list the branch mode of every root")
    sub.add_parser("encode", parents=[common, inputs], help="print the XOR code")
    sub.add_parser("plan", parents=[common, inputs], help="print every receiver's decoding plan")
    decode = sub.add_parser("decode", parents=[common, inputs], help="encode and decode one message vector")
    decode.add_argument("--messages", required=True, help="0/1 string, or comma-separated words when t > 1")
    sub.add_parser("mais", parents=[common, inputs], help="exact maximum acyclic induced subgraph").add_argument(
        "--limit", type=int, help="largest K to attempt")
    sub.add_parser("capacity", parents=[common, inputs], help="bounds and capacity").add_argument(
        "--no-mais", action="store_true", help="skip the exact MAIS cross-check")
    oracle = sub.add_parser("oracle", parents=[common, inputs], help="GF(2) minrank and optimality verdict")
    oracle.add_argument("--budget", type=int, help="enumeration budget")
    oracle.add_argument("--search", type=int, metavar="MAX_LEN", help="also search codes up to MAX_LEN")
    simulate = sub.add_parser("simulate", parents=[common, inputs], help="broadcast and decode many message vectors")
    simulate.add_argument("--trials", type=int, default=1000)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--exhaustive", action="store_true", help="every assignment (K <= 16, t = 1)")
    gen = sub.add_parser("gen", parents=[common], help="random instance from a profile")
    gen.add_argument("--profile", default="widths=1,2;sizes=3;non_inner=2")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", metavar="PREFIX", help="write PREFIX.graph.json and PREFIX.decomp.json")
    sub.add_parser("suggest", parents=[common, inputs], help="search decompositions of a bare graph").add_argument(
        "--budget", type=int, help="maximum number of verifications")
    sub.add_parser("fixtures", parents=[common], help="list or reproduce the shipped fixtures").add_argument(
        "--run-all", action="store_true", help="run every check on every fixture")
    return parser


COMMANDS = {
    "verify": cmd_verify,
    "encode": cmd_encode,
    "plan": cmd_plan,
    "decode": cmd_decode,
    "mais": cmd_mais,
    "capacity": cmd_capacity,
    "oracle": cmd_oracle,
    "simulate": cmd_simulate,
    "gen": cmd_gen,
    "suggest": cmd_suggest,
    "fixtures": cmd_fixtures,
}


def cli_dispatch(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    formatter = IndexCodingExportFormatter()
    try:
        return int(COMMANDS[args.command](args, formatter))
    except (InputFormatError, InfeasibleProfileError) as e:
        print(f"error: {e}", file=sys.stderr)
        return int(ExitStatus.INPUT_ERROR)
    except BudgetExceededError as e:
        print(f"refused: {e}", file=sys.stderr)
        return int(ExitStatus.BUDGET_REFUSED)
    except IndexCodingError as e:
        print(f"failed: {e}", file=sys.stderr)
        return int(ExitStatus.FAILED)
