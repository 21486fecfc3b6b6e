"""Interlinked-cycle (IC) structures: verification, XOR code and decoding trees."""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

import networkx as nx

from src.core.errors import InputFormatError, StructureError, UnverifiedStructureError
from src.core.graph import (Digraph, Path, PathEnumeration, enumerate_paths, enumerate_stop_paths,
                            find_cycle_through, induced_subgraph, is_acyclic, mask_of, vertex_name)
from src.core.trees import RootedTree, tree_from_paths
from src.core.verification import ConditionResult, VerificationReport, Witness

logger = logging.getLogger(__name__)

IC_CONDITIONS = {
    "no_i_cycle": "no I-cycle",
    "non_inner_coverage": "every non-inner vertex lies on an I-path",
    "unique_i_paths": "exactly one I-path between every ordered inner pair",
    "non_inner_acyclic": "no cycle among non-inner vertices",
}


@dataclass(frozen=True)
class InnerVertexSet:
    members: FrozenSet[int]

    def __post_init__(self):
        members = frozenset(int(v) for v in self.members)
        if not members:
            raise InputFormatError("inner vertex set must be nonempty")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "InnerVertexSet":
        return cls(frozenset(vertices))

    @property
    def N(self) -> int:
        return len(self.members)

    def sorted(self) -> List[int]:
        return sorted(self.members)

    def check_against(self, g: Digraph) -> None:
        for v in self.members:
            if not 0 <= v < g.vertex_count:
                raise InputFormatError(f"inner vertex {v} is outside 0..{g.vertex_count - 1}")

    def non_inner(self, g: Digraph) -> List[int]:
        return [v for v in g.vertices if v not in self.members]


# I-path helpers shared with the overlapping structure checks

def i_path_fan(g: Digraph, inner: FrozenSet[int], source: int,
               max_per_target: int = 2) -> Dict[int, List[Path]]:
    """I-paths leaving source, grouped by terminal inner vertex (at most two each)."""
    return enumerate_stop_paths(g, source, inner, max_per_target)


def i_path_coverage(g: Digraph, inner: FrozenSet[int]) -> FrozenSet[int]:
    """Non-inner vertices that lie on an I-path between two distinct inner vertices."""
    covered: Set[int] = set()
    for u in sorted(inner):
        path = [u]
        on_path = {u}
        stack = [iter(g.successors[u])]
        while stack:
            step = next(stack[-1], None)
            if step is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if step in inner:
                if step != u:
                    covered.update(path[1:])
                continue
            if step in on_path:
                continue
            path.append(step)
            on_path.add(step)
            stack.append(iter(g.successors[step]))
    return frozenset(covered)


def i_path_terminals(g: Digraph, inner: FrozenSet[int], v: int) -> FrozenSet[int]:
    """Inner vertices reached from v through non-inner interiors."""
    graph = g.to_networkx()
    graph.remove_edges_from([(u, w) for u in inner if u != v for w in g.successors[u]])
    return frozenset(nx.descendants(graph, v)) & inner


def non_inner_cycle(g: Digraph, non_inner: Iterable[int]) -> Optional[Witness]:
    sub = induced_subgraph(g, non_inner)
    if sub.graph is None:
        return None
    result = is_acyclic(sub.graph)
    if result.acyclic:
        return None
    return Witness("cycle", tuple(sub.to_original(result.cycle)))


def find_i_paths(g: Digraph, vi: InnerVertexSet, source: int, target: int,
                 max_count: Optional[int] = None) -> PathEnumeration:
    """Simple paths source -> target with no inner vertex in their interior."""
    for endpoint in (source, target):
        if endpoint not in vi.members:
            raise InputFormatError(f"{vertex_name(endpoint)} is not an inner vertex")
    return enumerate_paths(g, source, target, interior_forbidden=vi.members, max_count=max_count)


def verify_ic(g: Digraph, vi: InnerVertexSet) -> VerificationReport:
    """Check the four IC conditions; every failure carries a witness."""
    vi.check_against(g)
    inner = vi.members
    non_inner = vi.non_inner(g)
    report = VerificationReport("ic")

    # (a) no I-cycle
    witness = None
    for u in vi.sorted():
        cycle = find_cycle_through(g, u, frozenset(non_inner))
        if cycle is not None:
            witness = Witness("cycle", cycle)
            break
    report.conditions.append(_result("no_i_cycle", witness))

    # (b) coverage
    covered = i_path_coverage(g, inner)
    uncovered = tuple(v for v in non_inner if v not in covered)
    report.conditions.append(_result(
        "non_inner_coverage", Witness("vertices", uncovered) if uncovered else None,
        f"not on any I-path: {', '.join(vertex_name(v) for v in uncovered)}" if uncovered else ""))

    # (c) unique I-paths, read off one fan per source
    witness = None
    message = ""
    for u in vi.sorted():
        fan = i_path_fan(g, inner, u)
        for w in vi.sorted():
            if w == u:
                continue
            paths = fan.get(w, [])
            if len(paths) != 1:
                if paths:
                    witness = Witness("paths", paths=tuple(paths))
                    message = f"two I-paths from {vertex_name(u)} to {vertex_name(w)}"
                else:
                    witness = Witness("vertices", (u, w))
                    message = f"no I-path from {vertex_name(u)} to {vertex_name(w)}"
                break
        if witness is not None:
            break
    report.conditions.append(_result("unique_i_paths", witness, message))

    # (d) non-inner vertices induce a DAG
    report.conditions.append(_result("non_inner_acyclic", non_inner_cycle(g, non_inner)))

    logger.debug(f"IC verification of {sorted(inner)}: failed={report.failed_conditions}")
    return report


def _result(name: str, witness: Optional[Witness], message: str = "") -> ConditionResult:
    if witness is not None and not message:
        message = witness.describe()
    return ConditionResult(name, IC_CONDITIONS[name], witness is None, message, witness)


def _require_verified(g: Digraph, vi: InnerVertexSet) -> None:
    report = verify_ic(g, vi)
    if not report.passed:
        logger.error(f"IC structure check failed: {report.failed_conditions}")
        raise UnverifiedStructureError(
            f"not an IC structure (failed: {', '.join(report.failed_conditions)})", report)


def encode_ic(g: Digraph, vi: InnerVertexSet):
    """K - N + 1 symbols: y_I over the inner set, then y_j per non-inner j."""
    from src.core.index_code import CodeSymbol, LinearCode, non_inner_symbol

    _require_verified(g, vi)
    symbols = [CodeSymbol("y_I", mask_of(vi.members))]
    symbols.extend(non_inner_symbol(g, j) for j in vi.non_inner(g))
    return LinearCode(g.vertex_count, tuple(symbols))


def build_tree_ic(g: Digraph, vi: InnerVertexSet, root: int) -> RootedTree:
    """Union of the unique I-paths from root to every other inner vertex."""
    if root not in vi.members:
        raise InputFormatError(f"root {vertex_name(root)} is not an inner vertex")
    fan = i_path_fan(g, vi.members, root)
    paths = []
    for w in vi.sorted():
        if w == root:
            continue
        found = fan.get(w, [])
        if len(found) != 1:
            logger.error(f"{len(found)} I-paths from {vertex_name(root)} to {vertex_name(w)}")
            raise StructureError(
                f"expected exactly one I-path from {vertex_name(root)} to {vertex_name(w)}, "
                f"found {len(found)}", nodes=(root, w))
        paths.append(found[0])
    return tree_from_paths(root, paths)


def as_decomposition(vi: InnerVertexSet):
    """The inner vertex set as a one-node polytree decomposition."""
    from src.core.oic_structure import PolytreeDecomposition, PolytreeNode

    return PolytreeDecomposition((PolytreeNode(0, 1, vi.members),), ())
