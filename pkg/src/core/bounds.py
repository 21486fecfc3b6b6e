"""MAIS lower bound, the acyclic witness of an OIC structure and capacity reports."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from src.core.errors import BudgetExceededError, StructureError, UnverifiedStructureError
from src.core.graph import Digraph, induced_subgraph, is_acyclic, vertex_name
from src.core.oic_structure import DerivedSets, PolytreeDecomposition, derive_sets, verify_oic
from src.core.settings import load_settings

logger = logging.getLogger(__name__)


def _strip(graph: nx.DiGraph) -> nx.DiGraph:
    """Drop vertices that cannot lie on a cycle (no in- or no out-edges), repeatedly."""
    graph = graph.copy()
    while True:
        dead = [v for v in graph if graph.in_degree(v) == 0 or graph.out_degree(v) == 0]
        if not dead:
            return graph
        graph.remove_nodes_from(dead)


def _min_deletions(graph: nx.DiGraph, keep: FrozenSet[int], limit: int) -> Optional[int]:
    """Fewest deletions outside keep that make graph acyclic, if at most limit."""
    if limit < 0:
        return None
    graph = _strip(graph)
    if not nx.is_directed_acyclic_graph(graph.subgraph(keep & set(graph))):
        return None
    total = 0
    for component in sorted(nx.strongly_connected_components(graph), key=min):
        if len(component) < 2:
            continue
        used = _min_deletions_scc(graph.subgraph(component).copy(), keep, limit - total)
        if used is None:
            return None
        total += used
    return total


def _min_deletions_scc(graph: nx.DiGraph, keep: FrozenSet[int], limit: int) -> Optional[int]:
    if limit < 1:
        return None
    free = [v for v in graph if v not in keep]
    if not free:
        return None
    # branch on the vertex lying on the most in/out edge pairs
    pivot = max(free, key=lambda v: (graph.in_degree(v) * graph.out_degree(v), -v))

    best = None
    without = graph.copy()
    without.remove_node(pivot)
    used = _min_deletions(without, keep, limit - 1)
    if used is not None:
        best = used + 1
        limit = best - 1
    kept = _min_deletions(graph, keep | {pivot}, limit)
    if kept is not None:
        best = kept
    return best


def mais_exact(g: Digraph, limit: Optional[int] = None) -> Tuple[int, FrozenSet[int]]:
    """Maximum acyclic induced subgraph order and its lexicographically smallest witness."""
    limit = limit if limit is not None else load_settings().mais_limit
    if g.vertex_count > limit:
        logger.error(f"MAIS refused: K = {g.vertex_count} exceeds the limit {limit}")
        raise BudgetExceededError(
            f"exact MAIS is limited to K <= {limit}, graph has K = {g.vertex_count}",
            g.vertex_count, limit)

    graph = g.to_networkx()
    deletions = _min_deletions(graph, frozenset(), g.vertex_count)
    size = g.vertex_count - deletions

    chosen: set = set()
    dropped: set = set()
    for v in g.vertices:
        if len(chosen) == size:
            break
        trial = graph.copy()
        trial.remove_nodes_from(dropped)
        budget = trial.number_of_nodes() - size
        if _min_deletions(trial, frozenset(chosen | {v}), budget) is not None:
            chosen.add(v)
        else:
            dropped.add(v)
    logger.debug(f"MAIS = {size}, witness {[vertex_name(v) for v in sorted(chosen)]}")
    return size, frozenset(chosen)


def oic_witness(g: Digraph, decomp: PolytreeDecomposition,
                derived: Optional[DerivedSets] = None) -> FrozenSet[int]:
    """Smallest unshared vertex of every node plus every non-inner vertex, checked acyclic."""
    derived = derived or derive_sets(g, decomp)
    picked = set(derived.V_NI)
    for node in decomp.nodes:
        others = set()
        for other in decomp.nodes:
            if other.key != node.key:
                others |= other.vertices
        eligible = sorted(node.vertices - others)
        if not eligible:
            logger.error(f"Node ({node.depth},{node.index}) has no unshared vertex")
            raise StructureError(f"node ({node.depth},{node.index}) has no vertex of its own",
                                 (node.key,))
        picked.add(eligible[0])

    sub = induced_subgraph(g, picked)
    check = is_acyclic(sub.graph)
    if not check.acyclic:
        cycle = sub.to_original(check.cycle)
        logger.error(f"Witness set contains the cycle {cycle}")
        raise StructureError(
            f"witness set is cyclic through {', '.join(vertex_name(v) for v in cycle)}")
    return frozenset(picked)


@dataclass
class BoundsReport:
    code_length: int
    oic_witness: FrozenSet[int]
    mais: Optional[int] = None
    mais_witness: FrozenSet[int] = frozenset()
    notes: List[str] = field(default_factory=list)

    @property
    def upper_bound(self) -> int:
        return self.code_length

    @property
    def lower_bound(self) -> int:
        return max(len(self.oic_witness), self.mais or 0)

    @property
    def beta(self) -> Optional[int]:
        if self.lower_bound == self.upper_bound:
            return self.code_length
        return None

    @property
    def capacity(self) -> Optional[Fraction]:
        return Fraction(1, self.beta) if self.beta else None

    @property
    def formula_capacity(self) -> Fraction:
        return Fraction(1, self.code_length)

    @property
    def identity_holds(self) -> bool:
        """MAIS equals the code length (True when MAIS was not computed)."""
        return self.mais is None or self.mais == self.code_length

    def to_dict(self) -> Dict:
        def rational(value: Optional[Fraction]):
            return None if value is None else {"num": value.numerator, "den": value.denominator}

        return {
            "code_length": self.code_length,
            "upper_bound": self.upper_bound,
            "lower_bound": self.lower_bound,
            "mais": self.mais,
            "mais_witness": sorted(self.mais_witness),
            "oic_witness": sorted(self.oic_witness),
            "beta": self.beta,
            "capacity": rational(self.capacity),
            "formula_capacity": rational(self.formula_capacity),
            "identity_holds": self.identity_holds,
            "notes": list(self.notes),
        }


def bounds_report(g: Digraph, decomp: PolytreeDecomposition, run_mais: bool = True,
                  mais_limit: Optional[int] = None) -> BoundsReport:
    report_check = verify_oic(g, decomp)
    if not report_check.passed:
        logger.error(f"Bounds requested for an unverified structure: {report_check.failed_conditions}")
        raise UnverifiedStructureError(
            f"not an OIC structure (failed: {', '.join(report_check.failed_conditions)})", report_check)
    derived = derive_sets(g, decomp)
    report = BoundsReport(len(derived.V_NI) + decomp.s, oic_witness(g, decomp, derived))

    limit = mais_limit if mais_limit is not None else load_settings().mais_limit
    if run_mais and g.vertex_count <= limit:
        report.mais, report.mais_witness = mais_exact(g, limit)
        if report.mais != report.code_length:
            report.notes.append(f"MAIS {report.mais} differs from code length {report.code_length}")
            logger.warning(report.notes[-1])
    elif run_mais:
        report.notes.append(f"exact MAIS skipped: K = {g.vertex_count} exceeds {limit}")
    return report
