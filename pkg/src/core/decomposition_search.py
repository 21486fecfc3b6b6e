"""Bounded search for OIC decompositions of a bare graph.

Candidates are tried in order of the code length they would give
(non-inner count plus number of nodes); the first length that produces a
verified decomposition ends the search. Nothing here proves that a graph
has no decomposition.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations, islice
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from src.core.graph import Digraph, induced_subgraph, is_acyclic
from src.core.ic_structure import i_path_terminals
from src.core.oic_structure import PolytreeDecomposition, PolytreeEdge, PolytreeNode, verify_oic
from src.core.settings import load_settings

logger = logging.getLogger(__name__)

MAX_FAMILY = 4
MAX_CYCLE_SEEDS = 32

Family = Tuple[FrozenSet[int], ...]


@dataclass(frozen=True)
class SuggestedDecomposition:
    decomposition: PolytreeDecomposition
    non_inner: FrozenSet[int]

    @property
    def code_length(self) -> int:
        return len(self.non_inner) + self.decomposition.s

    def canonical(self) -> Tuple:
        return (tuple((n.depth, n.index, tuple(sorted(n.vertices))) for n in self.decomposition.nodes),
                tuple((e.parent, e.child, e.shared) for e in self.decomposition.edges))


@dataclass
class DecompositionSearchResult:
    suggestions: List[SuggestedDecomposition] = field(default_factory=list)
    verified: int = 0
    budget: int = 0
    budget_exhausted: bool = False

    @property
    def decompositions(self) -> List[PolytreeDecomposition]:
        return [s.decomposition for s in self.suggestions]

    def __len__(self):
        return len(self.suggestions)


class _OutOfBudget(Exception):
    pass


def _acyclic_subsets(g: Digraph, size: int) -> Iterator[FrozenSet[int]]:
    for subset in combinations(g.vertices, size):
        sub = induced_subgraph(g, subset)
        if sub.graph is None or is_acyclic(sub.graph).acyclic:
            yield frozenset(subset)


def _candidate_pool(g: Digraph, inner: FrozenSet[int]) -> List[FrozenSet[int]]:
    """Node candidates: each inner vertex with its I-path terminals, plus cycle vertex sets."""
    reach: Dict[int, FrozenSet[int]] = {u: i_path_terminals(g, inner, u) - {u} for u in sorted(inner)}
    pool = {frozenset({u}) | targets for u, targets in reach.items() if targets}

    reach_graph = nx.DiGraph()
    reach_graph.add_nodes_from(inner)
    reach_graph.add_edges_from((u, w) for u, targets in reach.items() for w in targets)
    for cycle in islice(nx.simple_cycles(reach_graph), MAX_CYCLE_SEEDS):
        if len(cycle) > 1:
            pool.add(frozenset(cycle))
    return sorted(pool, key=lambda c: (len(c), sorted(c)))


def _families(inner: FrozenSet[int], pool: Sequence[FrozenSet[int]], s: int) -> Iterator[Family]:
    """Families of s pool sets covering inner, pairwise sharing at most one vertex."""
    seen = set()

    def extend(chosen: List[FrozenSet[int]], covered: FrozenSet[int]) -> Iterator[Family]:
        if len(chosen) == s:
            if covered == inner and frozenset(chosen) not in seen:
                seen.add(frozenset(chosen))
                yield tuple(chosen)
            return
        if covered == inner:
            return
        missing = min(inner - covered)
        for candidate in pool:
            if missing not in candidate or candidate in chosen:
                continue
            if any(len(candidate & c) > 1 for c in chosen):
                continue
            yield from extend(chosen + [candidate], covered | candidate)

    yield from extend([], frozenset())


def _orientations(family: Family) -> Iterator[PolytreeDecomposition]:
    links = [(a, b) for a, b in combinations(range(len(family)), 2) if len(family[a] & family[b]) == 1]
    shape = nx.Graph()
    shape.add_nodes_from(range(len(family)))
    shape.add_edges_from(links)
    if not nx.is_tree(shape):
        return

    for pattern in range(2 ** len(links)):
        directed = [(b, a) if (pattern >> n) & 1 else (a, b) for n, (a, b) in enumerate(links)]
        level = {0: 0}
        pending = [0]
        while pending:
            current = pending.pop()
            for parent, child in directed:
                if parent == current and child not in level:
                    level[child] = level[current] + 1
                    pending.append(child)
                elif child == current and parent not in level:
                    level[parent] = level[current] - 1
                    pending.append(parent)
        base = min(level.values())
        keys: Dict[int, Tuple[int, int]] = {}
        for depth in sorted(set(level.values())):
            members = sorted((m for m in level if level[m] == depth), key=lambda m: sorted(family[m]))
            for j, m in enumerate(members, start=1):
                keys[m] = (depth - base, j)
        yield PolytreeDecomposition(
            tuple(PolytreeNode(keys[m][0], keys[m][1], family[m]) for m in range(len(family))),
            tuple(PolytreeEdge(keys[p], keys[c], next(iter(family[p] & family[c]))) for p, c in directed))


def suggest_decompositions(g: Digraph, budget: Optional[int] = None,
                           max_length: Optional[int] = None) -> DecompositionSearchResult:
    """Verified decompositions of the shortest code length reachable within budget verifications."""
    budget = budget if budget is not None else load_settings().search_budget
    result = DecompositionSearchResult(budget=budget)
    if is_acyclic(g).acyclic:
        logger.info("Graph is acyclic; no interlinked-cycle structure to suggest")
        return result

    def accept(decomp: PolytreeDecomposition, non_inner: FrozenSet[int]) -> None:
        if result.verified >= budget:
            raise _OutOfBudget()
        result.verified += 1
        if verify_oic(g, decomp).passed:
            result.suggestions.append(SuggestedDecomposition(decomp, non_inner))

    longest = min(max_length or g.vertex_count, g.vertex_count)
    try:
        for length in range(1, longest + 1):
            for s in range(1, min(MAX_FAMILY, length) + 1):
                for non_inner in _acyclic_subsets(g, length - s):
                    inner = frozenset(g.vertices) - non_inner
                    if len(inner) < 2:
                        continue
                    if s == 1:
                        accept(PolytreeDecomposition((PolytreeNode(0, 1, inner),)), non_inner)
                        continue
                    pool = _candidate_pool(g, inner)
                    for family in _families(inner, pool, s):
                        for decomp in _orientations(family):
                            accept(decomp, non_inner)
            if result.suggestions:
                logger.debug(f"Found {len(result.suggestions)} decompositions of length {length}")
                break
    except _OutOfBudget:
        result.budget_exhausted = True
        logger.warning(f"Decomposition search stopped after {budget} verifications")

    result.suggestions.sort(key=lambda s: (s.code_length, s.decomposition.s, s.canonical()))
    return result
