"""Overlapping interlinked-cycle (OIC) structures.

A decomposition is a polytree of semi-inner vertex sets: node (i, j) sits at
depth i with index j, and every parent -> child edge names the single vertex
the two sets share. This module derives the vertex sets the conditions talk
about, checks Conditions 1-4 and builds the per-receiver decoding trees.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from src.core.errors import InputFormatError, StructureError
from src.core.graph import Digraph, Path, find_cycle_through, vertex_name
from src.core.ic_structure import (i_path_coverage, i_path_fan, i_path_terminals,
                                   non_inner_cycle)
from src.core.trees import RootedTree, tree_from_paths
from src.core.verification import (BranchRecord, ConditionResult, NodeKey, VerificationReport,
                                   Witness, node_label)

logger = logging.getLogger(__name__)

OIC_CONDITIONS = {
    "condition_1": "Condition 1: polytree with one shared vertex per edge and |V| > parents + children",
    "condition_2": "Condition 2: exactly one I-path from every root to each of its targets",
    "condition_3": "Condition 3: no cycle leaving a node's vertex set, no cycle among non-inner vertices",
    "condition_4": "Condition 4: every non-inner vertex lies on I-paths ending in one node",
}

MODE_SELF = "self"
MODE_SHARED = "shared"
MODE_VP = "vp"


@dataclass(frozen=True)
class PolytreeNode:
    depth: int
    index: int
    vertices: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(int(v) for v in self.vertices))
        if self.depth < 0 or self.index < 1:
            raise InputFormatError(f"node ({self.depth},{self.index}) needs depth >= 0 and index >= 1")
        if not self.vertices:
            raise InputFormatError(f"node ({self.depth},{self.index}) has no vertices")

    @property
    def key(self) -> NodeKey:
        return (self.depth, self.index)


@dataclass(frozen=True)
class PolytreeEdge:
    parent: NodeKey
    child: NodeKey
    shared: int


@dataclass(frozen=True)
class PolytreeDecomposition:
    nodes: Tuple[PolytreeNode, ...]
    edges: Tuple[PolytreeEdge, ...] = ()

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes, key=lambda n: n.key))
        if not nodes:
            raise InputFormatError("a decomposition needs at least one node")
        keys = [n.key for n in nodes]
        if len(set(keys)) != len(keys):
            raise InputFormatError(f"duplicate node keys in {keys}")
        edges = tuple(sorted(self.edges, key=lambda e: (e.parent, e.child)))
        pairs = set()
        for edge in edges:
            for end in (edge.parent, edge.child):
                if end not in keys:
                    raise InputFormatError(f"edge refers to unknown node {node_label(end)}")
            pair = frozenset((edge.parent, edge.child))
            if len(pair) == 1 or pair in pairs:
                raise InputFormatError(
                    f"edge {node_label(edge.parent)} -> {node_label(edge.child)} is a loop or repeated")
            pairs.add(pair)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def build(cls, nodes: Dict[NodeKey, Iterable[int]],
              edges: Iterable[Tuple[NodeKey, NodeKey, int]] = ()) -> "PolytreeDecomposition":
        return cls(tuple(PolytreeNode(i, j, frozenset(vs)) for (i, j), vs in nodes.items()),
                   tuple(PolytreeEdge(p, c, x) for p, c, x in edges))

    @property
    def s(self) -> int:
        return len(self.nodes)

    @property
    def d(self) -> int:
        return max(n.depth for n in self.nodes)

    @property
    def widths(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for n in self.nodes:
            counts[n.depth] = counts.get(n.depth, 0) + 1
        return counts

    @property
    def keys(self) -> List[NodeKey]:
        return [n.key for n in self.nodes]

    def node(self, key: NodeKey) -> PolytreeNode:
        for n in self.nodes:
            if n.key == key:
                return n
        raise KeyError(key)

    def vertices_of(self, key: NodeKey) -> FrozenSet[int]:
        return self.node(key).vertices

    def child_edges(self, key: NodeKey) -> List[PolytreeEdge]:
        return [e for e in self.edges if e.parent == key]

    def parent_edges(self, key: NodeKey) -> List[PolytreeEdge]:
        return [e for e in self.edges if e.child == key]

    def child_shared(self, key: NodeKey) -> FrozenSet[int]:
        return frozenset(e.shared for e in self.child_edges(key))

    def parent_shared(self, key: NodeKey) -> FrozenSet[int]:
        return frozenset(e.shared for e in self.parent_edges(key))

    @property
    def inner_vertices(self) -> FrozenSet[int]:
        result: FrozenSet[int] = frozenset()
        for n in self.nodes:
            result |= n.vertices
        return result

    def nodes_containing(self, v: int) -> List[NodeKey]:
        return [n.key for n in self.nodes if v in n.vertices]

    def symbol_label(self, key: NodeKey) -> str:
        """Code symbol label of a node; a single node keeps the plain IC label."""
        if self.s == 1:
            return "y_I"
        return f"y_I^({key[0]},{key[1]})"


@dataclass(frozen=True)
class DerivedSets:
    V_I_total: FrozenSet[int]
    V_NI: FrozenSet[int]
    tilde_V: Dict[NodeKey, FrozenSet[int]]
    S: Dict[Tuple[NodeKey, NodeKey], Tuple[NodeKey, ...]]
    V_P: Dict[Tuple[NodeKey, NodeKey], FrozenSet[int]]

    def owner_of(self, v: int) -> Optional[NodeKey]:
        """Node whose tilde-V holds v; None for non-inner vertices."""
        for key, members in self.tilde_V.items():
            if v in members:
                return key
        return None

    def to_dict(self) -> Dict:
        return {
            "V_I_total": sorted(self.V_I_total),
            "V_NI": sorted(self.V_NI),
            "tilde_V": [{"node": list(k), "vertices": sorted(v)} for k, v in sorted(self.tilde_V.items())],
            "S": [{"node": list(k[0]), "child": list(k[1]), "descendants": [list(n) for n in v]}
                  for k, v in sorted(self.S.items())],
            "V_P": [{"node": list(k[0]), "descendant": list(k[1]), "vertices": sorted(v)}
                    for k, v in sorted(self.V_P.items())],
        }


@dataclass(frozen=True)
class OicTree:
    """Decoding tree of one inner receiver together with its polytree bookkeeping.

    target_set is V_k (the root included); contributing lists the nodes whose
    symbols XOR to the w part of the decode.
    """
    tree: RootedTree
    node: NodeKey
    target_set: FrozenSet[int]
    contributing: Tuple[NodeKey, ...]
    branches: Tuple[BranchRecord, ...] = ()

    @property
    def root(self) -> int:
        return self.tree.root

    @property
    def t(self) -> int:
        return len(self.contributing)

    @property
    def leaves(self) -> FrozenSet[int]:
        return self.target_set - {self.root}


@dataclass
class RootResolution:
    root: int
    node: NodeKey
    contributing: List[NodeKey] = field(default_factory=list)
    targets: set = field(default_factory=set)
    branches: List[BranchRecord] = field(default_factory=list)
    fan: Dict[int, List[Path]] = field(default_factory=dict)
    problems: List[Tuple[str, Witness]] = field(default_factory=list)
    tree: Optional[RootedTree] = None


def structural_problems(decomp: PolytreeDecomposition,
                        g: Optional[Digraph] = None) -> List[Tuple[str, Tuple[NodeKey, ...]]]:
    """Condition 1 and the model invariants, as (message, offending nodes) pairs."""
    problems: List[Tuple[str, Tuple[NodeKey, ...]]] = []
    if g is not None:
        for n in decomp.nodes:
            outside = sorted(v for v in n.vertices if not 0 <= v < g.vertex_count)
            if outside:
                problems.append((f"node {node_label(n.key)} has vertices {outside} outside the graph",
                                 (n.key,)))

    adjacent = set()
    for e in decomp.edges:
        parent, child = decomp.node(e.parent), decomp.node(e.child)
        adjacent.add(frozenset((e.parent, e.child)))
        common = parent.vertices & child.vertices
        if common != {e.shared}:
            problems.append((f"{node_label(e.parent)} and {node_label(e.child)} share "
                             f"{sorted(common)} instead of exactly {vertex_name(e.shared)}",
                             (e.parent, e.child)))
        if child.depth != parent.depth + 1:
            problems.append((f"child {node_label(e.child)} is not one level below "
                             f"{node_label(e.parent)}", (e.parent, e.child)))

    for a, b in combinations(decomp.nodes, 2):
        if frozenset((a.key, b.key)) not in adjacent and a.vertices & b.vertices:
            problems.append((f"unconnected nodes {node_label(a.key)} and {node_label(b.key)} "
                             f"share {sorted(a.vertices & b.vertices)}", (a.key, b.key)))

    underlying = nx.Graph()
    underlying.add_nodes_from(decomp.keys)
    underlying.add_edges_from((e.parent, e.child) for e in decomp.edges)
    if not nx.is_tree(underlying):
        problems.append(("the nodes and edges do not form a polytree", tuple(decomp.keys)))

    if min(n.depth for n in decomp.nodes) != 0:
        problems.append(("no node at depth 0", tuple(decomp.keys)))

    for n in decomp.nodes:
        degree = len(decomp.parent_edges(n.key)) + len(decomp.child_edges(n.key))
        if len(n.vertices) <= degree:
            problems.append((f"|V| = {len(n.vertices)} of {node_label(n.key)} must exceed "
                             f"parents + children = {degree}", (n.key,)))
    return problems


def _descent(decomp: PolytreeDecomposition, start: NodeKey) -> List[Tuple[NodeKey, List[PolytreeEdge]]]:
    """Descendants of start with the edge path leading to each, depth first."""
    found: List[Tuple[NodeKey, List[PolytreeEdge]]] = []
    stack: List[Tuple[NodeKey, List[PolytreeEdge]]] = [(start, [])]
    while stack:
        key, path = stack.pop()
        if path:
            found.append((key, path))
        for e in reversed(decomp.child_edges(key)):
            stack.append((e.child, path + [e]))
    return found


def derive_sets(g: Digraph, decomp: PolytreeDecomposition) -> DerivedSets:
    problems = structural_problems(decomp, g)
    if problems:
        message, nodes = problems[0]
        logger.error(f"Decomposition is structurally invalid: {message}")
        raise StructureError(message, nodes)

    total = decomp.inner_vertices
    tilde_V = {n.key: n.vertices - decomp.parent_shared(n.key) for n in decomp.nodes}
    S: Dict[Tuple[NodeKey, NodeKey], Tuple[NodeKey, ...]] = {}
    V_P: Dict[Tuple[NodeKey, NodeKey], FrozenSet[int]] = {}
    for n in decomp.nodes:
        for e in decomp.child_edges(n.key):
            S[(n.key, e.child)] = (e.child,) + tuple(k for k, _ in _descent(decomp, e.child))
        for descendant, path in _descent(decomp, n.key):
            union: FrozenSet[int] = frozenset()
            for e in path:
                union |= decomp.vertices_of(e.child)
            V_P[(n.key, descendant)] = union - {e.shared for e in path}
    return DerivedSets(total, frozenset(g.vertices) - total, tilde_V, S, V_P)


def _resolve_branch(decomp: PolytreeDecomposition, resolution: RootResolution,
                    edge: PolytreeEdge) -> int:
    """Apply one branch rule and recurse; returns the terminal depth reached."""
    parent_depth = edge.parent[0]
    if edge.shared == resolution.root:
        mode, added, depth = MODE_SELF, frozenset(), parent_depth
    elif edge.shared in resolution.fan:
        mode, added, depth = MODE_SHARED, frozenset({edge.shared}), parent_depth
    else:
        mode = MODE_VP
        child = edge.child
        resolution.contributing.append(child)
        added = decomp.vertices_of(child) - {edge.shared} - decomp.child_shared(child)
        depth = child[0]
    resolution.targets |= added

    record_at = len(resolution.branches)
    resolution.branches.append(None)
    if mode == MODE_VP:
        for nested in decomp.child_edges(edge.child):
            depth = max(depth, _resolve_branch(decomp, resolution, nested))
    resolution.branches[record_at] = BranchRecord(
        resolution.root, edge.parent, edge.child, edge.shared, mode, tuple(sorted(added)), depth)
    return depth


def check_tree_closure(g: Digraph, tree: RootedTree) -> List[int]:
    """Internal tree vertices whose tree children differ from their graph out-neighbourhood."""
    return [z for z in tree.internal_vertices() if tree.children(z) != frozenset(g.successors[z])]


def resolve_root(g: Digraph, decomp: PolytreeDecomposition, derived: DerivedSets,
                 v: int) -> RootResolution:
    """Targets, contributing nodes, branch modes and decoding tree of inner root v."""
    node = derived.owner_of(v)
    if node is None:
        raise InputFormatError(f"{vertex_name(v)} is not in any tilde-V set")
    resolution = RootResolution(v, node, contributing=[node])
    resolution.fan = i_path_fan(g, derived.V_I_total, v)
    resolution.targets = set(decomp.vertices_of(node) - {v} - decomp.child_shared(node))
    for edge in decomp.child_edges(node):
        _resolve_branch(decomp, resolution, edge)
    resolution.contributing = [node] + sorted(resolution.contributing[1:])

    paths = []
    for target in sorted(resolution.targets):
        found = resolution.fan.get(target, [])
        if len(found) == 1:
            paths.append(found[0])
        elif found:
            resolution.problems.append((
                f"two I-paths from {vertex_name(v)} to {vertex_name(target)}",
                Witness("paths", paths=tuple(found))))
        else:
            resolution.problems.append((
                f"no I-path from {vertex_name(v)} to {vertex_name(target)}",
                Witness("vertices", (v, target))))
    if resolution.problems:
        return resolution

    try:
        resolution.tree = tree_from_paths(v, paths)
    except StructureError as e:
        resolution.problems.append((str(e), Witness("vertices", tuple(e.nodes))))
        return resolution
    for z in check_tree_closure(g, resolution.tree):
        extra = sorted(frozenset(g.successors[z]) - resolution.tree.children(z))
        resolution.problems.append((
            f"{vertex_name(z)} on the tree of {vertex_name(v)} also points at "
            f"{', '.join(vertex_name(x) for x in extra)}",
            Witness("vertices", (z,) + tuple(extra))))
    return resolution


def _condition(name: str, problem: Optional[Tuple[str, Optional[Witness]]]) -> ConditionResult:
    if problem is None:
        return ConditionResult(name, OIC_CONDITIONS[name], True)
    message, witness = problem
    return ConditionResult(name, OIC_CONDITIONS[name], False, message, witness)


def check_conditions(g: Digraph, decomp: PolytreeDecomposition) -> VerificationReport:
    report = VerificationReport("oic")
    inner = decomp.inner_vertices
    non_inner = sorted(frozenset(g.vertices) - inner)

    structure = structural_problems(decomp, g)
    if structure:
        message, nodes = structure[0]
        report.conditions.append(_condition("condition_1", (message, Witness("nodes", nodes=nodes))))
        report.conditions.append(_condition(
            "condition_2", ("not evaluated because Condition 1 failed", None)))
    else:
        report.conditions.append(_condition("condition_1", None))
        derived = derive_sets(g, decomp)
        first_problem = None
        for key in decomp.keys:
            for v in sorted(derived.tilde_V[key]):
                resolution = resolve_root(g, decomp, derived, v)
                report.branches.extend(resolution.branches)
                if resolution.problems and first_problem is None:
                    first_problem = resolution.problems[0]
        report.conditions.append(_condition("condition_2", first_problem))

    # Condition 3: a cycle through x must touch a node that contains x
    problem = None
    for x in sorted(inner):
        home: FrozenSet[int] = frozenset()
        for key in decomp.nodes_containing(x):
            home |= decomp.vertices_of(key)
        cycle = find_cycle_through(g, x, frozenset(g.vertices) - home)
        if cycle is not None:
            witness = Witness("cycle", cycle)
            problem = (f"{witness.describe()} avoids every node holding {vertex_name(x)}", witness)
            break
    if problem is None:
        witness = non_inner_cycle(g, non_inner)
        if witness is not None:
            problem = (f"{witness.describe()} among non-inner vertices", witness)
    report.conditions.append(_condition("condition_3", problem))

    # Condition 4
    problem = None
    covered = i_path_coverage(g, inner)
    for z in non_inner:
        if z not in covered:
            problem = (f"{vertex_name(z)} is not on any I-path", Witness("vertex", (z,)))
            break
        terminals = i_path_terminals(g, inner, z)
        if not any(terminals <= n.vertices for n in decomp.nodes):
            problem = (f"I-paths through {vertex_name(z)} end in more than one node: "
                       f"{', '.join(vertex_name(w) for w in sorted(terminals))}",
                       Witness("vertices", (z,) + tuple(sorted(terminals))))
            break
    report.conditions.append(_condition("condition_4", problem))

    logger.debug(f"OIC check with s={decomp.s}: failed={report.failed_conditions}")
    return report


def verify_oic(g: Digraph, decomp: PolytreeDecomposition) -> VerificationReport:
    """Structure, derived sets and Conditions 1-4 in a single report."""
    return check_conditions(g, decomp)


def build_tree_oic(g: Digraph, decomp: PolytreeDecomposition, derived: DerivedSets,
                   root_vertex: int) -> OicTree:
    resolution = resolve_root(g, decomp, derived, root_vertex)
    if resolution.problems:
        message = resolution.problems[0][0]
        logger.error(f"Cannot build the decoding tree of {vertex_name(root_vertex)}: {message}")
        raise StructureError(message, (resolution.node,))
    return OicTree(resolution.tree, resolution.node,
                   frozenset(resolution.targets) | {root_vertex},
                   tuple(resolution.contributing), tuple(resolution.branches))
