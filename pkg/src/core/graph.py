# src/core/graph.py
"""Side-information digraphs, path enumeration and the SUICP problem model."""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from src.core.errors import InputFormatError

logger = logging.getLogger(__name__)

VertexId = int
Edge = Tuple[int, int]
Path = Tuple[int, ...]


def vertex_name(v: VertexId) -> str:
    """Display name of a 0-based vertex in the 1-based x_k convention."""
    return f"x_{v + 1}"


def mask_of(vertices: Iterable[VertexId]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def bits_of(mask: int) -> List[int]:
    """Indices of the set bits of mask, ascending."""
    result = []
    index = 0
    while mask:
        if mask & 1:
            result.append(index)
        mask >>= 1
        index += 1
    return result


@dataclass(frozen=True)
class Digraph:
    """Directed side-information graph on vertices 0..K-1.

    Edge (u, v) means the receiver wanting x_u knows x_v. The edge tuple is
    kept in lexicographic order so iteration and serialization are stable.
    """
    vertex_count: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if not isinstance(self.vertex_count, int) or self.vertex_count < 1:
            raise InputFormatError(f"vertex count must be an integer >= 1, got {self.vertex_count!r}")
        seen = set()
        for edge in self.edges:
            u, v = edge
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InputFormatError(
                    f"edge [{u},{v}] has an endpoint outside 0..{self.vertex_count - 1}")
            if u == v:
                raise InputFormatError(f"self-loop [{u},{v}] is not allowed")
            if (u, v) in seen:
                raise InputFormatError(f"duplicate edge [{u},{v}]")
            seen.add((u, v))
        object.__setattr__(self, "edges", tuple(sorted((int(u), int(v)) for u, v in self.edges)))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Digraph":
        return cls(vertex_count, tuple((int(u), int(v)) for u, v in edges))

    @classmethod
    def from_adjacency(cls, adjacency: Dict[int, Iterable[int]], vertex_count: int,
                       one_based: bool = False) -> "Digraph":
        """Build from {u: [v, ...]}; one_based reads x_1..x_K numbering."""
        shift = 1 if one_based else 0
        edges = [(u - shift, v - shift) for u, targets in adjacency.items() for v in targets]
        return cls.from_edges(vertex_count, edges)

    @property
    def K(self) -> int:
        return self.vertex_count

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @cached_property
    def successors(self) -> Tuple[Tuple[int, ...], ...]:
        adjacency: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adjacency[u].append(v)
        return tuple(tuple(targets) for targets in adjacency)

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return (u, v) in self.edge_set

    def out_mask(self, v: VertexId) -> int:
        return mask_of(self.successors[v])

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def with_edges(self, extra: Iterable[Edge]) -> "Digraph":
        return Digraph.from_edges(self.vertex_count, list(self.edges) + list(extra))


@dataclass(frozen=True)
class SuicpInstance:
    """Single unicast index coding problem: receiver k wants x_k."""
    graph: Digraph
    message_bits: int = 1

    def __post_init__(self):
        if not isinstance(self.message_bits, int) or self.message_bits < 1:
            raise InputFormatError(f"message bits t must be >= 1, got {self.message_bits!r}")

    @property
    def K(self) -> int:
        return self.graph.vertex_count

    @property
    def alphabet_size(self) -> int:
        return 2 ** self.message_bits

    def want_set(self, k: VertexId) -> FrozenSet[int]:
        return frozenset({k})

    def side_information(self, k: VertexId) -> FrozenSet[int]:
        return out_neighborhood(self.graph, k)


@dataclass(frozen=True)
class PathEnumeration:
    paths: Tuple[Path, ...]
    truncated: bool = False

    def __len__(self):
        return len(self.paths)


@dataclass(frozen=True)
class AcyclicityResult:
    acyclic: bool
    cycle: Tuple[int, ...] = ()

    def __bool__(self):
        return self.acyclic


@dataclass(frozen=True)
class InducedSubgraph:
    graph: Optional[Digraph]
    original_of: Tuple[int, ...] = ()
    index_of: Dict[int, int] = field(default_factory=dict)

    def to_original(self, vertices: Iterable[int]) -> List[int]:
        return [self.original_of[v] for v in vertices]


def out_neighborhood(g: Digraph, v: VertexId) -> FrozenSet[int]:
    if not 0 <= v < g.vertex_count:
        raise InputFormatError(f"vertex {v} is outside 0..{g.vertex_count - 1}")
    return frozenset(g.successors[v])


def enumerate_paths(g: Digraph, source: VertexId, target: VertexId,
                    interior_forbidden: Iterable[VertexId] = (),
                    max_count: Optional[int] = None) -> PathEnumeration:
    """All simple directed paths source -> target whose interior avoids a set.

    Paths come out in lexicographic order of their vertex sequences. When
    source == target the result holds the cycles through source. At most
    max_count paths are returned and `truncated` reports whether more exist.
    """
    for endpoint in (source, target):
        if not 0 <= endpoint < g.vertex_count:
            raise InputFormatError(f"vertex {endpoint} is outside 0..{g.vertex_count - 1}")
    forbidden = frozenset(interior_forbidden)
    limit = None if max_count is None else max_count + 1
    found: List[Path] = []

    # iterative DFS; successors are ascending so output is lexicographic
    path = [source]
    on_path = {source}
    stack = [iter(g.successors[source])]
    while stack:
        if limit is not None and len(found) >= limit:
            break
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if step == target:
            found.append(tuple(path) + (target,))
            continue
        if step in on_path or step in forbidden:
            continue
        path.append(step)
        on_path.add(step)
        stack.append(iter(g.successors[step]))

    truncated = max_count is not None and len(found) > max_count
    if truncated:
        found = found[:max_count]
    return PathEnumeration(tuple(found), truncated)


def enumerate_stop_paths(g: Digraph, source: VertexId, stop_at: FrozenSet[int],
                         max_per_target: int = 2) -> Dict[int, List[Path]]:
    """Paths from source that end at their first vertex in stop_at.

    Interior vertices avoid stop_at, so with stop_at = inner vertices these
    are exactly the I-paths leaving source (a path back to source is an
    I-cycle). At most max_per_target paths are kept per terminal vertex.
    """
    fan: Dict[int, List[Path]] = {}
    path = [source]
    on_path = {source}
    stack = [iter(g.successors[source])]
    while stack:
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if step in stop_at:
            bucket = fan.setdefault(step, [])
            if len(bucket) < max_per_target:
                bucket.append(tuple(path) + (step,))
            continue
        if step in on_path:
            continue
        path.append(step)
        on_path.add(step)
        stack.append(iter(g.successors[step]))
    return fan


def is_acyclic(g: Digraph) -> AcyclicityResult:
    """Acyclicity test returning one directed cycle as a witness.

    The witness lists the cycle's vertices once each; the closing edge runs
    from the last vertex back to the first.
    """
    try:
        cycle_edges = nx.find_cycle(g.to_networkx(), orientation="original")
    except nx.NetworkXNoCycle:
        return AcyclicityResult(True)
    cycle = tuple(edge[0] for edge in cycle_edges)
    logger.debug(f"Found cycle {[vertex_name(v) for v in cycle]}")
    return AcyclicityResult(False, cycle)


def induced_subgraph(g: Digraph, keep: Iterable[VertexId]) -> InducedSubgraph:
    """Subgraph on `keep`, re-indexed densely in ascending original order.

    An empty keep set yields graph=None since a Digraph needs K >= 1.
    """
    kept = sorted(set(keep))
    for v in kept:
        if not 0 <= v < g.vertex_count:
            raise InputFormatError(f"vertex {v} is outside 0..{g.vertex_count - 1}")
    if not kept:
        return InducedSubgraph(None, (), {})
    index_of = {v: i for i, v in enumerate(kept)}
    edges = [(index_of[u], index_of[v]) for u, v in g.edges if u in index_of and v in index_of]
    return InducedSubgraph(Digraph.from_edges(len(kept), edges), tuple(kept), index_of)


def find_cycle_through(g: Digraph, vertex: VertexId,
                       allowed: FrozenSet[int]) -> Optional[Tuple[int, ...]]:
    """Shortest cycle through `vertex` whose other vertices lie in `allowed`."""
    graph = g.to_networkx().subgraph(set(allowed) | {vertex})
    best: Optional[Tuple[int, ...]] = None
    for successor in g.successors[vertex]:
        if successor not in graph:
            continue
        if successor == vertex:
            continue
        try:
            back = nx.shortest_path(graph, successor, vertex)
        except nx.NetworkXNoPath:
            continue
        cycle = (vertex,) + tuple(back[:-1])
        if best is None or len(cycle) < len(best):
            best = cycle
    return best
