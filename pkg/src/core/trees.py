"""Rooted decoding trees built from unions of I-paths."""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

from src.core.errors import StructureError
from src.core.graph import Digraph, Path, vertex_name

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootedTree:
    """A tree on a subset of graph vertices, stored as a parent map.

    `parent` maps every non-root vertex to its single parent; the root has
    no entry.
    """
    root: int
    parent: Dict[int, int] = field(default_factory=dict)

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(self.parent) | {self.root}

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return sorted((p, v) for v, p in self.parent.items())

    def children(self, v: int) -> FrozenSet[int]:
        return frozenset(child for child, p in self.parent.items() if p == v)

    def depth(self, v: int) -> int:
        if v != self.root and v not in self.parent:
            raise KeyError(f"{vertex_name(v)} is not in the tree rooted at {vertex_name(self.root)}")
        steps = 0
        while v != self.root:
            v = self.parent[v]
            steps += 1
        return steps

    @property
    def leaves(self) -> FrozenSet[int]:
        parents = set(self.parent.values())
        return frozenset(v for v in self.vertices if v not in parents and v != self.root)

    def internal_vertices(self) -> List[int]:
        """Non-leaf vertices at depth greater than zero, ascending."""
        parents = set(self.parent.values())
        return sorted(v for v in parents if v != self.root)

    def is_subgraph_of(self, g: Digraph) -> bool:
        return all(g.has_edge(p, v) for p, v in self.edges)

    def to_dict(self) -> Dict:
        return {
            "root": self.root,
            "edges": [[p, v] for p, v in self.edges],
        }


def tree_from_paths(root: int, paths: Iterable[Path]) -> RootedTree:
    """Union of paths that all start at root.

    Raises StructureError naming the vertex when two paths reach the same
    vertex through different parents, since the union is then not a tree.
    """
    parent: Dict[int, int] = {}
    for path in paths:
        if not path or path[0] != root:
            raise StructureError(f"path {list(path)} does not start at {vertex_name(root)}")
        for previous, current in zip(path, path[1:]):
            if current == root:
                raise StructureError(f"path {list(path)} returns to the root {vertex_name(root)}")
            known = parent.get(current)
            if known is None:
                parent[current] = previous
            elif known != previous:
                logger.debug(f"{vertex_name(current)} reached from {vertex_name(known)} "
                             f"and {vertex_name(previous)}")
                raise StructureError(
                    f"{vertex_name(current)} is reached from both {vertex_name(known)} "
                    f"and {vertex_name(previous)}",
                    nodes=(current, known, previous))
    return RootedTree(root, parent)
