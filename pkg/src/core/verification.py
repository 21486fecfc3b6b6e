"""Verification reports: per-condition outcomes with counterexample witnesses."""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.core.graph import vertex_name

NodeKey = Tuple[int, int]

WITNESS_KINDS = ("cycle", "paths", "vertex", "vertices", "nodes", "edge")


def node_label(key: NodeKey) -> str:
    return f"({key[0]},{key[1]})"


@dataclass(frozen=True)
class Witness:
    """Concrete evidence for a failed condition.

    kind is one of WITNESS_KINDS. A cycle lists its vertices once; paths hold
    whole vertex sequences (a duplicate I-path pair, for instance).
    """
    kind: str
    vertices: Tuple[int, ...] = ()
    paths: Tuple[Tuple[int, ...], ...] = ()
    nodes: Tuple[NodeKey, ...] = ()

    def describe(self) -> str:
        if self.kind == "cycle":
            names = [vertex_name(v) for v in self.vertices + self.vertices[:1]]
            return "cycle " + " -> ".join(names)
        if self.kind == "paths":
            return "; ".join(" -> ".join(vertex_name(v) for v in path) for path in self.paths)
        if self.kind == "nodes":
            return "nodes " + ", ".join(node_label(n) for n in self.nodes)
        return ", ".join(vertex_name(v) for v in self.vertices)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind}
        if self.vertices:
            data["vertices"] = list(self.vertices)
        if self.paths:
            data["paths"] = [list(p) for p in self.paths]
        if self.nodes:
            data["nodes"] = [list(n) for n in self.nodes]
        return data


@dataclass(frozen=True)
class ConditionResult:
    name: str
    title: str
    passed: bool
    message: str = ""
    witness: Optional[Witness] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "title": self.title, "passed": self.passed}
        if self.message:
            data["message"] = self.message
        if self.witness is not None:
            data["witness"] = self.witness.to_dict()
        return data


@dataclass(frozen=True)
class BranchRecord:
    """How one root's I-paths treat one parent -> child edge of the polytree.

    mode is "self" (the root is the shared vertex), "shared" (the root
    reaches the shared vertex and stops) or "vp" (the root descends into the
    child's vertices). terminal_depth is the depth of the deepest node the
    root's paths reach through this edge.
    """
    root: int
    parent: NodeKey
    child: NodeKey
    shared: int
    mode: str
    targets: Tuple[int, ...]
    terminal_depth: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "root": self.root,
            "parent": list(self.parent),
            "child": list(self.child),
            "shared": self.shared,
            "mode": self.mode,
            "targets": list(self.targets),
            "terminal_depth": self.terminal_depth,
        }


@dataclass
class VerificationReport:
    subject: str
    conditions: List[ConditionResult] = field(default_factory=list)
    branches: List[BranchRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __bool__(self):
        return self.passed

    @property
    def failed_conditions(self) -> List[str]:
        return [c.name for c in self.conditions if not c.passed]

    def condition(self, name: str) -> ConditionResult:
        for result in self.conditions:
            if result.name == name:
                return result
        raise KeyError(name)

    def branches_for(self, root: int) -> List[BranchRecord]:
        return [b for b in self.branches if b.root == root]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "conditions": [c.to_dict() for c in self.conditions],
            "branches": [b.to_dict() for b in self.branches],
        }
