"""Random OIC instances that satisfy Conditions 1-4 by construction."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np

from src.core.errors import InfeasibleProfileError
from src.core.graph import Digraph, SuicpInstance
from src.core.oic_structure import PolytreeDecomposition, PolytreeEdge, PolytreeNode, verify_oic
from src.core.verification import NodeKey, node_label

logger = logging.getLogger(__name__)

MAX_NODES = 8
MAX_NODE_SIZE = 8
MAX_VERTICES = 24
MAX_ATTEMPTS = 20


@dataclass(frozen=True)
class OicProfile:
    """Shape of a random instance.

    widths[i] is the number of nodes at depth i; node_sizes gives |V| per
    node in (depth, index) order, or one entry applied to every node.
    """
    widths: Tuple[int, ...] = (1,)
    node_sizes: Tuple[int, ...] = (3,)
    non_inner: int = 0
    message_bits: int = 1

    @property
    def s(self) -> int:
        return sum(self.widths)

    @property
    def d(self) -> int:
        return len(self.widths) - 1

    def size_of(self, position: int) -> int:
        if len(self.node_sizes) == 1:
            return self.node_sizes[0]
        return self.node_sizes[position]

    def to_dict(self) -> Dict:
        return {"widths": list(self.widths), "node_sizes": list(self.node_sizes),
                "non_inner": self.non_inner, "t": self.message_bits}


def _check_profile(profile: OicProfile) -> None:
    if not profile.widths or any(w < 1 for w in profile.widths):
        raise InfeasibleProfileError(f"every depth needs at least one node, got widths {profile.widths}")
    if profile.widths[0] > 1 and len(profile.widths) < 2:
        raise InfeasibleProfileError("several depth-0 nodes need a depth-1 node to join them")
    if profile.s > MAX_NODES:
        raise InfeasibleProfileError(f"s = {profile.s} exceeds the limit of {MAX_NODES} nodes")
    if len(profile.node_sizes) not in (1, profile.s):
        raise InfeasibleProfileError(f"node_sizes needs 1 or {profile.s} entries")
    sizes = [profile.size_of(p) for p in range(profile.s)]
    if any(not 1 <= size <= MAX_NODE_SIZE for size in sizes):
        raise InfeasibleProfileError(f"node sizes must lie in 1..{MAX_NODE_SIZE}, got {sizes}")
    total = sum(sizes) - (profile.s - 1) + profile.non_inner
    if total > MAX_VERTICES:
        raise InfeasibleProfileError(f"profile needs K = {total} vertices, limit is {MAX_VERTICES}")
    if profile.non_inner < 0 or profile.message_bits < 1:
        raise InfeasibleProfileError("non_inner must be >= 0 and t >= 1")


def _polytree_shape(profile: OicProfile, rng: np.random.Generator) -> Tuple[List[NodeKey], List[Tuple[NodeKey, NodeKey]]]:
    keys = [(i, j + 1) for i, width in enumerate(profile.widths) for j in range(width)]
    links: List[Tuple[NodeKey, NodeKey]] = []
    for i in range(1, len(profile.widths)):
        for j in range(profile.widths[i]):
            if i == 1:
                parent = (0, 1)
            else:
                parent = (i - 1, int(rng.integers(1, profile.widths[i - 1] + 1)))
            links.append((parent, (i, j + 1)))
    # the other depth-0 nodes become second parents of depth-1 nodes
    for j in range(2, profile.widths[0] + 1):
        links.append(((0, j), (1, int(rng.integers(1, profile.widths[1] + 1)))))
    return keys, links


def _allocate(keys: List[NodeKey], links: List[Tuple[NodeKey, NodeKey]], sizes: Dict[NodeKey, int],
              rng: np.random.Generator) -> Tuple[Dict[NodeKey, List[int]], Dict[Tuple[NodeKey, NodeKey], int]]:
    """Give every node fresh vertices, sharing one vertex across each link."""
    members: Dict[NodeKey, List[int]] = {}
    shared: Dict[Tuple[NodeKey, NodeKey], int] = {}
    used_for_sharing: Set[int] = set()
    next_vertex = 0

    def fill(key: NodeKey, seed_vertex=None):
        nonlocal next_vertex
        vertices = [] if seed_vertex is None else [seed_vertex]
        while len(vertices) < sizes[key]:
            vertices.append(next_vertex)
            next_vertex += 1
        members[key] = vertices

    fill(keys[0])
    queue = [keys[0]]
    while queue:
        current = queue.pop(0)
        for link in links:
            if current not in link:
                continue
            other = link[1] if link[0] == current else link[0]
            if other in members:
                continue
            free = [v for v in members[current] if v not in used_for_sharing]
            vertex = free[int(rng.integers(0, len(free)))]
            used_for_sharing.add(vertex)
            shared[link] = vertex
            fill(other, vertex)
            queue.append(other)
    return members, shared


def _targets(decomp: PolytreeDecomposition, node: NodeKey, v: int, rng: np.random.Generator) -> Set[int]:
    targets = set(decomp.vertices_of(node)) - {v} - decomp.child_shared(node)
    pending = list(decomp.child_edges(node))
    while pending:
        edge = pending.pop(0)
        if edge.shared == v:
            continue
        if rng.random() < 0.5:
            targets.add(edge.shared)
        else:
            child = edge.child
            targets |= set(decomp.vertices_of(child)) - {edge.shared} - decomp.child_shared(child)
            pending.extend(decomp.child_edges(child))
    return targets


def _realize(profile: OicProfile, rng: np.random.Generator) -> Tuple[SuicpInstance, PolytreeDecomposition]:
    keys, links = _polytree_shape(profile, rng)
    sizes = {key: profile.size_of(position) for position, key in enumerate(keys)}
    for key in keys:
        degree = sum(1 for link in links if key in link)
        if sizes[key] <= degree:
            raise InfeasibleProfileError(
                f"|V| = {sizes[key]} of node {node_label(key)} must exceed parents + children = {degree}")

    members, shared = _allocate(keys, links, sizes, rng)
    inner_count = 1 + max(max(vs) for vs in members.values())
    decomp = PolytreeDecomposition(
        tuple(PolytreeNode(k[0], k[1], frozenset(members[k])) for k in keys),
        tuple(PolytreeEdge(p, c, shared[(p, c)]) for p, c in links))

    out: Dict[int, Set[int]] = {v: set() for v in range(inner_count + profile.non_inner)}
    for key in keys:
        for v in sorted(set(members[key]) - decomp.parent_shared(key)):
            out[v] |= _targets(decomp, key, v, rng)

    # route some direct inner edges through fresh non-inner vertices
    inner = set(range(inner_count))
    for z in range(inner_count, inner_count + profile.non_inner):
        hosts = sorted(a for a in out if out[a] & inner)
        if not hosts:
            raise InfeasibleProfileError("no inner edge is left to route a non-inner vertex through")
        host = hosts[int(rng.integers(0, len(hosts)))]
        reachable = sorted(out[host] & inner)
        candidates = [n for n in decomp.nodes if n.vertices & set(reachable)]
        node = candidates[int(rng.integers(0, len(candidates)))]
        pool = [w for w in reachable if w in node.vertices]
        picks = [w for w in pool if rng.random() < 0.5] or [pool[int(rng.integers(0, len(pool)))]]
        out[host] -= set(picks)
        out[host].add(z)
        out[z] = set(picks)

    K = inner_count + profile.non_inner
    relabel = [int(v) for v in rng.permutation(K)]
    edges = [(relabel[u], relabel[v]) for u, targets in out.items() for v in targets]
    graph = Digraph.from_edges(K, edges)
    decomp = PolytreeDecomposition(
        tuple(PolytreeNode(n.depth, n.index, frozenset(relabel[v] for v in n.vertices)) for n in decomp.nodes),
        tuple(PolytreeEdge(e.parent, e.child, relabel[e.shared]) for e in decomp.edges))
    return SuicpInstance(graph, profile.message_bits), decomp


def random_oic(profile: OicProfile, seed: int) -> Tuple[SuicpInstance, PolytreeDecomposition]:
    """Seeded random instance with its decomposition; always passes verify_oic."""
    _check_profile(profile)
    rng = np.random.default_rng(seed)
    for attempt in range(MAX_ATTEMPTS):
        instance, decomp = _realize(profile, rng)
        report = verify_oic(instance.graph, decomp)
        if report.passed:
            logger.debug(f"Generated K={instance.K}, s={decomp.s} from seed {seed} (attempt {attempt + 1})")
            return instance, decomp
        logger.warning(f"Seed {seed} attempt {attempt + 1} failed {report.failed_conditions}, retrying")
    logger.error(f"Could not realize profile {profile} from seed {seed}")
    raise InfeasibleProfileError(f"profile {profile.to_dict()} could not be realized from seed {seed}")


def parse_profile(text: str) -> OicProfile:
    """CLI form "widths=1,2;sizes=3;non_inner=2;t=1"."""
    fields: Dict[str, Sequence[int]] = {}
    try:
        for part in filter(None, (p.strip() for p in text.split(";"))):
            name, _, value = part.partition("=")
            fields[name.strip()] = tuple(int(x) for x in value.split(","))
        return OicProfile(
            widths=tuple(fields.get("widths", (1,))),
            node_sizes=tuple(fields.get("sizes", (3,))),
            non_inner=fields.get("non_inner", (0,))[0],
            message_bits=fields.get("t", (1,))[0])
    except ValueError:
        raise InfeasibleProfileError(f"cannot read profile {text!r}; expected widths=..;sizes=..;non_inner=..")
