"""Scalar linear XOR index codes: encoding, decoding plans and decodability."""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import DecodingError, InputFormatError, UnverifiedStructureError
from src.core.gf2 import Gf2Basis, gf2_solve
from src.core.graph import Digraph, bits_of, mask_of, vertex_name
from src.core.oic_structure import (DerivedSets, PolytreeDecomposition, build_tree_oic,
                                    derive_sets, verify_oic)
from src.core.trees import RootedTree
from src.core.verification import NodeKey

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CodeSymbol:
    label: str
    mask: int

    @property
    def mask_hex(self) -> str:
        return format(self.mask, "x")

    def describe(self) -> str:
        return " + ".join(vertex_name(v) for v in bits_of(self.mask))


@dataclass(frozen=True)
class LinearCode:
    K: int
    symbols: Tuple[CodeSymbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        labels = [s.label for s in self.symbols]
        if len(set(labels)) != len(labels):
            raise InputFormatError(f"code symbol labels are not unique: {labels}")
        for symbol in self.symbols:
            if symbol.mask <= 0 or symbol.mask >> self.K:
                raise InputFormatError(f"symbol {symbol.label} has mask {symbol.mask_hex} "
                                       f"outside 1..2^{self.K}-1")

    @property
    def length(self) -> int:
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(s.label for s in self.symbols)

    @property
    def masks(self) -> Tuple[int, ...]:
        return tuple(s.mask for s in self.symbols)

    def index_of(self, label: str) -> int:
        for position, symbol in enumerate(self.symbols):
            if symbol.label == label:
                return position
        raise KeyError(label)

    def mask_of_label(self, label: str) -> int:
        return self.symbols[self.index_of(label)].mask

    def to_dict(self) -> Dict:
        return {"K": self.K, "symbols": [{"label": s.label, "mask_hex": s.mask_hex} for s in self.symbols]}


@dataclass(frozen=True)
class MessageVector:
    """K messages of t bits each, held as integers."""
    values: Tuple[int, ...]
    bits: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.bits < 1:
            raise InputFormatError(f"message width must be >= 1, got {self.bits}")
        for position, value in enumerate(self.values):
            if not 0 <= value < 2 ** self.bits:
                raise InputFormatError(f"message {vertex_name(position)} = {value} does not fit in "
                                       f"{self.bits} bit(s)")

    @classmethod
    def from_bitstring(cls, text: str) -> "MessageVector":
        """Single-bit messages written x_1 first, e.g. "101011"."""
        if not text or any(c not in "01" for c in text):
            raise InputFormatError(f"message bits must be a 0/1 string, got {text!r}")
        return cls(tuple(int(c) for c in text), 1)

    @classmethod
    def random(cls, K: int, bits: int, rng: np.random.Generator) -> "MessageVector":
        values = rng.integers(0, 2 ** bits, size=K, dtype=np.uint64)
        return cls(tuple(int(v) for v in values), bits)

    @property
    def K(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ReceiverPlan:
    receiver: int
    gamma: Tuple[str, ...]
    tau_mask: int
    side_mask: int
    node: Optional[NodeKey] = None
    contributing: Tuple[NodeKey, ...] = ()
    tree: Optional[RootedTree] = None

    @property
    def side_vertices(self) -> List[int]:
        return bits_of(self.side_mask)

    def to_dict(self) -> Dict:
        data = {
            "receiver": self.receiver,
            "gamma": list(self.gamma),
            "tau_hex": format(self.tau_mask, "x"),
            "side_hex": format(self.side_mask, "x"),
        }
        if self.node is not None:
            data["node"] = list(self.node)
            data["contributing"] = [list(n) for n in self.contributing]
        if self.tree is not None:
            data["tree"] = self.tree.to_dict()
        return data


@dataclass(frozen=True)
class DecodingPlan:
    K: int
    labels: Tuple[str, ...]
    receivers: Tuple[ReceiverPlan, ...]

    def receiver(self, k: int) -> ReceiverPlan:
        for plan in self.receivers:
            if plan.receiver == k:
                return plan
        raise KeyError(k)

    def to_dict(self) -> Dict:
        return {"K": self.K, "labels": list(self.labels), "receivers": [r.to_dict() for r in self.receivers]}


def non_inner_symbol(g: Digraph, j: int) -> CodeSymbol:
    """y_j = x_j + every message in the out-neighbourhood of x_j."""
    return CodeSymbol(f"y_{j + 1}", mask_of((j,) + g.successors[j]))


def _require_verified(g: Digraph, decomp: PolytreeDecomposition) -> None:
    report = verify_oic(g, decomp)
    if not report.passed:
        logger.error(f"OIC structure check failed: {report.failed_conditions}")
        raise UnverifiedStructureError(
            f"not an OIC structure (failed: {', '.join(report.failed_conditions)})", report)


def encode_oic(g: Digraph, decomp: PolytreeDecomposition,
               derived: Optional[DerivedSets] = None) -> LinearCode:
    """One symbol per node in (depth, index) order, then one per non-inner vertex."""
    _require_verified(g, decomp)
    derived = derived or derive_sets(g, decomp)
    symbols = [CodeSymbol(decomp.symbol_label(n.key), mask_of(n.vertices)) for n in decomp.nodes]
    symbols.extend(non_inner_symbol(g, j) for j in sorted(derived.V_NI))
    code = LinearCode(g.vertex_count, tuple(symbols))
    logger.debug(f"Encoded s={decomp.s}, |V_NI|={len(derived.V_NI)} into {code.length} symbols")
    return code


def make_decoding_plan(g: Digraph, decomp: PolytreeDecomposition,
                       derived: Optional[DerivedSets] = None,
                       code: Optional[LinearCode] = None) -> DecodingPlan:
    """Per-receiver symbol sets: the w part from contributing nodes, the z part from tree vertices."""
    derived = derived or derive_sets(g, decomp)
    code = code or encode_oic(g, decomp, derived)
    receivers = []
    for k in g.vertices:
        if k in derived.V_NI:
            labels = [f"y_{k + 1}"]
            node, contributing, tree = None, (), None
        else:
            oic_tree = build_tree_oic(g, decomp, derived, k)
            labels = [decomp.symbol_label(key) for key in oic_tree.contributing]
            labels += [f"y_{z + 1}" for z in oic_tree.tree.internal_vertices()]
            node, contributing, tree = oic_tree.node, oic_tree.contributing, oic_tree.tree
        gamma = tuple(sorted(labels, key=code.index_of))
        tau = 0
        for label in gamma:
            tau ^= code.mask_of_label(label)
        side = tau & ~(1 << k)
        if not (tau >> k) & 1 or side & ~g.out_mask(k):
            logger.error(f"Plan for {vertex_name(k)} leaves {bits_of(side & ~g.out_mask(k))} "
                         f"outside its side information")
            raise DecodingError(f"receiver {vertex_name(k)} cannot cancel its combined symbol "
                                f"{' + '.join(vertex_name(v) for v in bits_of(tau))}")
        receivers.append(ReceiverPlan(k, gamma, tau, side, node, contributing, tree))
    return DecodingPlan(g.vertex_count, code.labels, tuple(receivers))


def apply_code(code: LinearCode, messages: MessageVector) -> List[int]:
    """Broadcast word of every symbol: XOR of the messages its mask selects."""
    if messages.K != code.K:
        raise DecodingError(f"expected {code.K} messages, got {messages.K}")
    words = []
    for symbol in code.symbols:
        word = 0
        for v in bits_of(symbol.mask):
            word ^= messages.values[v]
        words.append(word)
    return words


def decode_receiver(plan: DecodingPlan, k: int, broadcast: Sequence[int],
                    side_values: Mapping[int, int]) -> int:
    """XOR the words named by gamma_k, then strip the known side messages."""
    if len(broadcast) != len(plan.labels):
        raise DecodingError(f"expected {len(plan.labels)} broadcast words, got {len(broadcast)}")
    receiver = plan.receiver(k)
    value = 0
    for label in receiver.gamma:
        value ^= broadcast[plan.labels.index(label)]
    for v in receiver.side_vertices:
        if v not in side_values:
            raise DecodingError(f"receiver {vertex_name(k)} is missing side value {vertex_name(v)}")
        value ^= side_values[v]
    return value


def _receiver_rows(g: Digraph, code: LinearCode, k: int) -> List[int]:
    return list(code.masks) + [1 << j for j in g.successors[k]]


def check_linear_decodability(g: Digraph, code: LinearCode) -> List[bool]:
    """Receiver k decodes iff e_k lies in span(code masks, side unit vectors)."""
    if code.K != g.vertex_count:
        raise InputFormatError(f"code is over {code.K} messages but the graph has {g.vertex_count}")
    result = []
    for k in g.vertices:
        basis = Gf2Basis()
        for row in _receiver_rows(g, code, k):
            basis.insert(row)
        result.append(basis.contains(1 << k))
    return result


def solve_receiver(g: Digraph, code: LinearCode, k: int) -> Optional[Tuple[List[int], List[int]]]:
    """Symbol positions and side vertices whose XOR isolates x_k, or None."""
    rows = _receiver_rows(g, code, k)
    combination = gf2_solve(1 << k, rows)
    if combination is None:
        return None
    chosen = bits_of(combination)
    symbols = [i for i in chosen if i < code.length]
    side = [g.successors[k][i - code.length] for i in chosen if i >= code.length]
    return symbols, side


def check_cancellation(g: Digraph, plan: DecodingPlan, code: LinearCode, k: int) -> bool:
    """Every message index outside {k} and the side set appears an even number of times."""
    receiver = plan.receiver(k)
    counts: Counter = Counter()
    for label in receiver.gamma:
        counts.update(bits_of(code.mask_of_label(label)))
    odd = {v for v, count in counts.items() if count % 2}
    return odd == ({k} | set(receiver.side_vertices)) and not receiver.side_mask & ~g.out_mask(k)
