# src/core/export_formatter.py
import hashlib
import json
import logging
from typing import Any, Dict, Optional, Tuple

from src.core.errors import InputFormatError
from src.core.graph import Digraph, SuicpInstance
from src.core.ic_structure import InnerVertexSet, as_decomposition
from src.core.index_code import CodeSymbol, LinearCode, MessageVector
from src.core.oic_structure import PolytreeDecomposition, PolytreeEdge, PolytreeNode

logger = logging.getLogger(__name__)


class IndexCodingExportFormatter:
    """
    Reads and writes every wire format of the toolkit:
    - graph JSON {"K", "edges", "t"} with 0-based vertex ids
    - decomposition JSON {"nodes": [...], "edges": [...]} and inner sets {"V_I": [...]}
    - code JSON with lowercase mask_hex, plus plan / bounds / simulation reports
    - TXT export of the human tables
    """

    def load_json(self, filepath: str) -> Dict[str, Any]:
        try:
            with open(filepath, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError:
            raise InputFormatError("file not found", filepath)
        except json.JSONDecodeError as e:
            raise InputFormatError(f"invalid JSON at line {e.lineno}: {e.msg}", filepath)
        if not isinstance(data, dict):
            raise InputFormatError("top-level JSON value must be an object", filepath)
        return data

    def parse_instance(self, data: Dict[str, Any], source: Optional[str] = None) -> SuicpInstance:
        """Parse graph JSON, rejecting self-loops and duplicates with the offending pair."""
        try:
            K = data["K"]
            edges = data.get("edges", [])
            t = data.get("t", 1)
        except (KeyError, TypeError):
            raise InputFormatError('graph JSON needs "K" and "edges"', source)
        if not isinstance(K, int) or not isinstance(t, int) or not isinstance(edges, list):
            raise InputFormatError('"K" and "t" must be integers and "edges" a list', source)
        pairs = []
        for edge in edges:
            if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(v, int) for v in edge)):
                raise InputFormatError(f"edge {edge!r} is not a pair of integers", source)
            pairs.append((edge[0], edge[1]))
        try:
            return SuicpInstance(Digraph(K, tuple(pairs)), t)
        except InputFormatError as e:
            raise InputFormatError(str(e), source)

    def parse_decomposition(self, data: Dict[str, Any],
                            source: Optional[str] = None) -> PolytreeDecomposition:
        if "V_I" in data:
            return as_decomposition(self.parse_inner_set(data, source))
        try:
            nodes = tuple(PolytreeNode(int(n["i"]), int(n["j"]), frozenset(int(v) for v in n["vertices"]))
                          for n in data["nodes"])
            edges = tuple(PolytreeEdge((int(e["parent"][0]), int(e["parent"][1])),
                                       (int(e["child"][0]), int(e["child"][1])), int(e["shared"]))
                          for e in data.get("edges", []))
            return PolytreeDecomposition(nodes, edges)
        except (KeyError, TypeError, IndexError, ValueError) as e:
            raise InputFormatError(f"malformed decomposition: {e}", source)

    def parse_inner_set(self, data: Dict[str, Any], source: Optional[str] = None) -> InnerVertexSet:
        try:
            return InnerVertexSet(frozenset(int(v) for v in data["V_I"]))
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f'inner set JSON needs a "V_I" id list ({e})', source)

    def parse_code(self, data: Dict[str, Any], source: Optional[str] = None) -> LinearCode:
        try:
            symbols = tuple(CodeSymbol(s["label"], int(s["mask_hex"], 16)) for s in data["symbols"])
            return LinearCode(int(data["K"]), symbols)
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"malformed code JSON: {e}", source)

    def parse_messages(self, text: str, K: int, bits: int = 1) -> MessageVector:
        """A 0/1 string for t = 1, otherwise comma-separated integers."""
        if "," in text or bits > 1:
            try:
                messages = MessageVector(tuple(int(v) for v in text.split(",")), bits)
            except ValueError:
                raise InputFormatError(f"cannot read messages {text!r}")
        else:
            messages = MessageVector.from_bitstring(text.strip())
        if messages.K != K:
            raise InputFormatError(f"expected {K} messages, got {messages.K}")
        return messages

    def graph_to_dict(self, instance: SuicpInstance) -> Dict[str, Any]:
        return {"K": instance.K, "edges": [[u, v] for u, v in instance.graph.edges], "t": instance.message_bits}

    def decomposition_to_dict(self, decomp: PolytreeDecomposition) -> Dict[str, Any]:
        return {
            "nodes": [{"i": n.depth, "j": n.index, "vertices": sorted(n.vertices)} for n in decomp.nodes],
            "edges": [{"parent": list(e.parent), "child": list(e.child), "shared": e.shared}
                      for e in decomp.edges],
        }

    def canonical_graph_json(self, instance: SuicpInstance) -> str:
        return json.dumps(self.graph_to_dict(instance), separators=(",", ":"), sort_keys=True)

    def graph_sha256(self, instance: SuicpInstance) -> str:
        return hashlib.sha256(self.canonical_graph_json(instance).encode("utf-8")).hexdigest()

    def load_instance(self, filepath: str) -> SuicpInstance:
        return self.parse_instance(self.load_json(filepath), filepath)

    def load_decomposition(self, filepath: str) -> PolytreeDecomposition:
        return self.parse_decomposition(self.load_json(filepath), filepath)

    def load_pair(self, graph_path: str, decomp_path: str) -> Tuple[SuicpInstance, PolytreeDecomposition]:
        return self.load_instance(graph_path), self.load_decomposition(decomp_path)

    def dumps(self, data: Any) -> str:
        return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=False)

    def export_to_json(self, data: Dict[str, Any], filepath: str) -> None:
        """Export a report dictionary to a JSON file."""
        try:
            if not data:
                raise ValueError("No valid data to export")
            with open(filepath, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=2, ensure_ascii=False)
            logger.info(f"Successfully exported JSON to {filepath}")
        except Exception as e:
            logger.error(f"Failed to export to JSON: {str(e)}")
            raise

    def export_to_txt(self, text: str, filepath: str, title: str = "Index coding report") -> None:
        """Export a rendered table to a text file."""
        try:
            if not text.strip():
                raise ValueError("No content to export")
            header = ["=" * 80, title, "=" * 80, ""]
            with open(filepath, 'w', encoding='utf-8') as f:
                f.write('\n'.join(header + [text]) + '\n')
            logger.info(f"Successfully exported TXT to {filepath}")
        except Exception as e:
            logger.error(f"Failed to export to TXT: {str(e)}")
            raise
