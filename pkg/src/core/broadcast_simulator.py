import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.core.errors import InputFormatError
from src.core.graph import SuicpInstance, bits_of, vertex_name
from src.core.index_code import (DecodingPlan, LinearCode, MessageVector, apply_code, decode_receiver,
                                 encode_oic, make_decoding_plan)
from src.core.oic_structure import PolytreeDecomposition, derive_sets

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_K = 16

ProgressCallback = Callable[[int, str], None]


@dataclass
class SimulationReport:
    mode: str
    trials: int
    seed: Optional[int]
    failures: int = 0
    receivers: Dict[int, Dict[str, int]] = field(default_factory=dict)
    first_failure: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "failures": self.failures,
            "receivers": [{"receiver": k, **stats} for k, stats in sorted(self.receivers.items())],
            "first_failure": self.first_failure,
        }


class BroadcastSimulator:
    """Encodes message batches, decodes every receiver from its plan and compares to the truth."""

    def __init__(self, instance: SuicpInstance, decomp: PolytreeDecomposition,
                 code: Optional[LinearCode] = None, plan: Optional[DecodingPlan] = None):
        try:
            self.instance = instance
            derived = derive_sets(instance.graph, decomp)
            self.code = code or encode_oic(instance.graph, decomp, derived)
            self.plan = plan or make_decoding_plan(instance.graph, decomp, derived, self.code)
            logger.info(f"Simulator ready: K={instance.K}, code length {self.code.length}")
        except Exception as e:
            logger.error(f"Error preparing broadcast simulation: {str(e)}")
            raise

    def decode_all(self, messages: MessageVector) -> List[int]:
        """One broadcast, every receiver decoded from its side information."""
        broadcast = apply_code(self.code, messages)
        decoded = []
        for k in range(self.instance.K):
            side = {v: messages.values[v] for v in self.plan.receiver(k).side_vertices}
            decoded.append(decode_receiver(self.plan, k, broadcast, side))
        return decoded

    def _assignments(self, trials: int, seed: Optional[int], exhaustive: bool) -> np.ndarray:
        K, t = self.instance.K, self.instance.message_bits
        if exhaustive:
            indices = np.arange(2 ** K, dtype=np.uint64)
            return ((indices[:, None] >> np.arange(K, dtype=np.uint64)) & np.uint64(1)).astype(np.uint64)
        rng = np.random.default_rng(seed)
        return rng.integers(0, 2 ** t - 1, size=(trials, K), dtype=np.uint64, endpoint=True)

    def simulate(self, trials: int = 1000, seed: Optional[int] = 0, exhaustive: Optional[bool] = None,
                 progress_callback: Optional[ProgressCallback] = None) -> SimulationReport:
        """Run the batch; exhaustive defaults to on when K <= 16 and t = 1.

        Every assignment is checked for every receiver. The first mismatch is
        kept with seed, messages and receiver so it can be replayed.
        """
        try:
            K, t = self.instance.K, self.instance.message_bits
            can_exhaust = K <= EXHAUSTIVE_MAX_K and t == 1
            if exhaustive is None:
                exhaustive = can_exhaust
            if exhaustive and not can_exhaust:
                raise InputFormatError(f"exhaustive simulation needs K <= {EXHAUSTIVE_MAX_K} and t = 1")
            if t > 64:
                raise InputFormatError(f"simulation supports t <= 64, got {t}")
            if not exhaustive and trials < 1:
                raise InputFormatError(f"trials must be >= 1, got {trials}")

            messages = self._assignments(trials, seed, exhaustive)
            report = SimulationReport("exhaustive" if exhaustive else "random", messages.shape[0],
                                      None if exhaustive else seed)
            words = np.zeros((messages.shape[0], self.code.length), dtype=np.uint64)
            for position, symbol in enumerate(self.code.symbols):
                words[:, position] = np.bitwise_xor.reduce(messages[:, bits_of(symbol.mask)], axis=1)

            for k in range(K):
                receiver = self.plan.receiver(k)
                columns = [self.plan.labels.index(label) for label in receiver.gamma]
                decoded = np.bitwise_xor.reduce(words[:, columns], axis=1)
                side = receiver.side_vertices
                if side:
                    decoded ^= np.bitwise_xor.reduce(messages[:, side], axis=1)
                wrong = np.flatnonzero(decoded != messages[:, k])
                report.failures += int(wrong.size)
                report.receivers[k] = {"decoded": int(messages.shape[0] - wrong.size),
                                       "failures": int(wrong.size), "gamma_size": len(columns)}
                if wrong.size and report.first_failure is None:
                    row = int(wrong[0])
                    report.first_failure = {
                        "seed": report.seed,
                        "receiver": k,
                        "messages": [int(v) for v in messages[row]],
                        "decoded": int(decoded[row]),
                    }
                    logger.error(f"Receiver {vertex_name(k)} decoded {int(decoded[row])} instead of "
                                 f"{int(messages[row, k])} for messages {report.first_failure['messages']}")
                if progress_callback:
                    progress_callback(int(100 * (k + 1) / K), f"Receiver {vertex_name(k)} checked")

            logger.info(f"Simulated {report.trials} {report.mode} broadcasts: {report.failures} failures")
            return report

        except Exception as e:
            if progress_callback:
                progress_callback(-1, f"Error: {str(e)}")
            logger.error(f"Error during broadcast simulation: {str(e)}")
            raise


def simulate(instance: SuicpInstance, decomp: PolytreeDecomposition, trials: int = 1000,
             seed: Optional[int] = 0, exhaustive: Optional[bool] = None,
             progress_callback: Optional[ProgressCallback] = None) -> SimulationReport:
    return BroadcastSimulator(instance, decomp).simulate(trials, seed, exhaustive, progress_callback)
