"""Ground truth for small graphs: GF(2) minrank and exhaustive code search.

Both searches are exact for scalar linear codes only.
"""
import logging
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from src.core.bounds import mais_exact
from src.core.errors import BudgetExceededError, InputFormatError
from src.core.gf2 import Gf2Basis, gf2_rank, popcount, row_to_hex
from src.core.graph import Digraph, bits_of
from src.core.index_code import CodeSymbol, LinearCode, check_linear_decodability
from src.core.settings import load_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FittingMatrix:
    """K x K GF(2) matrix; row i is an integer with bit j = entry (i, j)."""
    rows: Tuple[int, ...]

    @property
    def K(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return gf2_rank(self.rows)

    def fits(self, g: Digraph) -> bool:
        if self.K != g.vertex_count:
            return False
        for i, row in enumerate(self.rows):
            if not (row >> i) & 1:
                return False
            if row & ~((1 << i) | g.out_mask(i)):
                return False
        return True

    def to_array(self) -> np.ndarray:
        return np.array([[(row >> j) & 1 for j in range(self.K)] for row in self.rows], dtype=np.uint8)

    def hex_rows(self) -> List[str]:
        return [row_to_hex(row) for row in self.rows]


@dataclass(frozen=True)
class MinrankResult:
    rank: int
    witness: FittingMatrix
    lower_bound: int
    explored: int


class _Finished(Exception):
    pass


def minrank_gf2(g: Digraph, budget: Optional[int] = None,
                lower_bound: Optional[int] = None) -> MinrankResult:
    """Minimum rank over fitting matrices of g.

    Rows are chosen one at a time; options already in the current span come
    first, then heavier rows. A partial choice is dropped once its rank
    reaches the best complete one, and (row, span) states are visited once.
    """
    settings = load_settings()
    budget = budget if budget is not None else settings.minrank_budget
    free = len(g.edges)
    if 2 ** free > budget:
        logger.error(f"Minrank refused: 2^{free} fitting matrices exceed the budget {budget}")
        raise BudgetExceededError(
            f"minrank over 2^{free} fitting matrices exceeds the budget {budget}", 2 ** free, budget)
    if lower_bound is None:
        lower_bound = mais_exact(g)[0] if g.vertex_count <= settings.mais_limit else 1

    K = g.vertex_count
    options: List[List[int]] = []
    for i in g.vertices:
        neighbours = bits_of(g.out_mask(i))
        row_options = []
        for size in range(len(neighbours) + 1):
            for subset in combinations(neighbours, size):
                row = 1 << i
                for j in subset:
                    row |= 1 << j
                row_options.append(row)
        options.append(row_options)

    best = {"rank": K, "rows": tuple(1 << i for i in range(K))}
    seen: Set[Tuple[int, Tuple[int, ...]]] = set()
    explored = [0]

    def search(i: int, basis: Gf2Basis, rows: List[int]) -> None:
        if basis.rank >= best["rank"]:
            return
        if i == K:
            best["rank"], best["rows"] = basis.rank, tuple(rows)
            logger.debug(f"Minrank candidate {basis.rank}")
            if basis.rank <= lower_bound:
                raise _Finished()
            return
        state = (i, basis.key())
        if state in seen:
            return
        seen.add(state)
        explored[0] += 1
        ordered = sorted(options[i], key=lambda row: (not basis.contains(row), -popcount(row), row))
        for row in ordered:
            extended = basis.copy()
            extended.insert(row)
            if extended.rank >= best["rank"]:
                continue
            rows.append(row)
            search(i + 1, extended, rows)
            rows.pop()

    try:
        search(0, Gf2Basis(), [])
    except _Finished:
        pass
    logger.info(f"Minrank {best['rank']} (lower bound {lower_bound}, {explored[0]} states)")
    return MinrankResult(best["rank"], FittingMatrix(best["rows"]), lower_bound, explored[0])


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of GF(2)^n."""
    if k < 0 or k > n:
        return 0
    numerator, denominator = 1, 1
    for i in range(k):
        numerator *= 2 ** (n - i) - 1
        denominator *= 2 ** (i + 1) - 1
    return numerator // denominator


def _subspaces(K: int, length: int):
    """Every length-dimensional subspace of GF(2)^K once, as reduced row echelon bases.

    Pivots sit at each row's lowest set bit; other pivot columns are zero and
    the remaining higher columns range freely.
    """
    for pivots in combinations(range(K), length):
        pivot_set = set(pivots)
        slots = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, K) if c not in pivot_set]
        for assignment in product((0, 1), repeat=len(slots)):
            rows = [1 << p for p in pivots]
            for (r, c), bit in zip(slots, assignment):
                if bit:
                    rows[r] |= 1 << c
            yield rows


def exhaustive_code_search(g: Digraph, max_len: int,
                           budget: Optional[int] = None) -> Optional[LinearCode]:
    """Shortest scalar linear code of length <= max_len decodable by every receiver."""
    if max_len < 1:
        raise InputFormatError(f"max_len must be >= 1, got {max_len}")
    budget = budget if budget is not None else load_settings().minrank_budget
    K = g.vertex_count
    max_len = min(max_len, K)
    requested = sum(gaussian_binomial(K, length) for length in range(1, max_len + 1))
    if requested > budget:
        logger.error(f"Code search refused: {requested} subspaces exceed the budget {budget}")
        raise BudgetExceededError(
            f"code search over {requested} subspaces exceeds the budget {budget}", requested, budget)

    for length in range(1, max_len + 1):
        for rows in _subspaces(K, length):
            code = LinearCode(K, tuple(CodeSymbol(f"c_{n + 1}", row) for n, row in enumerate(rows)))
            if all(check_linear_decodability(g, code)):
                logger.info(f"Found a decodable code of length {length}")
                return code
        logger.debug(f"No decodable code of length {length}")
    return None


def optimality_verdict(code_length: int, result: MinrankResult) -> Dict:
    return {
        "code_length": code_length,
        "minrank": result.rank,
        "lower_bound": result.lower_bound,
        "optimal": code_length == result.rank,
        "witness_hex": result.witness.hex_rows(),
    }
