"""Word-packed GF(2) linear algebra on Python integers (bit i = column i)."""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple


def popcount(value: int) -> int:
    return bin(value).count("1")


def lowest_bit(value: int) -> int:
    return (value & -value).bit_length() - 1


class Gf2Basis:
    """Incremental row echelon basis with ascending-column pivoting.

    Each stored row has its pivot at its lowest set bit and remembers which
    inserted rows it combines, so a successful reduction also yields the
    combination that produced the reduced vector.
    """

    def __init__(self):
        self._rows: Dict[int, Tuple[int, int]] = {}
        self._inserted = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def copy(self) -> "Gf2Basis":
        clone = Gf2Basis()
        clone._rows = dict(self._rows)
        clone._inserted = self._inserted
        return clone

    def reduce(self, vector: int) -> Tuple[int, int]:
        """Return (residual, combination); residual is 0 iff vector is in the span."""
        combination = 0
        while vector:
            pivot = lowest_bit(vector)
            entry = self._rows.get(pivot)
            if entry is None:
                # no row can produce this lowest bit, so vector is outside the span
                return vector, combination
            row, combo = entry
            vector ^= row
            combination ^= combo
        return 0, combination

    def insert(self, vector: int) -> bool:
        """Add a row; returns False when it was already in the span."""
        combination = 1 << self._inserted
        self._inserted += 1
        while vector:
            pivot = lowest_bit(vector)
            entry = self._rows.get(pivot)
            if entry is None:
                self._rows[pivot] = (vector, combination)
                return True
            row, combo = entry
            vector ^= row
            combination ^= combo
        return False

    def contains(self, vector: int) -> bool:
        return self.reduce(vector)[0] == 0

    def key(self) -> Tuple[int, ...]:
        """Fully reduced rows in pivot order; equal keys mean equal spans."""
        reduced: Dict[int, int] = {}
        pivots = sorted(self._rows)
        for column in reversed(pivots):
            row = self._rows[column][0]
            for other in pivots:
                if other > column and (row >> other) & 1:
                    row ^= reduced[other]
            reduced[column] = row
        return tuple(reduced[column] for column in pivots)


def gf2_rank(rows: Sequence[int]) -> int:
    basis = Gf2Basis()
    for row in rows:
        basis.insert(row)
    return basis.rank


def gf2_is_in_rowspan(vector: int, rows: Sequence[int]) -> bool:
    basis = Gf2Basis()
    for row in rows:
        basis.insert(row)
    return basis.contains(vector)


def gf2_solve(target: int, rows: Sequence[int]) -> Optional[int]:
    """Combination mask over `rows` whose XOR equals target, or None."""
    basis = Gf2Basis()
    for row in rows:
        basis.insert(row)
    residual, combination = basis.reduce(target)
    if residual:
        return None
    return combination


def row_to_hex(row: int) -> str:
    return format(row, "x")


def hex_to_row(text: str) -> int:
    return int(text, 16)


__all__: List[str] = [
    "Gf2Basis", "gf2_rank", "gf2_is_in_rowspan", "gf2_solve",
    "popcount", "lowest_bit", "row_to_hex", "hex_to_row",
]
