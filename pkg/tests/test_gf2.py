from functools import reduce
from itertools import permutations
from operator import xor

from hypothesis import given, settings
from hypothesis.strategies import integers, lists

from src.core.gf2 import (Gf2Basis, gf2_is_in_rowspan, gf2_rank, gf2_solve, hex_to_row, lowest_bit,
                          popcount, row_to_hex)


def span(rows):
    result = {0}
    for row in rows:
        result |= {value ^ row for value in result}
    return result


def test_popcount_and_lowest_bit():
    assert popcount(0b101101) == 4
    assert lowest_bit(0b101000) == 3
    assert lowest_bit(1) == 0


def test_rank_of_dependent_rows():
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_rank([]) == 0
    assert gf2_rank([0, 0b1]) == 1


def test_insert_reports_dependence():
    basis = Gf2Basis()
    assert basis.insert(0b011)
    assert basis.insert(0b110)
    assert not basis.insert(0b101)
    assert basis.rank == 2


def test_copy_is_independent():
    basis = Gf2Basis()
    basis.insert(0b01)
    clone = basis.copy()
    clone.insert(0b10)
    assert basis.rank == 1
    assert clone.rank == 2


def test_solve_returns_combination_of_input_rows():
    rows = [0b0011, 0b0110, 0b1000]
    combination = gf2_solve(0b1101, rows)
    assert combination == 0b111
    assert gf2_solve(0b0001, [0b0011, 0b0110]) is None


def test_hex_round_trip():
    assert row_to_hex(0x34) == "34"
    assert hex_to_row("d") == 13


@settings(max_examples=100, deadline=None)
@given(lists(integers(0, 63), max_size=6), integers(0, 63))
def test_rowspan_membership_matches_enumerated_span(rows, vector):
    assert gf2_is_in_rowspan(vector, rows) == (vector in span(rows))


@settings(max_examples=100, deadline=None)
@given(lists(integers(0, 63), max_size=6))
def test_rank_matches_span_size(rows):
    assert 2 ** gf2_rank(rows) == len(span(rows))


@settings(max_examples=100, deadline=None)
@given(lists(integers(0, 255), max_size=6), integers(0, 255))
def test_solution_xors_back_to_target(rows, target):
    combination = gf2_solve(target, rows)
    if combination is None:
        assert target not in span(rows)
    else:
        chosen = [row for i, row in enumerate(rows) if (combination >> i) & 1]
        assert reduce(xor, chosen, 0) == target


@settings(max_examples=60, deadline=None)
@given(lists(integers(0, 31), max_size=5), lists(integers(0, 31), max_size=5))
def test_equal_spans_have_equal_keys(first, second):
    a, b = Gf2Basis(), Gf2Basis()
    for row in first:
        a.insert(row)
    for row in second:
        b.insert(row)
    assert (a.key() == b.key()) == (span(first) == span(second))


def test_key_ignores_insertion_order():
    rows = [0b1100, 0b0110, 0b0011]
    keys = set()
    for order in permutations(range(3)):
        basis = Gf2Basis()
        for i in order:
            basis.insert(rows[i])
        keys.add(basis.key())
    forward = Gf2Basis()
    for row in rows:
        forward.insert(row)
    keys.add(forward.key())
    assert len(keys) == 1
