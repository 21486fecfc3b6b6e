from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings

from src.core.bounds import bounds_report, mais_exact, oic_witness
from src.core.errors import BudgetExceededError, UnverifiedStructureError
from src.core.graph import Digraph, induced_subgraph, is_acyclic

from .strategies import digraphs


def brute_force_mais(g):
    for size in range(g.K, 0, -1):
        found = [subset for subset in combinations(g.vertices, size)
                 if is_acyclic(induced_subgraph(g, subset).graph).acyclic]
        if found:
            return size, frozenset(min(found))
    return 0, frozenset()


def test_mais_of_fig2(fig2_graph):
    assert mais_exact(fig2_graph) == (3, frozenset({0, 1, 4}))


def test_mais_of_triangle(triangle):
    assert mais_exact(triangle) == (2, frozenset({0, 1}))


def test_mais_of_acyclic_graph():
    g = Digraph.from_edges(4, [(0, 1), (1, 2), (0, 3)])
    assert mais_exact(g) == (4, frozenset(range(4)))


def test_mais_refuses_large_graphs(fig2_graph):
    with pytest.raises(BudgetExceededError) as caught:
        mais_exact(fig2_graph, limit=5)
    assert caught.value.requested == 6
    assert caught.value.budget == 5


def test_mais_limit_from_environment(fig2_graph, monkeypatch):
    monkeypatch.setenv("OIC_MAIS_LIMIT", "4")
    with pytest.raises(BudgetExceededError):
        mais_exact(fig2_graph)


@settings(max_examples=80, deadline=None)
@given(digraphs(max_vertices=7))
def test_mais_matches_brute_force(g):
    assert mais_exact(g) == brute_force_mais(g)


def test_oic_witness_of_fig2(fixture_cache):
    fixture = fixture_cache("fig2")
    assert oic_witness(fixture.instance.graph, fixture.decomposition) == {0, 1, 4}


@pytest.mark.parametrize("name", ["fig2", "fig3", "fig351", "fig31", "fig39", "fig311"])
def test_oic_witness_is_acyclic_and_as_long_as_the_code(fixture_cache, name):
    fixture = fixture_cache(name)
    witness = oic_witness(fixture.instance.graph, fixture.decomposition)
    assert len(witness) == fixture.expected_length
    assert is_acyclic(induced_subgraph(fixture.instance.graph, witness).graph).acyclic


def test_bounds_report_of_fig2(fixture_cache):
    fixture = fixture_cache("fig2")
    report = bounds_report(fixture.instance.graph, fixture.decomposition)
    assert report.code_length == 3
    assert report.mais == 3
    assert report.beta == 3
    assert report.capacity == Fraction(1, 3)
    assert report.identity_holds
    data = report.to_dict()
    assert data["capacity"] == {"num": 1, "den": 3}
    assert data["oic_witness"] == [0, 1, 4]


def test_bounds_without_mais_use_the_witness(fixture_cache):
    fixture = fixture_cache("fig311")
    report = bounds_report(fixture.instance.graph, fixture.decomposition, run_mais=False)
    assert report.mais is None
    assert report.lower_bound == 4
    assert report.capacity == Fraction(1, 4)


def test_bounds_note_skipped_mais(fixture_cache):
    fixture = fixture_cache("fig3")
    report = bounds_report(fixture.instance.graph, fixture.decomposition, mais_limit=5)
    assert report.mais is None
    assert "skipped" in report.notes[0]


def test_bounds_need_a_verified_structure(fixture_cache):
    fixture = fixture_cache("fig2")
    g = fixture.instance.graph.with_edges([(1, 4)])
    with pytest.raises(UnverifiedStructureError):
        bounds_report(g, fixture.decomposition)


def test_fig31_formula_disagrees_with_published_value(fixture_cache):
    fixture = fixture_cache("fig31")
    report = bounds_report(fixture.instance.graph, fixture.decomposition)
    assert report.code_length == 7
    assert report.mais == 7
    assert report.formula_capacity == Fraction(1, 7)
    assert fixture.published_capacity == Fraction(1, 6)
    assert fixture.capacity_discrepancy
