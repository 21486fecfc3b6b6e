"""End-to-end reproduction of the worked examples and the randomized property suite."""
from fractions import Fraction

import numpy as np
import pytest

from src.core.bounds import bounds_report, mais_exact
from src.core.broadcast_simulator import simulate
from src.core.graph import Digraph
from src.core.ic_structure import InnerVertexSet, encode_ic
from src.core.index_code import encode_oic, make_decoding_plan
from src.core.instance_generator import random_oic
from src.core.minrank_oracle import exhaustive_code_search, minrank_gf2
from src.core.oic_structure import check_tree_closure, derive_sets, verify_oic

from .strategies import SHAPES, sized_profile


def exhaustive_failures(fixture):
    report = simulate(fixture.instance, fixture.decomposition, exhaustive=True)
    assert report.trials == 2 ** fixture.instance.K
    return report.failures


def test_example1(fixture_cache):
    fixture = fixture_cache("example1")
    assert fixture.code.length == 3 == fixture.instance.K - fixture.inner_set.N + 1
    assert len(fixture.expected["plan"]) == 5
    assert exhaustive_failures(fixture) == 0


def test_fig2(fixture_cache):
    fixture = fixture_cache("fig2")
    g = fixture.instance.graph
    assert verify_oic(g, fixture.decomposition).passed
    assert [s.describe() for s in fixture.code.symbols] == ["x_1 + x_3 + x_4", "x_3 + x_5 + x_6", "x_1 + x_2"]
    assert len(fixture.expected["plan"]) == 6
    assert mais_exact(g)[0] == 3
    assert minrank_gf2(g).rank == 3
    assert bounds_report(g, fixture.decomposition).capacity == fixture.published_capacity == Fraction(1, 3)
    assert exhaustive_failures(fixture) == 0


def test_fig2_with_a_back_edge_fails_condition_3(fixture_cache):
    fixture = fixture_cache("fig2")
    g = fixture.instance.graph.with_edges([(4, 3)])
    assert not verify_oic(g, fixture.decomposition).condition("condition_3").passed


def test_fig3(fixture_cache):
    fixture = fixture_cache("fig3")
    g = fixture.instance.graph
    report = bounds_report(g, fixture.decomposition)
    assert report.code_length == 6 == report.mais
    assert report.capacity == fixture.published_capacity == Fraction(1, 6)
    row = fixture.plan.receiver(6)
    assert row.side_mask & ~g.out_mask(6) == 0
    assert exhaustive_failures(fixture) == 0


@pytest.mark.parametrize("name,capacity", [("fig351", Fraction(1, 5)), ("fig39", Fraction(1, 3)),
                                           ("fig311", Fraction(1, 4))])
def test_capacity_fixtures(fixture_cache, name, capacity):
    fixture = fixture_cache(name)
    g = fixture.instance.graph
    report = bounds_report(g, fixture.decomposition)
    assert report.capacity == fixture.published_capacity == capacity
    assert report.code_length == report.mais == fixture.expected["minrank"]
    budget = 2 ** len(g.edges)
    assert minrank_gf2(g, budget=budget, lower_bound=report.mais).rank == report.code_length
    assert exhaustive_failures(fixture) == 0


def test_fig31(fixture_cache):
    fixture = fixture_cache("fig31")
    g = fixture.instance.graph
    derived = derive_sets(g, fixture.decomposition)
    report = bounds_report(g, fixture.decomposition)
    assert report.code_length == len(derived.V_NI) + fixture.decomposition.s == 7
    assert report.identity_holds
    assert fixture.capacity_discrepancy == "published value 1/6, the structure gives 1/7"
    assert exhaustive_failures(fixture) == 0


def profile_for(seed):
    widths = SHAPES[seed % len(SHAPES)]
    s = sum(widths)
    size = max(2, s) + (seed // len(SHAPES)) % 2
    return sized_profile(widths, size, seed % 4)


@pytest.mark.parametrize("seed", range(200))
def test_random_instances(seed):
    profile = profile_for(seed)
    instance, decomp = random_oic(profile, seed)
    g = instance.graph
    assert g.K <= 14
    assert verify_oic(g, decomp).passed

    derived = derive_sets(g, decomp)
    code = encode_oic(g, decomp, derived)
    assert code.length == len(derived.V_NI) + decomp.s
    plan = make_decoding_plan(g, decomp, derived, code)
    for receiver in plan.receivers:
        assert receiver.side_mask & ~g.out_mask(receiver.receiver) == 0
        if receiver.tree is not None:
            assert check_tree_closure(g, receiver.tree) == []

    assert simulate(instance, decomp, exhaustive=True).failures == 0
    if g.K <= 12:
        assert mais_exact(g)[0] == code.length


@pytest.mark.parametrize("seed", range(100))
def test_minrank_matches_code_search(seed):
    rng = np.random.default_rng(seed)
    K = int(rng.integers(2, 7))
    edges = [(u, v) for u in range(K) for v in range(K) if u != v and rng.random() < 0.5]
    g = Digraph.from_edges(K, edges)
    result = minrank_gf2(g, budget=2 ** 30)
    assert result.rank == exhaustive_code_search(g, K).length
    assert result.rank >= mais_exact(g)[0]


@pytest.mark.parametrize("seed", range(50))
def test_single_node_codes_match_ic_codes(seed):
    profile = sized_profile((1,), 2 + seed % 5, seed % 4)
    instance, decomp = random_oic(profile, seed)
    inner = InnerVertexSet(decomp.nodes[0].vertices)
    assert encode_oic(instance.graph, decomp) == encode_ic(instance.graph, inner)
