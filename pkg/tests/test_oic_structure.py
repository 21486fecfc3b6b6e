import pytest

from src.core.errors import InputFormatError, StructureError
from src.core.graph import Digraph
from src.core.ic_structure import as_decomposition, build_tree_ic
from src.core.oic_structure import (MODE_SHARED, MODE_VP, PolytreeDecomposition, build_tree_oic,
                                    check_conditions, check_tree_closure, derive_sets, structural_problems,
                                    verify_oic)
from src.core.trees import RootedTree


@pytest.fixture
def fig2(fixture_cache):
    return fixture_cache("fig2")


def fig2_decomposition():
    return PolytreeDecomposition.build({(0, 1): [0, 2, 3], (1, 1): [2, 4, 5]}, [((0, 1), (1, 1), 2)])


def test_fig2_derived_sets(fig2):
    derived = derive_sets(fig2.instance.graph, fig2.decomposition)
    assert derived.V_I_total == {0, 2, 3, 4, 5}
    assert derived.V_NI == {1}
    assert derived.tilde_V == {(0, 1): {0, 2, 3}, (1, 1): {4, 5}}
    assert derived.S == {((0, 1), (1, 1)): ((1, 1),)}
    assert derived.V_P == {((0, 1), (1, 1)): {4, 5}}
    assert derived.owner_of(4) == (1, 1)
    assert derived.owner_of(1) is None


def test_fig2_decomposition_parses_as_built(fig2):
    assert fig2.decomposition == fig2_decomposition()
    assert fig2.decomposition.s == 2
    assert fig2.decomposition.d == 1
    assert fig2.decomposition.widths == {0: 1, 1: 1}


def test_fig2_passes_every_condition(fig2):
    report = verify_oic(fig2.instance.graph, fig2.decomposition)
    assert report.passed
    assert [c.name for c in report.conditions] == [
        "condition_1", "condition_2", "condition_3", "condition_4"]
    assert check_conditions(fig2.instance.graph, fig2.decomposition).to_dict() == report.to_dict()


def test_root_x4_descends_into_the_child(fig2):
    g = fig2.instance.graph
    tree = build_tree_oic(g, fig2.decomposition, derive_sets(g, fig2.decomposition), 3)
    assert tree.node == (0, 1)
    assert tree.contributing == ((0, 1), (1, 1))
    assert tree.t == 2
    assert tree.target_set == {0, 3, 4, 5}
    assert tree.tree.parent == {1: 3, 0: 1, 4: 3, 5: 3}
    assert [b.mode for b in tree.branches] == [MODE_VP]


def test_root_x1_stops_at_the_shared_vertex(fig2):
    g = fig2.instance.graph
    tree = build_tree_oic(g, fig2.decomposition, derive_sets(g, fig2.decomposition), 0)
    assert tree.contributing == ((0, 1),)
    assert tree.target_set == {0, 2, 3}
    assert tree.branches[0].mode == MODE_SHARED
    assert tree.branches[0].targets == (2,)


def test_root_in_a_leaf_node_uses_only_its_node(fig2):
    g = fig2.instance.graph
    tree = build_tree_oic(g, fig2.decomposition, derive_sets(g, fig2.decomposition), 4)
    assert tree.contributing == ((1, 1),)
    assert tree.leaves == {2, 5}
    assert tree.branches == ()


def test_non_inner_root_is_rejected(fig2):
    g = fig2.instance.graph
    with pytest.raises(InputFormatError):
        build_tree_oic(g, fig2.decomposition, derive_sets(g, fig2.decomposition), 1)


def test_branch_modes_of_fig351(fixture_cache):
    fixture = fixture_cache("fig351")
    report = verify_oic(fixture.instance.graph, fixture.decomposition)
    records = report.branches_for(4)
    assert len(records) == len(fixture.branches)
    for record, expected in zip(records, fixture.branches):
        assert list(record.parent) == expected["parent"]
        assert list(record.child) == expected["child"]
        assert record.mode == expected["mode"]
        assert record.terminal_depth == expected["terminal_depth"]
        if "targets" in expected:
            assert list(record.targets) == expected["targets"]


@pytest.mark.parametrize("name", ["fig3", "fig31", "fig39", "fig311"])
def test_multi_node_fixtures_verify(fixture_cache, name):
    fixture = fixture_cache(name)
    assert verify_oic(fixture.instance.graph, fixture.decomposition).passed


def test_undersized_node_fails_condition_1(fig2):
    decomp = PolytreeDecomposition.build({(0, 1): [2], (1, 1): [2, 4, 5]}, [((0, 1), (1, 1), 2)])
    report = verify_oic(fig2.instance.graph, decomp)
    assert "must exceed" in report.condition("condition_1").message
    assert report.condition("condition_1").witness.nodes == ((0, 1),)
    assert "not evaluated" in report.condition("condition_2").message


def test_structural_problems_name_the_nodes():
    skipped_level = PolytreeDecomposition.build({(0, 1): [0, 1], (2, 1): [1, 2]}, [((0, 1), (2, 1), 1)])
    assert any("one level below" in m for m, _ in structural_problems(skipped_level))

    wrong_shared = PolytreeDecomposition.build({(0, 1): [0, 1], (1, 1): [1, 2]}, [((0, 1), (1, 1), 0)])
    message, nodes = structural_problems(wrong_shared)[0]
    assert "instead of exactly x_1" in message
    assert nodes == ((0, 1), (1, 1))

    disconnected = PolytreeDecomposition.build({(0, 1): [0, 1], (0, 2): [2, 3]})
    assert any("polytree" in m for m, _ in structural_problems(disconnected))

    floating = PolytreeDecomposition.build({(1, 1): [0, 1]})
    assert any("depth 0" in m for m, _ in structural_problems(floating))

    cousins = PolytreeDecomposition.build(
        {(0, 1): [0, 1, 2], (1, 1): [2, 3, 4], (1, 2): [1, 4, 5]},
        [((0, 1), (1, 1), 2), ((0, 1), (1, 2), 1)])
    assert any("unconnected" in m for m, _ in structural_problems(cousins))


def test_structural_problem_with_graph_range(fig2):
    decomp = PolytreeDecomposition.build({(0, 1): [0, 9]})
    assert "outside the graph" in structural_problems(decomp, fig2.instance.graph)[0][0]
    with pytest.raises(StructureError):
        derive_sets(fig2.instance.graph, decomp)


def test_decomposition_model_rejects_bad_keys():
    with pytest.raises(InputFormatError):
        PolytreeDecomposition.build({(0, 0): [0]})
    with pytest.raises(InputFormatError):
        PolytreeDecomposition.build({(0, 1): [0, 1]}, [((0, 1), (1, 1), 0)])
    with pytest.raises(InputFormatError):
        PolytreeDecomposition.build({(0, 1): [0, 1]}, [((0, 1), (0, 1), 0)])
    with pytest.raises(InputFormatError):
        PolytreeDecomposition(())


def test_missing_i_path_fails_condition_2(fig2):
    g = Digraph.from_edges(6, [e for e in fig2.instance.graph.edges if e != (5, 4)])
    report = verify_oic(g, fig2.decomposition)
    assert report.failed_conditions == ["condition_2"]
    assert report.condition("condition_2").message == "no I-path from x_6 to x_5"


def test_cycle_leaving_the_home_nodes_fails_condition_3(fig2):
    g = fig2.instance.graph.with_edges([(0, 4), (4, 1)])
    result = verify_oic(g, fig2.decomposition).condition("condition_3")
    assert not result.passed
    assert result.witness.vertices == (0, 4, 1)


def test_non_inner_cycle_fails_condition_3(fig2):
    edges = list(fig2.instance.graph.edges) + [(1, 6), (6, 1)]
    report = verify_oic(Digraph.from_edges(7, edges), fig2.decomposition)
    assert not report.condition("condition_3").passed


def test_uncovered_vertex_fails_condition_4(fig2):
    g = Digraph.from_edges(7, fig2.instance.graph.edges)
    report = verify_oic(g, fig2.decomposition)
    assert report.failed_conditions == ["condition_4"]
    assert report.condition("condition_4").witness.vertices == (6,)


def test_terminals_in_two_nodes_fail_condition_4(fig2):
    g = fig2.instance.graph.with_edges([(1, 4)])
    result = verify_oic(g, fig2.decomposition).condition("condition_4")
    assert not result.passed
    assert result.witness.vertices == (1, 0, 4)


def test_tree_closure_flags_extra_out_neighbours(fig2):
    tree = RootedTree(3, {1: 3, 0: 1, 4: 3, 5: 3})
    assert check_tree_closure(fig2.instance.graph, tree) == []
    assert check_tree_closure(fig2.instance.graph.with_edges([(1, 5)]), tree) == [1]


def test_single_node_trees_match_ic_trees(fixture_cache):
    fixture = fixture_cache("example1")
    g = fixture.instance.graph
    decomp = as_decomposition(fixture.inner_set)
    derived = derive_sets(g, decomp)
    for root in fixture.inner_set.sorted():
        assert build_tree_oic(g, decomp, derived, root).tree == build_tree_ic(g, fixture.inner_set, root)


def test_symbol_labels(fig2, fixture_cache):
    assert fig2.decomposition.symbol_label((1, 1)) == "y_I^(1,1)"
    assert fixture_cache("example1").decomposition.symbol_label((0, 1)) == "y_I"


def test_target_sets_count_each_shared_vertex_once(fixture_cache):
    for name in ["fig2", "fig3", "fig351", "fig31", "fig39", "fig311"]:
        fixture = fixture_cache(name)
        g, decomp = fixture.instance.graph, fixture.decomposition
        derived = derive_sets(g, decomp)
        for v in sorted(derived.V_I_total - set().union(*(decomp.parent_shared(k) for k in decomp.keys))):
            tree = build_tree_oic(g, decomp, derived, v)
            union = set().union(*(decomp.vertices_of(k) for k in tree.contributing))
            assert len(tree.target_set) == len(union) - (tree.t - 1)
            assert set(tree.tree.internal_vertices()) <= derived.V_NI
