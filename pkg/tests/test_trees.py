import pytest

from src.core.errors import StructureError
from src.core.graph import Digraph
from src.core.trees import RootedTree, tree_from_paths


def test_union_of_paths_forms_a_tree():
    tree = tree_from_paths(0, [(0, 3, 1), (0, 2)])
    assert tree.parent == {3: 0, 1: 3, 2: 0}
    assert tree.vertices == {0, 1, 2, 3}
    assert tree.leaves == {1, 2}
    assert tree.internal_vertices() == [3]
    assert tree.children(0) == {2, 3}
    assert tree.depth(1) == 2


def test_shared_prefixes_are_merged():
    tree = tree_from_paths(0, [(0, 4, 1), (0, 4, 2)])
    assert tree.edges == [(0, 4), (4, 1), (4, 2)]


def test_two_parents_for_one_vertex_is_rejected():
    with pytest.raises(StructureError) as caught:
        tree_from_paths(0, [(0, 1, 3), (0, 2, 3)])
    assert caught.value.nodes == (3, 1, 2)


def test_path_must_start_at_root():
    with pytest.raises(StructureError):
        tree_from_paths(0, [(1, 2)])


def test_depth_of_missing_vertex():
    with pytest.raises(KeyError):
        RootedTree(0, {1: 0}).depth(5)


def test_subgraph_check():
    g = Digraph.from_edges(3, [(0, 1), (1, 2)])
    assert RootedTree(0, {1: 0, 2: 1}).is_subgraph_of(g)
    assert not RootedTree(0, {2: 0}).is_subgraph_of(g)


def test_to_dict_lists_sorted_edges():
    assert RootedTree(0, {2: 0, 1: 0}).to_dict() == {"root": 0, "edges": [[0, 1], [0, 2]]}
