import os
import sys

sys.path.append(os.path.abspath(os.path.dirname(__file__)))

import pytest

from src.core.fixture_library import load_fixture
from src.core.graph import Digraph


@pytest.fixture(scope="session")
def fixture_cache():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]

    return get


@pytest.fixture
def fig2_graph():
    return Digraph.from_adjacency(
        {1: [3, 4], 2: [1], 3: [2, 4], 4: [2, 5, 6], 5: [3, 6], 6: [3, 5]}, 6, one_based=True)


@pytest.fixture
def triangle():
    return Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
