from itertools import permutations

from hypothesis.strategies import booleans, composite, integers, lists, sampled_from

from src.core.graph import Digraph
from src.core.instance_generator import OicProfile

SHAPES = [(1,), (1, 1), (1, 2), (2, 1), (1, 1, 1)]


@composite
def digraphs(draw, min_vertices: int = 1, max_vertices: int = 8) -> Digraph:
    K = draw(integers(min_vertices, max_vertices))
    pairs = list(permutations(range(K), 2))
    chosen = draw(lists(booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Digraph.from_edges(K, [pair for pair, keep in zip(pairs, chosen) if keep])


def sized_profile(widths, size: int, non_inner: int, message_bits: int = 1) -> OicProfile:
    return OicProfile(tuple(widths), (size,), non_inner, message_bits)


def profile_vertices(profile: OicProfile) -> int:
    return sum(profile.size_of(p) for p in range(profile.s)) - (profile.s - 1) + profile.non_inner


@composite
def oic_profiles(draw, max_vertices: int = 14, shapes=None) -> OicProfile:
    """Profiles whose nodes all have at least s vertices, so no node is too small."""
    widths = draw(sampled_from(shapes or SHAPES))
    s = sum(widths)
    size = draw(integers(max(2, s), max(2, s) + 1))
    inner = s * size - (s - 1)
    non_inner = draw(integers(0, max(0, min(3, max_vertices - inner))))
    return sized_profile(widths, size, non_inner)
