import math
import random

import pytest

from diperfect.digraph import (
    Digraph,
    components_mask,
    distance,
    distance_layers,
    domination_relation,
    induced_subdigraph,
    inverse,
    is_path,
    is_semicomplete,
    is_stable,
    neighborhoods,
    sinks,
    sources,
    to_mask,
    underlying_edges,
    underlying_graph,
)
from diperfect.errors import PreconditionError
from instances import BC5, TT3


def random_digraph(rng, n, p=0.3):
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return Digraph(n, arcs)


def test_construction_rejects_loops_and_range():
    with pytest.raises(PreconditionError):
        Digraph(2, [(0, 0)])
    with pytest.raises(PreconditionError):
        Digraph(2, [(0, 2)])
    with pytest.raises(PreconditionError):
        Digraph(65)


def test_arcs_and_equality():
    d = Digraph(3, [(0, 1), (0, 2), (2, 1), (0, 1)])
    assert d == TT3
    assert hash(d) == hash(TT3)
    assert d.arcs == frozenset({(0, 1), (0, 2), (2, 1)})
    assert d.m == 3


def test_induced_relabels_in_order():
    sub, old_to_new = induced_subdigraph(BC5, {2, 3, 4})
    assert old_to_new == {2: 0, 3: 1, 4: 2}
    assert sub.arcs == {(0, 1), (1, 2), (2, 1)}


def test_underlying_and_inverse():
    assert underlying_edges(BC5) == {frozenset(e) for e in [(0, 1), (1, 2), (2, 3), (0, 4), (3, 4)]}
    u = underlying_graph(TT3)
    assert all(u.has_arc(b, a) for a, b in u.arcs)
    assert inverse(inverse(BC5)) == BC5
    assert inverse(TT3).arcs == {(1, 0), (2, 0), (1, 2)}


def test_neighborhoods_exclude_the_set():
    nb = neighborhoods(TT3, {0, 2})
    assert nb.out == {1}
    assert nb.inn == frozenset()
    assert nb.all == {1}


def test_domination_relations():
    d = Digraph(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert domination_relation(d, {0, 1}, {2, 3}) == (True, True, True)
    d2 = Digraph(4, [(0, 2), (1, 3)])
    r = domination_relation(d2, {0, 1}, {2, 3})
    assert r.arrow is False and r.no_back is True and r.maps_to is False
    d3 = Digraph(3, [(0, 1), (0, 2), (2, 0)])
    assert domination_relation(d3, {0}, {1, 2}) == (True, False, False)
    with pytest.raises(PreconditionError):
        domination_relation(d, {0}, {0, 1})


def test_maps_to_implies_both_parts_on_random_digraphs():
    rng = random.Random(4)
    for _ in range(300):
        d = random_digraph(rng, 6, rng.random())
        xs = set(rng.sample(range(6), 2))
        ys = set(rng.sample(sorted(set(range(6)) - xs), 2))
        r = domination_relation(d, xs, ys)
        assert r.maps_to == (r.arrow and r.no_back)


def test_distance_and_layers():
    path = Digraph(4, [(0, 1), (1, 2), (2, 3)])
    assert distance(path, {0}, {3}) == 3
    assert distance(path, {3}, {0}) == math.inf
    assert distance(path, {1}, {1, 2}) == 0
    assert distance_layers(path, to_mask({0})) == [1, 2, 4, 8]
    with pytest.raises(PreconditionError):
        distance(path, set(), {1})


def test_predicates():
    assert is_semicomplete(TT3)
    assert not is_semicomplete(BC5)
    assert sources(TT3) == {0} and sinks(TT3) == {1}
    assert is_stable(BC5, {1, 3}) and not is_stable(BC5, {3, 4})
    assert is_path(TT3, (0, 2, 1)) and not is_path(TT3, (0, 1, 2))
    assert not is_path(TT3, ())


def test_components_ordered_by_least_vertex():
    d = Digraph(5, [(3, 1), (4, 2)])
    assert components_mask(d) == [0b1, 0b1010, 0b10100]
