from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diperfect.digraph import Digraph, to_mask
from diperfect.errors import InvariantBreach, PreconditionError
from diperfect.matching import (
    BipartiteView,
    Matching,
    constrained_matching,
    deficiency_core,
    has_augmenting_path,
    hall_violator,
    is_matching_of,
    matching_against_stable,
    maximum_matching,
    minimal_violator,
)
from instances import EXT5


def brute_matching_size(view):
    xs, ys = view.xs, view.ys
    best = 0
    for r in range(min(len(xs), len(ys)), 0, -1):
        for chosen in combinations(xs, r):
            for image in permutations(ys, r):
                if all(view.nbr[x] >> y & 1 for x, y in zip(chosen, image)):
                    return r
    return best


@st.composite
def views(draw, max_side=5):
    nx_ = draw(st.integers(0, max_side))
    ny = draw(st.integers(0, max_side))
    xs = list(range(nx_))
    ys = list(range(nx_, nx_ + ny))
    edges = [(x, y) for x in xs for y in ys if draw(st.booleans())]
    return BipartiteView(xs, ys, edges)


@settings(max_examples=300, deadline=None)
@given(views())
def test_maximum_matching_is_maximum(view):
    m = maximum_matching(view)
    assert is_matching_of(view, m)
    assert len(m) == brute_matching_size(view)
    assert not has_augmenting_path(view, m)


@settings(max_examples=200, deadline=None)
@given(views(7))
def test_matching_size_matches_networkx(view):
    g = nx.Graph()
    g.add_nodes_from(view.xs)
    g.add_nodes_from(view.ys)
    g.add_edges_from(tuple(e) for e in view.edges)
    expected = len(nx.bipartite.hopcroft_karp_matching(g, top_nodes=view.xs)) // 2
    assert len(maximum_matching(view)) == expected


@settings(max_examples=300, deadline=None)
@given(views())
def test_hall_violator_iff_deficiency(view):
    w = hall_violator(view)
    coverable = len(maximum_matching(view)) == len(view.xs)
    assert (w is None) == coverable
    if w is not None:
        assert bin(view.neighbours(to_mask(w))).count("1") < len(w)


@settings(max_examples=200, deadline=None)
@given(views(4))
def test_deficiency_core_contract(view):
    core = deficiency_core(view)
    if len(maximum_matching(view)) == len(view.xs):
        assert core is None
        return
    w = minimal_violator(view)
    xp = to_mask(core.xp)
    nx_ = view.neighbours(xp)
    if core.degenerate:
        assert nx_ == 0 and len(core.xp) == 1
        return
    assert core.xp <= w
    assert nx_ == view.neighbours(to_mask(w))
    assert len(core.xp) == bin(nx_).count("1")
    assert core.matching.vertex_mask == xp | nx_


def test_crossing_edges_only():
    with pytest.raises(PreconditionError):
        BipartiteView([0, 1], [2], [(0, 1)])
    with pytest.raises(PreconditionError):
        BipartiteView([0], [0], [])


def test_matching_against_stable_on_extended_cycle():
    s = {0, 1, 3, 4, 5}
    m = matching_against_stable(EXT5, s, {6, 7})
    assert set(m.pairs) == {6, 7}
    assert set(m.pairs.values()) <= {3, 4, 5}
    with pytest.raises(PreconditionError):
        matching_against_stable(EXT5, {0, 1}, {6, 7})
    with pytest.raises(PreconditionError):
        matching_against_stable(EXT5, s, {5, 6})


def test_matching_against_stable_breach_names_rule():
    # on the path 0 -> 1 -> 2 the non-maximum S = {1} cannot absorb both ends
    d = Digraph(3, [(0, 1), (1, 2)])
    with pytest.raises(InvariantBreach) as exc:
        matching_against_stable(d, {1}, {0, 2}, check_maximum=False)
    assert exc.value.rule == "stable-set-matching"


@settings(max_examples=200, deadline=None)
@given(views(4), st.data())
def test_constrained_matching_restriction_is_maximum(view, data):
    if len(maximum_matching(view)) < len(view.xs):
        with pytest.raises(PreconditionError):
            constrained_matching(view, [])
        return
    yp = data.draw(st.sets(st.sampled_from(view.ys))) if view.ys else set()
    m = constrained_matching(view, yp)
    assert is_matching_of(view, m) and len(m) == len(view.xs)
    ypm = to_mask(yp)
    xp = [x for x in view.xs if view.nbr[x] & ypm]
    sub = view.restrict(xp, ypm)
    inside = Matching((x, y) for x, y in m.pairs.items() if x in xp and ypm >> y & 1)
    assert len(inside) == len(maximum_matching(sub))
