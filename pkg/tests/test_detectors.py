import random
from itertools import combinations, permutations

import networkx as nx
import pytest

from diperfect.detectors import (
    WitnessKind,
    alpha_and_max_stable_sets,
    find_anti_directed_odd_cycle,
    find_blocking_odd_cycle,
    find_clique_cut,
    find_non_oriented_odd_cycle,
    find_odd_hole_or_antihole,
    in_class_B,
    in_class_D,
    is_anti_directed_cycle,
    is_blocking_cycle,
    is_clique_cut,
    is_diperfect,
)
from diperfect.digraph import Digraph, is_connected
from diperfect.enumeration import enumerate_digraphs
from diperfect.errors import PreconditionError
from instances import ADC5, ANTI7, BC5, EXT5, TT3


def random_digraph(rng, n, p):
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return Digraph(n, arcs)


def brute_stable(d):
    best, sets = 0, []
    for r in range(d.n, -1, -1):
        for c in combinations(range(d.n), r):
            if all(not d.adjacent(a, b) for a, b in combinations(c, 2)):
                sets.append(frozenset(c))
        if sets:
            return r, sorted(sets, key=lambda s: sum(1 << v for v in s))
    return best, sets


def induces_cycle(d, seq):
    k = len(seq)
    for i, j in combinations(range(k), 2):
        consecutive = j == i + 1 or (i == 0 and j == k - 1)
        if d.adjacent(seq[i], seq[j]) != consecutive:
            return False
    return True


def brute_cycles(d, k):
    for c in combinations(range(d.n), k):
        for rest in permutations(c[1:]):
            seq = (c[0],) + rest
            if induces_cycle(d, seq):
                yield seq


def roles(d, seq):
    cs = set(seq)
    src = {v for v in seq if not any(d.has_arc(u, v) for u in cs)}
    snk = {v for v in seq if not any(d.has_arc(v, u) for u in cs)}
    return src, snk


def brute_has_blocking(d):
    for k in range(3, d.n + 1, 2):
        for seq in brute_cycles(d, k):
            src, snk = roles(d, seq)
            for j in range(k):
                a, b = seq[j], seq[(j + 1) % k]
                if (a in src and b in snk) or (a in snk and b in src):
                    return True
    return False


def brute_has_anti(d):
    for k in range(5, d.n + 1, 2):
        for seq in brute_cycles(d, k):
            src, snk = roles(d, seq)
            both = src | snk
            for start in range(k):
                for step in (1, -1):
                    lab = [seq[(start + step * j) % k] for j in range(k)]
                    pos = {0, 1, 2, 3} | {j - 1 for j in range(2, k + 1, 2)}
                    if all(lab[p] in both for p in pos):
                        return True
    return False


def test_stable_sets_match_brute_force():
    rng = random.Random(1)
    cases = list(enumerate_digraphs(3)) + [random_digraph(rng, rng.randint(1, 9), rng.random())
                                           for _ in range(300)]
    for d in cases:
        assert alpha_and_max_stable_sets(d) == brute_stable(d)


def test_named_witnesses():
    w = find_blocking_odd_cycle(TT3)
    assert w.kind is WitnessKind.TRANSITIVE_TRIANGLE and w.vertices == (0, 1, 2)
    w = find_blocking_odd_cycle(BC5)
    assert w.kind is WitnessKind.BLOCKING and w.vertices == (0, 1, 2, 3, 4)
    assert find_anti_directed_odd_cycle(BC5) is None
    w = find_anti_directed_odd_cycle(ADC5)
    assert w.kind is WitnessKind.ANTI_DIRECTED
    assert is_anti_directed_cycle(ADC5, w.vertices)
    assert find_anti_directed_odd_cycle(ANTI7) is not None
    assert find_blocking_odd_cycle(EXT5) is None and find_anti_directed_odd_cycle(EXT5) is None


def test_witness_labelling_checks():
    assert is_blocking_cycle(TT3, (0, 1, 2))
    assert not is_blocking_cycle(TT3, (1, 2, 0))
    assert not is_blocking_cycle(BC5, (0, 1, 2, 3))
    assert not is_anti_directed_cycle(BC5, (0, 1, 2, 3, 4))


def test_class_membership_matches_brute_force():
    rng = random.Random(2)
    for _ in range(400):
        d = random_digraph(rng, rng.randint(3, 7), rng.uniform(0.15, 0.5))
        assert in_class_D(d) == (not brute_has_blocking(d))
        assert in_class_B(d) == (not brute_has_anti(d))
        assert (find_blocking_odd_cycle(d) is None) == in_class_D(d)
        assert (find_anti_directed_odd_cycle(d) is None) == in_class_B(d)


def test_non_oriented_cycles():
    assert find_non_oriented_odd_cycle(TT3) is None
    assert find_non_oriented_odd_cycle(BC5).vertices == (0, 1, 2, 3, 4)
    c5 = Digraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert find_non_oriented_odd_cycle(c5) is None
    assert find_non_oriented_odd_cycle(Digraph(5, c5.arc_list() + [(1, 0)])) is None
    flipped = Digraph(5, [(1, 0), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert find_non_oriented_odd_cycle(flipped).vertices == (0, 1, 2, 3, 4)
    # triangles are outside the search range
    assert find_non_oriented_odd_cycle(Digraph(3, [(0, 1), (1, 2), (2, 0), (1, 0)])) is None


def test_clique_cut_matches_brute_force():
    assert find_clique_cut(Digraph(3, [(0, 1), (1, 2)])) == {1}
    assert find_clique_cut(BC5) is None
    rng = random.Random(3)
    seen = 0
    while seen < 200:
        d = random_digraph(rng, rng.randint(2, 7), rng.uniform(0.2, 0.6))
        if not is_connected(d):
            with pytest.raises(PreconditionError):
                find_clique_cut(d)
            continue
        seen += 1
        cuts = [set(c) for r in range(1, d.n) for c in combinations(range(d.n), r)
                if is_clique_cut(d, c)]
        got = find_clique_cut(d)
        if not cuts:
            assert got is None
        else:
            assert got is not None and is_clique_cut(d, got)
            assert len(got) == min(len(c) for c in cuts)


def test_perfection_methods_agree_on_graph_atlas():
    for g in nx.graph_atlas_g()[1:]:
        d = Digraph(g.number_of_nodes(), list(g.edges()))
        by_def = is_diperfect(d, "definition")
        assert by_def == is_diperfect(d, "holes")
        assert by_def == (find_odd_hole_or_antihole(d) is None)


def test_perfection_named():
    assert not is_diperfect(BC5)
    assert is_diperfect(TT3)
    c7 = nx.complement(nx.cycle_graph(7))
    w = find_odd_hole_or_antihole(Digraph(7, list(c7.edges())))
    assert w.kind is WitnessKind.ODD_ANTIHOLE
    with pytest.raises(PreconditionError):
        is_diperfect(TT3, "guess")
