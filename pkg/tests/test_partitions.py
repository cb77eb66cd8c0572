import random
from itertools import permutations

import pytest

from diperfect.detectors import max_stable_masks
from diperfect.digraph import Digraph, to_set
from diperfect.errors import PreconditionError, SizeBoundError
from diperfect.partitions import (
    Mode,
    find_partition,
    is_diperfect_property,
    satisfies_property,
    validate,
)
from instances import ADC5, BC5, EXT5, TT3


def brute_partition_exists(d, s, be):
    for perm in permutations(range(d.n)):
        for cuts in range(1 << (d.n - 1)):
            paths, cur = [], [perm[0]]
            for j in range(1, d.n):
                if cuts >> (j - 1) & 1:
                    paths.append(cur)
                    cur = [perm[j]]
                else:
                    cur.append(perm[j])
            paths.append(cur)
            if validate(d, paths, s, Mode.BE if be else Mode.ORTHOGONAL):
                return True
    return False


def test_validate_reasons():
    assert validate(TT3, [(0, 2, 1)]).ok
    assert validate(TT3, [(0, 2), ()]).reason == "empty-path"
    assert validate(TT3, [(0, 3), (1,)]).reason == "vertex-out-of-range"
    assert validate(TT3, [(0, 2), (2, 1)]).reason == "vertex-repeated"
    assert validate(TT3, [(0, 1, 2)]).reason == "missing-arc"
    assert validate(TT3, [(0, 2)]).reason == "not-covering"
    assert validate(TT3, [(0, 2, 1)], mode="alpha").reason == "no-stable-set"
    assert validate(TT3, [(0, 2), (1,)], {2}, "alpha").reason == "not-orthogonal"
    assert validate(TT3, [(0, 2, 1)], {2}, "alpha").ok
    assert validate(TT3, [(0, 2, 1)], {2}, "be").reason == "stable-vertex-interior"


def test_mode_parsing():
    assert Mode.parse("alpha") is Mode.ORTHOGONAL
    assert Mode.parse("BE") is Mode.BE
    with pytest.raises(PreconditionError):
        Mode.parse("orthogonal-ish")


def test_named_properties():
    assert satisfies_property(TT3, "alpha").holds
    v = satisfies_property(TT3, "be")
    assert not v.holds and v.failing_stable_set == {2}
    v = satisfies_property(ADC5, "alpha")
    assert not v.holds and v.failing_stable_set == {1, 3}
    v = satisfies_property(BC5, "be")
    assert not v.holds and v.failing_stable_set == {0, 3}
    assert satisfies_property(BC5, "alpha").holds


def test_bc5_partitions():
    p = find_partition(BC5, {1, 3}, "be")
    assert validate(BC5, p, {1, 3}, "be")
    p = find_partition(BC5, {1, 4}, "be")
    assert validate(BC5, p, {1, 4}, "be")
    assert find_partition(BC5, {0, 3}, "be") is None
    assert find_partition(BC5, {2, 4}, "be") is None


def test_extended_cycle_property():
    alpha, stables = max_stable_masks(EXT5)
    assert alpha == 5 and [to_set(m) for m in stables] == [{0, 1, 3, 4, 5}]
    v = satisfies_property(EXT5, "be", keep_certificates=True)
    assert v.holds
    [(s, paths)] = v.certificates.items()
    assert validate(EXT5, paths, s, "be")


def test_exact_search_matches_brute_force():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 5)
        d = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.35])
        for sm in max_stable_masks(d)[1]:
            s = to_set(sm)
            for be in (False, True):
                got = find_partition(d, s, "be" if be else "alpha")
                assert (got is not None) == brute_partition_exists(d, s, be)
                if got is not None:
                    assert validate(d, got, s, "be" if be else "alpha")


def test_search_rejects_unstable_set():
    with pytest.raises(PreconditionError):
        find_partition(TT3, {0, 1}, "alpha")
    with pytest.raises(PreconditionError):
        find_partition(TT3, {1}, "plain")


def test_diperfect_property_witness_order():
    v = is_diperfect_property(TT3, "be")
    assert not v.holds and v.failing_subset == {0, 1, 2} and v.failing_stable_set == {2}
    assert is_diperfect_property(TT3, "alpha").holds
    # BC5 itself fails, so the whole vertex set is the first failing subset
    v = is_diperfect_property(BC5, "be")
    assert v.failing_subset == {0, 1, 2, 3, 4} and v.failing_stable_set == {0, 3}
    # TT3 on 1, 2, 3 with middle vertex 3, plus isolated 0; witness keeps original labels
    d = Digraph(4, [(1, 2), (1, 3), (3, 2)])
    v = is_diperfect_property(d, "be")
    assert v.failing_subset == {0, 1, 2, 3} and v.failing_stable_set == {0, 3}
    with pytest.raises(SizeBoundError):
        is_diperfect_property(Digraph(13), "be")
