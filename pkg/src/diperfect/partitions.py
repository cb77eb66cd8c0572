"""Path-partition validation and the exact existence search for S-orthogonal partitions."""
from __future__ import annotations

from enum import Enum
from typing import NamedTuple

from .detectors import max_stable_masks
from .digraph import Digraph, is_stable_mask, iter_bits, lowest, popcount, to_mask, to_set
from .errors import PreconditionError, SizeBoundError

# is_diperfect_property quantifies over all 2^n induced subdigraphs
DIPERFECT_BOUND = 12


class Mode(str, Enum):
    PLAIN = "plain"
    ORTHOGONAL = "orthogonal"
    BE = "be"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("alpha", "orthogonal", "s"):
            return cls.ORTHOGONAL
        if v in ("be", "s_be"):
            return cls.BE
        if v == "plain":
            return cls.PLAIN
        raise PreconditionError(f"unknown mode {value!r}")


class Validation:
    """Outcome of a partition check; falsy when the partition is rejected."""

    __slots__ = ("ok", "reason")

    def __init__(self, ok: bool, reason: str = "ok"):
        self.ok = ok
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"Validation({self.ok}, {self.reason!r})"


def validate(d: Digraph, paths, s=None, mode="plain") -> Validation:
    mode = Mode.parse(mode)
    seen = 0
    for p in paths:
        p = tuple(p)
        if not p:
            return Validation(False, "empty-path")
        for v in p:
            if not 0 <= v < d.n:
                return Validation(False, "vertex-out-of-range")
            if seen >> v & 1:
                return Validation(False, "vertex-repeated")
            seen |= 1 << v
        for a, b in zip(p, p[1:]):
            if not d.has_arc(a, b):
                return Validation(False, "missing-arc")
    if seen != d.full:
        return Validation(False, "not-covering")
    if mode is Mode.PLAIN:
        return Validation(True)
    if s is None:
        return Validation(False, "no-stable-set")
    sm = to_mask(s)
    for p in paths:
        hits = [v for v in p if sm >> v & 1]
        if len(hits) != 1:
            return Validation(False, "not-orthogonal")
        if mode is Mode.BE and hits[0] != p[0] and hits[0] != p[-1]:
            return Validation(False, "stable-vertex-interior")
    return Validation(True)


# ---------------------------------------------------------------------------
# exact search

def _search(d: Digraph, sm: int, be: bool):
    memo: dict[int, object] = {}

    def solve(rest: int):
        if not rest:
            return ()
        hit = memo.get(rest)
        if hit is not None:
            return hit or None
        s_left = rest & sm
        if not s_left:
            memo[rest] = False
            return None
        s = lowest(s_left)
        free = rest & ~sm
        result = None
        only = s_left == 1 << s
        for pmask, path in sorted(_path_sets(d, s, free, be).items(), key=lambda kv: -popcount(kv[0])):
            if only and pmask != rest:
                continue
            sub = solve(rest & ~pmask)
            if sub is not None:
                result = (path,) + sub
                break
        memo[rest] = result if result is not None else False
        return result

    return solve(d.full)


def _be_path_sets(d, s, free):
    """Vertex sets of paths that start or end at ``s``."""
    found = {}
    out, inn = d.out, d.inn
    for nbr, forward in ((out, True), (inn, False)):
        seen = set()
        stack = [(1 << s, (s,))]
        while stack:
            mask, path = stack.pop()
            tip = path[-1] if forward else path[0]
            if (mask, tip) in seen:
                continue
            seen.add((mask, tip))
            if mask not in found:
                found[mask] = path
            for w in iter_bits(nbr[tip] & free & ~mask):
                stack.append((mask | 1 << w, path + (w,) if forward else (w,) + path))
    return found


def find_partition_mask(d: Digraph, sm: int, mode="orthogonal"):
    mode = Mode.parse(mode)
    if mode is Mode.PLAIN:
        raise PreconditionError("the exact search needs orthogonal or BE mode")
    d.check_vertices(sm)
    if not is_stable_mask(d, sm):
        raise PreconditionError("S is not stable")
    if d.n == 0:
        return []
    res = _search(d, sm, mode is Mode.BE)
    return None if res is None else list(res)


def find_partition(d: Digraph, s, mode="orthogonal") -> list[tuple] | None:
    """A partition orthogonal to ``s`` (BE mode: each S vertex at a path end), or ``None``."""
    return find_partition_mask(d, to_mask(s), mode)


def _orth_path_sets(d, s, free):
    found = {}
    out, inn = d.out, d.inn
    seen = set()
    stack = [(1 << s, (s,))]
    while stack:
        mask, path = stack.pop()
        key = (mask, path[0], path[-1])
        if key in seen:
            continue
        seen.add(key)
        if mask not in found:
            found[mask] = path
        for w in iter_bits(out[path[-1]] & free & ~mask):
            stack.append((mask | 1 << w, path + (w,)))
        for w in iter_bits(inn[path[0]] & free & ~mask):
            stack.append((mask | 1 << w, (w,) + path))
    return found


def _path_sets(d, s, free, be):
    """Every vertex set of a path through ``s`` whose other vertices lie in ``free``.

    Maps each vertex set to one path realising it.  With ``be`` the path
    must start or end at ``s``.
    """
    return _be_path_sets(d, s, free) if be else _orth_path_sets(d, s, free)


# ---------------------------------------------------------------------------
# properties

class PropertyVerdict(NamedTuple):
    holds: bool
    failing_stable_set: frozenset | None = None
    failing_subset: frozenset | None = None
    certificates: dict | None = None


def satisfies_property(d: Digraph, mode="alpha", keep_certificates: bool = False) -> PropertyVerdict:
    """Whether every maximum stable set has a matching partition; stops at the first failure."""
    m = Mode.parse(mode)
    _, stables = max_stable_masks(d)
    certs = {} if keep_certificates else None
    for sm in stables:
        part = find_partition_mask(d, sm, m)
        if part is None:
            return PropertyVerdict(False, to_set(sm), None, certs)
        if certs is not None:
            certs[to_set(sm)] = part
    return PropertyVerdict(True, None, None, certs)


def property_mask(d: Digraph, be: bool) -> int | None:
    """Least failing maximum stable set as a mask, or ``None`` if the property holds."""
    _, stables = max_stable_masks(d)
    for sm in stables:
        if _search(d, sm, be) is None and d.n:
            return sm
    return None


def _subsets_by_size(n: int):
    from itertools import combinations

    for size in range(n, -1, -1):
        for combo in combinations(range(n), size):
            yield to_mask(combo)


def is_diperfect_property(d: Digraph, mode="alpha") -> PropertyVerdict:
    """Every induced subdigraph has the property.

    Subsets are scanned by decreasing size, lexicographically within a size;
    the first failing subset and its failing stable set form the witness.
    """
    m = Mode.parse(mode)
    if d.n > DIPERFECT_BOUND:
        raise SizeBoundError(f"hereditary property check limited to n <= {DIPERFECT_BOUND}")
    be = m is Mode.BE
    for xm in _subsets_by_size(d.n):
        sub, labels = d.induced(xm)
        bad = property_mask(sub, be)
        if bad is not None:
            return PropertyVerdict(False, frozenset(labels[v] for v in iter_bits(bad)), to_set(xm))
    return PropertyVerdict(True)
