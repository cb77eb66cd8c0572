"""Finite loop-free digraphs on the vertices ``0..n-1``.

Vertex sets are handled two ways: public functions take any iterable of
vertices and hand back ``frozenset``; the hot internals work on plain ``int``
bitmasks (bit ``v`` set means vertex ``v`` is a member).
"""
from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Iterator, NamedTuple

from .errors import PreconditionError, SizeBoundError

MAX_VERTICES = 64


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def to_mask(vertices) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_set(mask: int) -> frozenset:
    return frozenset(iter_bits(mask))


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Digraph:
    """Immutable digraph with per-vertex out/in neighbour bitmasks.

    Digons are two opposite arcs; there is no separate digon type.
    """

    __slots__ = ("n", "out", "inn", "_hash")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise PreconditionError("vertex count must be non-negative")
        if n > MAX_VERTICES:
            raise SizeBoundError(f"n={n} exceeds the {MAX_VERTICES}-vertex bound")
        out = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"arc ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            out[u] |= 1 << v
        self._set(n, tuple(out))

    def _set(self, n, out):
        inn = [0] * n
        for u in range(n):
            for v in iter_bits(out[u]):
                inn[v] |= 1 << u
        self.n = n
        self.out = out
        self.inn = tuple(inn)
        self._hash = None

    @classmethod
    def from_masks(cls, n: int, out) -> "Digraph":
        d = cls.__new__(cls)
        d._set(n, tuple(out))
        return d

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def arcs(self) -> frozenset:
        return frozenset((u, v) for u in range(self.n) for v in iter_bits(self.out[u]))

    def arc_list(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    @property
    def m(self) -> int:
        return sum(popcount(o) for o in self.out)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def adj(self, v: int) -> int:
        return self.out[v] | self.inn[v]

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.out[u] | self.inn[u]) >> v & 1)

    def check_vertices(self, mask: int) -> None:
        if mask >> self.n:
            raise PreconditionError(f"vertex set {sorted(to_set(mask))} leaves the range 0..{self.n - 1}")

    def induced(self, mask: int) -> tuple["Digraph", tuple[int, ...]]:
        """Induced subdigraph on ``mask``, relabelled densely.

        Returns the subdigraph and ``labels`` with ``labels[new] == old``.
        """
        self.check_vertices(mask)
        labels = tuple(iter_bits(mask))
        index = {old: new for new, old in enumerate(labels)}
        out = []
        for old in labels:
            o = 0
            for w in iter_bits(self.out[old] & mask):
                o |= 1 << index[w]
            out.append(o)
        return Digraph.from_masks(len(labels), out), labels

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.out == other.out

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.out))
        return self._hash

    def __repr__(self):
        return f"Digraph({self.n}, {self.arc_list()})"


# ---------------------------------------------------------------------------
# neighbourhoods over bitmasks

def out_nbrs(d: Digraph, mask: int) -> int:
    """N^+(mask): vertices outside ``mask`` dominated by some member."""
    r = 0
    for v in iter_bits(mask):
        r |= d.out[v]
    return r & ~mask


def in_nbrs(d: Digraph, mask: int) -> int:
    r = 0
    for v in iter_bits(mask):
        r |= d.inn[v]
    return r & ~mask


def nbrs(d: Digraph, mask: int) -> int:
    r = 0
    for v in iter_bits(mask):
        r |= d.out[v] | d.inn[v]
    return r & ~mask


def is_stable_mask(d: Digraph, mask: int) -> bool:
    for v in iter_bits(mask):
        if (d.out[v] | d.inn[v]) & mask:
            return False
    return True


def arrow_mask(d: Digraph, xm: int, ym: int) -> bool:
    """Every member of ``xm`` dominates every member of ``ym``."""
    return all(d.out[x] & ym == ym for x in iter_bits(xm))


def no_back_mask(d: Digraph, xm: int, ym: int) -> bool:
    """No arc goes from ``ym`` into ``xm``."""
    return all(not d.out[y] & xm for y in iter_bits(ym))


def maps_to_mask(d: Digraph, xm: int, ym: int) -> bool:
    return arrow_mask(d, xm, ym) and no_back_mask(d, xm, ym)


def components_mask(d: Digraph, mask: int | None = None) -> list[int]:
    """Connected components of the underlying graph of ``d[mask]``, ordered by least vertex."""
    if mask is None:
        mask = d.full
    comps = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            for v in iter_bits(frontier):
                grow |= d.out[v] | d.inn[v]
            grow &= rest & ~comp
            comp |= grow
            frontier = grow
        comps.append(comp)
        rest &= ~comp
    return comps


def is_connected(d: Digraph) -> bool:
    return len(components_mask(d)) <= 1


def is_bipartite_mask(d: Digraph, mask: int | None = None) -> bool:
    """Two-colourability of the underlying graph restricted to ``mask``."""
    if mask is None:
        mask = d.full
    side = {}
    for comp in components_mask(d, mask):
        start = lowest(comp)
        side[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in iter_bits((d.out[v] | d.inn[v]) & mask):
                if w not in side:
                    side[w] = side[v] ^ 1
                    queue.append(w)
                elif side[w] == side[v]:
                    return False
    return True


def bipartition_mask(d: Digraph, mask: int) -> tuple[int, int] | None:
    """Colour classes of ``U(d[mask])``; the class holding the least vertex of each component comes first."""
    a = b = 0
    for comp in components_mask(d, mask):
        start = lowest(comp)
        colour = {start: 0}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in iter_bits((d.out[v] | d.inn[v]) & mask):
                if w not in colour:
                    colour[w] = colour[v] ^ 1
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return None
        for v, c in colour.items():
            if c == 0:
                a |= 1 << v
            else:
                b |= 1 << v
    return a, b


# ---------------------------------------------------------------------------
# public operations

def induced_subdigraph(d: Digraph, vertices) -> tuple[Digraph, dict[int, int]]:
    """``D[X]`` relabelled to ``0..|X|-1`` plus the old-to-new vertex map."""
    sub, labels = d.induced(to_mask(vertices))
    return sub, {old: new for new, old in enumerate(labels)}


def underlying_graph(d: Digraph) -> Digraph:
    """``U(D)`` as a symmetric digraph: one digon per adjacent pair."""
    return Digraph.from_masks(d.n, [d.out[v] | d.inn[v] for v in range(d.n)])


def underlying_edges(d: Digraph) -> frozenset:
    return frozenset(
        frozenset((u, v)) for u in range(d.n) for v in iter_bits(d.adj(u)) if u < v
    )


def inverse(d: Digraph) -> Digraph:
    return Digraph.from_masks(d.n, d.inn)


class Neighborhoods(NamedTuple):
    inn: frozenset
    out: frozenset
    all: frozenset


def neighborhoods(d: Digraph, vertices) -> Neighborhoods:
    xm = to_mask(vertices)
    d.check_vertices(xm)
    i, o = in_nbrs(d, xm), out_nbrs(d, xm)
    return Neighborhoods(to_set(i), to_set(o), to_set(i | o))


class Domination(NamedTuple):
    arrow: bool
    no_back: bool
    maps_to: bool


def domination_relation(d: Digraph, xs, ys) -> Domination:
    """Evaluate ``X -> Y``, ``X => Y`` and ``X |-> Y`` for disjoint ``X``, ``Y``."""
    xm, ym = to_mask(xs), to_mask(ys)
    if xm & ym:
        raise PreconditionError("domination relation needs disjoint sets")
    a = arrow_mask(d, xm, ym)
    nb = no_back_mask(d, xm, ym)
    return Domination(a, nb, a and nb)


def distance(d: Digraph, xs, ys) -> float:
    """Shortest directed distance from some vertex of ``xs`` to some vertex of ``ys``.

    Returns ``math.inf`` when ``ys`` cannot be reached.
    """
    xm, ym = to_mask(xs), to_mask(ys)
    if not xm or not ym:
        raise PreconditionError("distance needs non-empty vertex sets")
    seen = xm
    frontier = xm
    dist = 0
    while frontier:
        if frontier & ym:
            return dist
        frontier = out_nbrs(d, frontier) & ~seen
        seen |= frontier
        dist += 1
    return math.inf


def distance_layers(d: Digraph, source_mask: int) -> list[int]:
    """Masks ``[N_0, N_1, ...]`` of vertices at each directed distance from ``source_mask``."""
    layers = [source_mask]
    seen = source_mask
    frontier = source_mask
    while True:
        frontier = out_nbrs(d, frontier) & ~seen
        if not frontier:
            return layers
        layers.append(frontier)
        seen |= frontier


def is_semicomplete(d: Digraph) -> bool:
    full = d.full
    return all(d.adj(v) | (1 << v) == full for v in range(d.n))


def sources(d: Digraph) -> frozenset:
    return frozenset(v for v in range(d.n) if not d.inn[v])


def sinks(d: Digraph) -> frozenset:
    return frozenset(v for v in range(d.n) if not d.out[v])


def is_stable(d: Digraph, vertices) -> bool:
    return is_stable_mask(d, to_mask(vertices))


def is_path(d: Digraph, seq) -> bool:
    seq = tuple(seq)
    if not seq or len(set(seq)) != len(seq):
        return False
    if any(not 0 <= v < d.n for v in seq):
        return False
    return all(d.has_arc(a, b) for a, b in zip(seq, seq[1:]))
