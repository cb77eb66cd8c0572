"""Bipartite matchings, Hall violators and the matching constructions used by the reductions."""
from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import NamedTuple

from .digraph import Digraph, iter_bits, is_stable_mask, nbrs, popcount, to_mask, to_set
from .errors import InvariantBreach, PreconditionError


class BipartiteView:
    """Edges between two disjoint vertex sets ``X`` and ``Y``.

    ``nbr[x]`` is the bitmask of ``Y`` vertices adjacent to ``x``.  Vertex
    labels are whatever the caller uses (typically digraph vertices).
    """

    __slots__ = ("xs", "ys", "nbr")

    def __init__(self, xs, ys, edges=()):
        self.xs = tuple(sorted(xs))
        self.ys = tuple(sorted(ys))
        if set(self.xs) & set(self.ys):
            raise PreconditionError("bipartition sides must be disjoint")
        xset, yset = set(self.xs), set(self.ys)
        nbr = {x: 0 for x in self.xs}
        for a, b in edges:
            if a in xset and b in yset:
                nbr[a] |= 1 << b
            elif b in xset and a in yset:
                nbr[b] |= 1 << a
            else:
                raise PreconditionError(f"edge {{{a},{b}}} does not cross the bipartition")
        self.nbr = nbr

    @classmethod
    def from_digraph(cls, d: Digraph, xs, ys) -> "BipartiteView":
        """Underlying adjacency of ``d`` between ``xs`` and ``ys`` only."""
        xm, ym = to_mask(xs), to_mask(ys)
        if xm & ym:
            raise PreconditionError("bipartition sides must be disjoint")
        view = cls.__new__(cls)
        view.xs = tuple(iter_bits(xm))
        view.ys = tuple(iter_bits(ym))
        view.nbr = {x: d.adj(x) & ym for x in view.xs}
        return view

    @property
    def x_mask(self) -> int:
        return to_mask(self.xs)

    @property
    def y_mask(self) -> int:
        return to_mask(self.ys)

    @property
    def edges(self) -> frozenset:
        return frozenset(frozenset((x, y)) for x in self.xs for y in iter_bits(self.nbr[x]))

    def neighbours(self, xmask: int) -> int:
        r = 0
        for x in iter_bits(xmask):
            r |= self.nbr[x]
        return r

    def restrict(self, xs, ys) -> "BipartiteView":
        xm, ym = to_mask(xs), to_mask(ys)
        view = BipartiteView.__new__(BipartiteView)
        view.xs = tuple(x for x in self.xs if xm >> x & 1)
        view.ys = tuple(y for y in self.ys if ym >> y & 1)
        view.nbr = {x: self.nbr[x] & ym for x in view.xs}
        return view


class Matching:
    """A matching stored as ``x -> y`` pairs with ``x`` on the view's X side."""

    __slots__ = ("pairs",)

    def __init__(self, pairs=()):
        self.pairs = dict(sorted(pairs))

    @property
    def edges(self) -> frozenset:
        return frozenset(frozenset(p) for p in self.pairs.items())

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.pairs) | frozenset(self.pairs.values())

    @property
    def vertex_mask(self) -> int:
        return to_mask(self.pairs) | to_mask(self.pairs.values())

    def mate_of_y(self) -> dict:
        return {y: x for x, y in self.pairs.items()}

    def covers(self, vertices) -> bool:
        return to_mask(vertices) & ~self.vertex_mask == 0

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        return isinstance(other, Matching) and self.pairs == other.pairs

    def __repr__(self):
        return f"Matching({sorted(self.pairs.items())})"


def is_matching_of(view: BipartiteView, m: Matching) -> bool:
    seen_y = set()
    for x, y in m.pairs.items():
        if x not in view.nbr or not view.nbr[x] >> y & 1 or y in seen_y:
            return False
        seen_y.add(y)
    return True


def _augmenting_path(view: BipartiteView, mate_x: dict, mate_y: dict, root):
    """Shortest alternating path from the uncovered ``root`` to an uncovered Y vertex.

    Breadth-first with neighbours scanned in increasing order.  Returns the
    path as ``[x0, y0, x1, y1, ...]`` or ``None`` together with the X vertices
    reached.
    """
    parent_y = {}
    reached_x = [root]
    seen_y = 0
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in iter_bits(view.nbr[x] & ~seen_y):
            seen_y |= 1 << y
            parent_y[y] = x
            nx = mate_y.get(y)
            if nx is None:
                path = [y]
                while True:
                    px = parent_y[path[-1]]
                    path.append(px)
                    if px == root:
                        break
                    path.append(mate_x[px])
                path.reverse()
                return path, reached_x
            reached_x.append(nx)
            queue.append(nx)
    return None, reached_x


def _flip(mate_x, mate_y, path):
    for j in range(0, len(path), 2):
        x, y = path[j], path[j + 1]
        mate_x[x] = y
        mate_y[y] = x


def _maximum(view: BipartiteView, seed: Matching | None = None):
    mate_x = dict(seed.pairs) if seed else {}
    mate_y = {y: x for x, y in mate_x.items()}
    failed_root = None
    failed_reach = None
    for x in view.xs:
        if x in mate_x:
            continue
        path, reached = _augmenting_path(view, mate_x, mate_y, x)
        if path is None:
            if failed_root is None:
                failed_root, failed_reach = x, reached
            continue
        _flip(mate_x, mate_y, path)
    return mate_x, mate_y, failed_reach


def maximum_matching(view: BipartiteView) -> Matching:
    """Maximum-cardinality matching by repeated augmentation from the lowest uncovered X vertex."""
    mate_x, _, _ = _maximum(view)
    return Matching(mate_x.items())


def has_augmenting_path(view: BipartiteView, m: Matching) -> bool:
    mate_x = dict(m.pairs)
    mate_y = {y: x for x, y in mate_x.items()}
    for x in view.xs:
        if x not in mate_x and _augmenting_path(view, mate_x, mate_y, x)[0] is not None:
            return True
    return False


def hall_violator(view: BipartiteView) -> frozenset | None:
    """A set ``W`` of X vertices with fewer neighbours than members, or ``None`` if X is coverable.

    ``W`` is everything reachable by alternating paths from the first X
    vertex that the maximum matching leaves uncovered.
    """
    _, _, reach = _maximum(view)
    return None if reach is None else frozenset(reach)


def covers_side(view: BipartiteView) -> bool:
    return len(maximum_matching(view)) == len(view.xs)


class DeficiencyCore(NamedTuple):
    xp: frozenset
    matching: Matching
    degenerate: bool


def minimal_violator(view: BipartiteView) -> frozenset | None:
    """Smallest Hall violator, ties broken lexicographically."""
    xs = view.xs
    for size in range(1, len(xs) + 1):
        for combo in combinations(xs, size):
            m = to_mask(combo)
            if popcount(view.neighbours(m)) < size:
                return frozenset(combo)
    return None


def deficiency_core(view: BipartiteView) -> DeficiencyCore | None:
    """Subset ``X'`` of X together with a matching of ``G[X' ∪ N(X')]`` covering ``N(X')``.

    ``|X'| == |N(X')|`` holds.  When the minimal violator has no neighbours
    at all (an isolated X vertex) there is no non-empty such ``X'``; the
    violator itself is returned with an empty matching and ``degenerate``
    set.
    """
    if covers_side(view):
        return None
    w = minimal_violator(view)
    if w is None:
        raise InvariantBreach("hall", "uncoverable side without a Hall violator")
    wmask = to_mask(w)
    nw = view.neighbours(wmask)
    if not nw:
        return DeficiencyCore(w, Matching(), True)
    size = popcount(nw)
    for combo in combinations(sorted(w), size):
        xp = to_mask(combo)
        sub = view.restrict(xp, view.neighbours(xp))
        m = maximum_matching(sub)
        if len(m) == size and view.neighbours(xp) == nw:
            return DeficiencyCore(frozenset(combo), m, False)
    raise InvariantBreach("minimal-violator", "no subset of a minimal violator covers its neighbourhood")


def matching_against_stable(d: Digraph, s, x, check_maximum: bool = True) -> Matching:
    """Matching between stable ``x`` (disjoint from ``s``) and ``N(x) ∩ s`` covering ``x``.

    Such a matching always exists when ``s`` is a maximum stable set; not
    finding one is reported as an invariant breach.
    """
    from .detectors import max_stable_masks

    sm, xm = to_mask(s), to_mask(x)
    d.check_vertices(sm | xm)
    if not is_stable_mask(d, sm):
        raise PreconditionError("S is not stable")
    if check_maximum and popcount(sm) != max_stable_masks(d)[0]:
        raise PreconditionError("S is not a maximum stable set")
    if not is_stable_mask(d, xm):
        raise PreconditionError("X is not stable")
    if sm & xm:
        raise PreconditionError("X meets S")
    view = BipartiteView.from_digraph(d, xm, nbrs(d, xm) & sm)
    m = maximum_matching(view)
    if len(m) != popcount(xm):
        raise InvariantBreach(
            "stable-set-matching",
            f"no matching of {sorted(to_set(xm))} into the maximum stable set {sorted(to_set(sm))}",
        )
    return m


def constrained_matching(view: BipartiteView, yp) -> Matching:
    """X-covering matching whose restriction to ``G[N(Yp) ∪ Yp]`` is maximum there.

    Starts from any X-covering matching and repeatedly augments inside the
    subview, dropping the edge that the newly matched X vertex used before.
    """
    ypm = to_mask(yp)
    if ypm & ~view.y_mask:
        raise PreconditionError("Yp must lie in Y")
    mate_x, mate_y, reach = _maximum(view)
    if reach is not None:
        raise PreconditionError("no matching covers X")
    xpm = _x_nbrs(view, ypm)
    sub = view.restrict(xpm, ypm)
    while True:
        inside = {x: y for x, y in mate_x.items() if xpm >> x & 1 and ypm >> y & 1}
        in_y = {y: x for x, y in inside.items()}
        path = None
        for x in sub.xs:
            if x in inside:
                continue
            path, _ = _augmenting_path(sub, inside, in_y, x)
            if path is not None:
                break
        if path is None:
            return Matching(mate_x.items())
        start = path[0]
        # the start is covered outside the subview; that edge is dropped
        old = mate_x.get(start)
        if old is not None and mate_y.get(old) == start:
            del mate_y[old]
        _flip(mate_x, mate_y, path)


def _x_nbrs(view: BipartiteView, ymask: int) -> int:
    r = 0
    for x in view.xs:
        if view.nbr[x] & ymask:
            r |= 1 << x
    return r
