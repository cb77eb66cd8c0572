"""Exact detection of stable sets, forbidden induced odd cycles, clique cuts and perfection."""
from __future__ import annotations

from enum import Enum
from typing import NamedTuple

from .digraph import (
    Digraph,
    components_mask,
    iter_bits,
    lowest,
    popcount,
    to_set,
)
from .errors import PreconditionError, SizeBoundError

# Definitional perfection check enumerates all 3^n subset/submask pairs.
PERFECTION_BOUND = 14


class WitnessKind(str, Enum):
    ANTI_DIRECTED = "AntiDirectedOddCycle"
    BLOCKING = "BlockingOddCycle"
    TRANSITIVE_TRIANGLE = "TransitiveTriangle"
    NON_ORIENTED = "NonOrientedOddCycle"
    ODD_HOLE = "OddHole"
    ODD_ANTIHOLE = "OddAntihole"


class ForbiddenWitness(NamedTuple):
    kind: WitnessKind
    vertices: tuple  # cyclic order of the underlying cycle

    def to_json(self):
        return {"kind": self.kind.value, "vertices": list(self.vertices)}


# ---------------------------------------------------------------------------
# maximum stable sets

def _adjacency(d: Digraph) -> list[int]:
    return [d.out[v] | d.inn[v] for v in range(d.n)]


def max_stable_masks(d: Digraph, within: int | None = None) -> tuple[int, list[int]]:
    """All maximum stable sets of ``d[within]`` as masks, ascending.

    Bron-Kerbosch over the complement of U(D) (maximal cliques there are
    maximal stable sets here), pivoting and cutting branches that cannot
    reach the best size found so far.
    """
    full = d.full if within is None else within
    if not full:
        return 0, [0]
    adj = _adjacency(d)
    non = [full & ~adj[v] & ~(1 << v) for v in range(d.n)]
    best = [0]
    found: list[int] = []

    def expand(r, size, p, x):
        if not p:
            if not x:
                if size > best[0]:
                    best[0] = size
                    found.clear()
                if size == best[0]:
                    found.append(r)
            return
        if size + popcount(p) < best[0]:
            return
        pool = p | x
        pivot = max(iter_bits(pool), key=lambda u: popcount(non[u] & p))
        for v in iter_bits(p & ~non[pivot]):
            bit = 1 << v
            expand(r | bit, size + 1, p & non[v], x & non[v])
            p &= ~bit
            x |= bit
            if size + popcount(p) < best[0]:
                return

    expand(0, 0, full, 0)
    return best[0], sorted(found)


def alpha_and_max_stable_sets(d: Digraph) -> tuple[int, list[frozenset]]:
    alpha, masks = max_stable_masks(d)
    return alpha, [to_set(m) for m in masks]


def stability_number(d: Digraph) -> int:
    return max_stable_masks(d)[0]


def is_maximum_stable_mask(d: Digraph, mask: int) -> bool:
    from .digraph import is_stable_mask

    return is_stable_mask(d, mask) and popcount(mask) == max_stable_masks(d)[0]


# ---------------------------------------------------------------------------
# induced cycles

def chordless_cycles(adj: list[int], within: int, min_len: int = 3, parity: int | None = None):
    """Yield every induced cycle of the graph ``adj`` restricted to ``within``.

    Each cycle is produced once as a vertex tuple starting at its least vertex,
    with the second vertex smaller than the last.  ``parity`` (0 or 1) keeps
    only even or odd lengths.
    """
    for s in iter_bits(within):
        allowed = within & ~((1 << (s + 1)) - 1)
        for v1 in iter_bits(adj[s] & allowed):
            # vertices adjacent to s other than v1 may only close the cycle
            yield from _extend(adj, s, [s, v1], 1 << s | 1 << v1, allowed, min_len, parity)


def _extend(adj, s, path, used, allowed, min_len, parity):
    last = path[-1]
    # interior vertices are everything but s and last; a new vertex must avoid them
    interior = used & ~(1 << s) & ~(1 << last)
    for w in iter_bits(adj[last] & allowed & ~used):
        if adj[w] & interior:
            continue
        closes = bool(adj[w] >> s & 1)
        if closes:
            length = len(path) + 1
            if length >= min_len and w > path[1] and (parity is None or length % 2 == parity):
                yield tuple(path) + (w,)
            continue
        # w must not be adjacent to s unless it closes, handled above
        path.append(w)
        yield from _extend(adj, s, path, used | 1 << w, allowed, min_len, parity)
        path.pop()


def _dihedral(cycle):
    k = len(cycle)
    for start in range(k):
        yield tuple(cycle[(start + j) % k] for j in range(k))
        yield tuple(cycle[(start - j) % k] for j in range(k))


def _roles(d: Digraph, cycle) -> tuple[set, set]:
    cmask = 0
    for v in cycle:
        cmask |= 1 << v
    src = {v for v in cycle if not d.inn[v] & cmask}
    snk = {v for v in cycle if not d.out[v] & cmask}
    return src, snk


def _is_blocking_labelling(d, labelled, src, snk):
    return labelled[0] in src and labelled[1] in snk


def _anti_positions(k: int) -> list[int]:
    # zero-based positions x1, x2, x3, x4 and every even-indexed x_j
    pos = {0, 1, 2, 3}
    pos.update(j - 1 for j in range(2, k, 2))
    return sorted(pos)


def _is_anti_labelling(labelled, src, snk):
    both = src | snk
    return all(labelled[p] in both for p in _anti_positions(len(labelled)))


def is_blocking_cycle(d: Digraph, labelled) -> bool:
    """``labelled`` induces an odd cycle with its first vertex a source and second a sink."""
    labelled = tuple(labelled)
    if len(labelled) < 3 or len(labelled) % 2 == 0 or not _induces_cycle(d, labelled):
        return False
    src, snk = _roles(d, labelled)
    return _is_blocking_labelling(d, labelled, src, snk)


def is_anti_directed_cycle(d: Digraph, labelled) -> bool:
    labelled = tuple(labelled)
    if len(labelled) < 5 or len(labelled) % 2 == 0 or not _induces_cycle(d, labelled):
        return False
    src, snk = _roles(d, labelled)
    return _is_anti_labelling(labelled, src, snk)


def _induces_cycle(d: Digraph, seq) -> bool:
    k = len(seq)
    if len(set(seq)) != k or any(not 0 <= v < d.n for v in seq):
        return False
    cmask = 0
    for v in seq:
        cmask |= 1 << v
    for j, v in enumerate(seq):
        want = 1 << seq[j - 1] | 1 << seq[(j + 1) % k]
        if d.adj(v) & cmask != want:
            return False
    return True


def _best_witness(d, kind_for_len, predicate, min_len):
    adj = _adjacency(d)
    best = None
    for cyc in chordless_cycles(adj, d.full, min_len=min_len, parity=1):
        src, snk = _roles(d, cyc)
        for lab in _dihedral(cyc):
            if predicate(lab, src, snk) and (best is None or lab < best):
                best = lab
    if best is None:
        return None
    return ForbiddenWitness(kind_for_len(len(best)), best)


def find_blocking_odd_cycle(d: Digraph) -> ForbiddenWitness | None:
    """Lexicographically least labelling of an induced blocking odd cycle, if any."""
    return _best_witness(
        d,
        lambda k: WitnessKind.TRANSITIVE_TRIANGLE if k == 3 else WitnessKind.BLOCKING,
        lambda lab, src, snk: lab[0] in src and lab[1] in snk,
        3,
    )


def find_anti_directed_odd_cycle(d: Digraph) -> ForbiddenWitness | None:
    return _best_witness(
        d,
        lambda k: WitnessKind.ANTI_DIRECTED,
        _is_anti_labelling,
        5,
    )


def _has_blocking_fast(d: Digraph) -> bool:
    adj = _adjacency(d)
    for cyc in chordless_cycles(adj, d.full, min_len=3, parity=1):
        src, snk = _roles(d, cyc)
        if not src or not snk:
            continue
        k = len(cyc)
        for j in range(k):
            a, b = cyc[j], cyc[(j + 1) % k]
            if (a in src and b in snk) or (b in src and a in snk):
                return True
    return False


def _has_anti_fast(d: Digraph) -> bool:
    adj = _adjacency(d)
    for cyc in chordless_cycles(adj, d.full, min_len=5, parity=1):
        src, snk = _roles(d, cyc)
        if len(src) + len(snk) < 4:
            continue
        for lab in _dihedral(cyc):
            if _is_anti_labelling(lab, src, snk):
                return True
    return False


def in_class_D(d: Digraph) -> bool:
    """No induced blocking odd cycle."""
    return not _has_blocking_fast(d)


def in_class_B(d: Digraph) -> bool:
    """No induced anti-directed odd cycle."""
    return not _has_anti_fast(d)


def is_oriented_cycle(d: Digraph, cyc) -> bool:
    k = len(cyc)
    forward = all(d.has_arc(cyc[j], cyc[(j + 1) % k]) for j in range(k))
    backward = all(d.has_arc(cyc[(j + 1) % k], cyc[j]) for j in range(k))
    return forward or backward


def find_non_oriented_odd_cycle(d: Digraph) -> ForbiddenWitness | None:
    """Lexicographically least induced odd cycle of length at least five that is not a directed cycle."""
    adj = _adjacency(d)
    best = None
    for cyc in chordless_cycles(adj, d.full, min_len=5, parity=1):
        if not is_oriented_cycle(d, cyc) and (best is None or cyc < best):
            best = cyc
    return None if best is None else ForbiddenWitness(WitnessKind.NON_ORIENTED, best)


# ---------------------------------------------------------------------------
# clique cuts

def _cliques_by_size(adj: list[int], within: int):
    level = [(1 << v, v) for v in iter_bits(within)]
    while level:
        yield [m for m, _ in level]
        nxt = []
        for m, top in level:
            common = within
            for v in iter_bits(m):
                common &= adj[v]
            for w in iter_bits(common & ~((1 << (top + 1)) - 1)):
                nxt.append((m | 1 << w, w))
        level = nxt


def find_clique_cut_mask(d: Digraph, within: int | None = None) -> int | None:
    if within is None:
        within = d.full
    if len(components_mask(d, within)) > 1:
        raise PreconditionError("clique-cut search needs a connected digraph")
    adj = _adjacency(d)
    for cliques in _cliques_by_size(adj, within):
        for b in cliques:
            rest = within & ~b
            if rest and len(components_mask(d, rest)) > 1:
                return b
    return None


def find_clique_cut(d: Digraph) -> frozenset | None:
    b = find_clique_cut_mask(d)
    return None if b is None else to_set(b)


def is_clique_cut(d: Digraph, vertices) -> bool:
    b = 0
    for v in vertices:
        b |= 1 << v
    for v in iter_bits(b):
        if (d.adj(v) | 1 << v) & b != b:
            return False
    rest = d.full & ~b
    return bool(rest) and len(components_mask(d, rest)) > 1


# ---------------------------------------------------------------------------
# perfection

def clique_number(adj: list[int], within: int) -> int:
    best = 0

    def grow(size, cand):
        nonlocal best
        if size + popcount(cand) <= best:
            return
        if not cand:
            best = size
            return
        for v in iter_bits(cand):
            grow(size + 1, cand & adj[v])
            cand &= ~(1 << v)
            if size + popcount(cand) <= best:
                return

    grow(0, within)
    return best


def chromatic_number(adj: list[int], within: int) -> int:
    """Fewest stable classes covering ``within``; exact search with a clique lower bound."""
    if not within:
        return 0
    verts = sorted(iter_bits(within), key=lambda v: -popcount(adj[v] & within))
    lower = clique_number(adj, within)
    for k in range(lower, len(verts) + 1):
        if _colourable(adj, verts, k):
            return k
    return len(verts)


def _colourable(adj, verts, k):
    classes = [0] * k

    def place(i, used):
        if i == len(verts):
            return True
        v = verts[i]
        for c in range(min(used + 1, k)):
            if not classes[c] & adj[v]:
                classes[c] |= 1 << v
                if place(i + 1, max(used, c + 1)):
                    return True
                classes[c] &= ~(1 << v)
        return False

    return place(0, 0)


def _perfect_by_definition(adj: list[int], n: int) -> bool:
    """omega == chi on every induced subgraph, via subset dynamic programming."""
    size = 1 << n
    omega = [0] * size
    indep = [False] * size
    indep[0] = True
    for m in range(1, size):
        v = lowest(m)
        rest = m & ~(1 << v)
        omega[m] = max(omega[rest], 1 + omega[rest & adj[v]])
        indep[m] = indep[rest] and not adj[v] & rest
    chi = [0] * size
    for m in range(1, size):
        v = lowest(m)
        rest = m & ~(1 << v)
        best = n
        # stable classes containing the lowest vertex
        sub = rest & ~adj[v]
        s = sub
        while True:
            cls = s | 1 << v
            if indep[cls]:
                c = chi[m & ~cls] + 1
                if c < best:
                    best = c
            if s == 0:
                break
            s = (s - 1) & sub
        chi[m] = best
        if best != omega[m]:
            return False
    return True


def _perfect_by_holes(adj: list[int], n: int) -> bool:
    full = (1 << n) - 1
    for _ in chordless_cycles(adj, full, min_len=5, parity=1):
        return False
    comp = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    for _ in chordless_cycles(comp, full, min_len=5, parity=1):
        return False
    return True


def find_odd_hole_or_antihole(d: Digraph) -> ForbiddenWitness | None:
    adj = _adjacency(d)
    for cyc in chordless_cycles(adj, d.full, min_len=5, parity=1):
        return ForbiddenWitness(WitnessKind.ODD_HOLE, cyc)
    comp = [d.full & ~adj[v] & ~(1 << v) for v in range(d.n)]
    for cyc in chordless_cycles(comp, d.full, min_len=7, parity=1):
        return ForbiddenWitness(WitnessKind.ODD_ANTIHOLE, cyc)
    return None


def is_diperfect(d: Digraph, method: str = "definition") -> bool:
    """Whether U(D) is perfect.

    ``method="definition"`` compares clique and chromatic numbers on every
    induced subgraph; ``method="holes"`` looks for an odd hole or odd antihole.
    """
    adj = _adjacency(d)
    if method == "holes":
        return _perfect_by_holes(adj, d.n)
    if method != "definition":
        raise PreconditionError(f"unknown perfection method {method!r}")
    if d.n > PERFECTION_BOUND:
        raise SizeBoundError(f"definitional perfection check limited to n <= {PERFECTION_BOUND}")
    return _perfect_by_definition(adj, d.n)
