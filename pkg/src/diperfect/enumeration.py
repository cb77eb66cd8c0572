"""Labelled and isomorphism-reduced enumeration of small digraphs."""
from __future__ import annotations

from itertools import permutations

from .digraph import Digraph, iter_bits
from .errors import SizeBoundError

LABELLED_BOUND = 7


def pair_list(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def labelled_count(n: int) -> int:
    return 4 ** (n * (n - 1) // 2)


def digraph_from_index(n: int, index: int) -> Digraph:
    """The ``index``-th labelled digraph in state order.

    Each pair ``i < j`` carries a base-4 digit (0 none, 1 i->j, 2 j->i,
    3 digon); the first pair is the most significant digit.
    """
    pairs = pair_list(n)
    out = [0] * n
    for i, j in reversed(pairs):
        state = index & 3
        index >>= 2
        if state & 1:
            out[i] |= 1 << j
        if state & 2:
            out[j] |= 1 << i
    return Digraph.from_masks(n, out)


def enumerate_digraphs(n: int, shard: tuple[int, int] = (0, 1), canonical: bool = False):
    """Stream labelled digraphs on ``n`` vertices; shard ``(s, k)`` keeps every k-th from s."""
    if n > LABELLED_BOUND:
        raise SizeBoundError(f"labelled enumeration limited to n <= {LABELLED_BOUND}")
    s, k = shard
    if not 0 <= s < k:
        raise ValueError(f"bad shard {s}/{k}")
    perms = list(permutations(range(n))) if canonical else None
    for index in range(s, labelled_count(n), k):
        d = digraph_from_index(n, index)
        if canonical and not is_lex_least(d, perms):
            continue
        yield d


def relabel(d: Digraph, perm) -> Digraph:
    """Digraph with vertex ``v`` renamed ``perm[v]``."""
    out = [0] * d.n
    for u in range(d.n):
        pu = perm[u]
        for v in iter_bits(d.out[u]):
            out[pu] |= 1 << perm[v]
    return Digraph.from_masks(d.n, out)


def is_lex_least(d: Digraph, perms=None) -> bool:
    """Whether ``d`` has the smallest out-mask tuple among all its relabellings (brute force)."""
    if perms is None:
        perms = permutations(range(d.n))
    code = d.out
    for p in perms:
        if relabel(d, p).out < code:
            return False
    return True


# ---------------------------------------------------------------------------
# canonical forms by refinement plus search inside the cells

def _refine(d: Digraph, colours: list[int]) -> list[int]:
    n = d.n
    while True:
        sig = []
        for v in range(n):
            outs = sorted(colours[w] for w in iter_bits(d.out[v]))
            ins = sorted(colours[w] for w in iter_bits(d.inn[v]))
            sig.append((colours[v], tuple(outs), tuple(ins)))
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colours)):
            return new
        colours = new


def canonical_form(d: Digraph) -> tuple:
    """An isomorphism-invariant code: equal codes iff isomorphic digraphs.

    Colour refinement on in/out neighbourhoods, then individualisation of
    vertices of the first non-trivial cell with backtracking, keeping the
    least resulting adjacency code.
    """
    n = d.n
    best = [None]

    def code_for(order):
        pos = {v: j for j, v in enumerate(order)}
        rows = []
        for v in order:
            m = 0
            for w in iter_bits(d.out[v]):
                m |= 1 << pos[w]
            rows.append(m)
        return tuple(rows)

    def search(colours):
        colours = _refine(d, colours)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colours):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(range(n), key=lambda v: colours[v])
            code = code_for(order)
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        for v in target:
            nc = [2 * c for c in colours]
            nc[v] -= 1
            search(nc)

    search([0] * n)
    return (n, best[0] or ())


def from_canonical(code: tuple) -> Digraph:
    n, rows = code
    return Digraph.from_masks(n, rows)


def extensions(d: Digraph):
    """Every digraph obtained by adding vertex ``n`` with any arcs to ``0..n-1``."""
    n = d.n
    base = list(d.out)
    for pattern in range(4 ** n):
        out = base + [0]
        new = 0
        p = pattern
        for v in range(n):
            state = p & 3
            p >>= 2
            if state & 1:
                out[v] |= 1 << n
            if state & 2:
                new |= 1 << v
        out[n] = new
        yield Digraph.from_masks(n + 1, out)


def hereditary_classes(n_max: int, keep):
    """Isomorphism-class representatives of a hereditary family, by size up to ``n_max``.

    ``keep(d)`` decides membership; every member on n vertices arises by
    extending a member on n-1 vertices, so only those are extended.
    """
    levels = {0: [Digraph(0)]}
    for n in range(1, n_max + 1):
        seen = {}
        for d in levels[n - 1]:
            for e in extensions(d):
                if not keep(e):
                    continue
                code = canonical_form(e)
                if code not in seen:
                    seen[code] = from_canonical(code)
        levels[n] = [seen[c] for c in sorted(seen)]
    return levels
