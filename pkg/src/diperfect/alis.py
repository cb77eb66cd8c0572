"""Arc-locally in-/out-semicomplete digraphs: recognition, extended cycles and the layered decomposition.

Vertex sets in this module are int bitmasks unless stated otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .detectors import _adjacency, chordless_cycles, is_diperfect, find_clique_cut_mask
from .digraph import (
    Digraph,
    arrow_mask,
    components_mask,
    distance_layers,
    in_nbrs,
    inverse,
    is_bipartite_mask,
    is_semicomplete,
    is_stable_mask,
    iter_bits,
    lowest,
    maps_to_mask,
    no_back_mask,
    out_nbrs,
    to_set,
)
from .errors import InvariantBreach, PreconditionError


def is_alis(d: Digraph) -> bool:
    """For every arc uv, each in-neighbour of u and each in-neighbour of v are adjacent or equal."""
    adj = _adjacency(d)
    for u in range(d.n):
        iu = d.inn[u]
        if not iu:
            continue
        for v in iter_bits(d.out[u]):
            iv = d.inn[v]
            for w in iter_bits(iu):
                if iv & ~adj[w] & ~(1 << w):
                    return False
    return True


def is_alos(d: Digraph) -> bool:
    return is_alis(inverse(d))


def hamiltonian_path_semicomplete(d: Digraph, vertices: int | None = None) -> tuple:
    """Hamiltonian path of a semicomplete digraph (restricted to ``vertices``) by insertion.

    Each vertex goes in front of the first path vertex it dominates, or at
    the end if it dominates none.
    """
    if vertices is None:
        vertices = d.full
        if d.n == 0:
            raise PreconditionError("empty digraph has no Hamiltonian path")
        if not is_semicomplete(d):
            raise PreconditionError("digraph is not semicomplete")
    path: list[int] = []
    for v in iter_bits(vertices):
        for j, p in enumerate(path):
            if d.has_arc(v, p):
                path.insert(j, v)
                break
        else:
            path.append(v)
    for a, b in zip(path, path[1:]):
        if not d.has_arc(a, b):
            raise PreconditionError("vertex set does not induce a semicomplete digraph")
    return tuple(path)


# ---------------------------------------------------------------------------
# extended cycles

def _classes_are_cycle(d: Digraph, classes, within: int) -> bool:
    k = len(classes)
    if k < 3:
        return False
    union = 0
    for c in classes:
        if not c or union & c or not is_stable_mask(d, c):
            return False
        union |= c
    if union != within:
        return False
    for i, c in enumerate(classes):
        nxt, prv = classes[(i + 1) % k], classes[i - 1]
        for v in iter_bits(c):
            if d.out[v] & within != nxt or d.inn[v] & within != prv:
                return False
    return True


def find_extended_cycle(d: Digraph, within: int | None = None) -> list[int] | None:
    """Classes of ``d[within]`` if it is exactly an extended cycle, else ``None``.

    Classes are twin classes (same in- and out-neighbourhood); the order
    starts at the class of the least vertex and follows the arcs.
    """
    if within is None:
        within = d.full
    if not within:
        return None
    groups: dict[tuple[int, int], int] = {}
    for v in iter_bits(within):
        key = (d.out[v] & within, d.inn[v] & within)
        groups[key] = groups.get(key, 0) | 1 << v
    by_vertex = {}
    for g in groups.values():
        for v in iter_bits(g):
            by_vertex[v] = g
    start = by_vertex[lowest(within)]
    order = [start]
    seen = start
    while True:
        nxt = d.out[lowest(order[-1])] & within
        if not nxt or nxt not in groups.values():
            return None
        if nxt == start:
            break
        if seen & nxt:
            return None
        order.append(nxt)
        seen |= nxt
    if seen != within or not _classes_are_cycle(d, order, within):
        return None
    return order


def find_extended_cycle_sets(d: Digraph) -> list[frozenset] | None:
    classes = find_extended_cycle(d)
    return None if classes is None else [to_set(c) for c in classes]


# ---------------------------------------------------------------------------
# decomposition

@dataclass(frozen=True)
class AlisDecomposition:
    """``V1`` semicomplete and dominating ``V2``; ``V2`` an odd extended cycle; ``V3`` bipartite."""

    v1: int
    classes: tuple
    v3: int

    @property
    def v2(self) -> int:
        r = 0
        for c in self.classes:
            r |= c
        return r

    @property
    def k(self) -> int:
        return len(self.classes)

    def cls(self, i: int) -> int:
        return self.classes[i % len(self.classes)]

    def to_json(self):
        return {
            "V1": sorted(to_set(self.v1)),
            "classes": [sorted(to_set(c)) for c in self.classes],
            "V3": sorted(to_set(self.v3)),
        }


def decomposition_problems(d: Digraph, dec: AlisDecomposition) -> list[str]:
    """Every way ``dec`` fails to be a valid partition of the required shape; empty when valid."""
    problems = []
    v1, v2, v3 = dec.v1, dec.v2, dec.v3
    if v1 & v2 or v1 & v3 or v2 & v3 or (v1 | v2 | v3) != d.full:
        problems.append("not a partition of V(D)")
    if dec.k < 5 or dec.k % 2 == 0:
        problems.append(f"extended cycle length {dec.k} is not odd and at least five")
    if not _classes_are_cycle(d, dec.classes, v2):
        problems.append("V2 classes do not form an extended cycle")
    if v1:
        sub, _ = d.induced(v1)
        if not is_semicomplete(sub):
            problems.append("D[V1] is not semicomplete")
        if not maps_to_mask(d, v1, v2):
            problems.append("V1 does not map to V2")
        if not no_back_mask(d, v1, v3):
            problems.append("an arc goes from V3 into V1")
    if not no_back_mask(d, v2, v3):
        problems.append("an arc goes from V3 into V2")
    if not is_bipartite_mask(d, v3):
        problems.append("D[V3] is not bipartite")
    return problems


def _induced_directed_odd_cycles(d: Digraph):
    """Induced odd cycles of length >= 5 that are one-way directed cycles without digons."""
    adj = _adjacency(d)
    found = []
    for cyc in chordless_cycles(adj, d.full, min_len=5, parity=1):
        k = len(cyc)
        fwd = all(d.has_arc(cyc[j], cyc[(j + 1) % k]) for j in range(k))
        bwd = all(d.has_arc(cyc[(j + 1) % k], cyc[j]) for j in range(k))
        if fwd == bwd:
            continue
        order = cyc if fwd else (cyc[0],) + tuple(reversed(cyc[1:]))
        found.append(order)
    found.sort(key=lambda c: sorted(c))
    return found


def _grow_classes(d: Digraph, cycle) -> list[int]:
    k = len(cycle)
    classes = [1 << v for v in cycle]
    changed = True
    while changed:
        changed = False
        v2 = 0
        for c in classes:
            v2 |= c
        for v in iter_bits(d.full & ~v2):
            a = d.adj(v)
            for i in range(k):
                prv, nxt = classes[i - 1], classes[(i + 1) % k]
                if a & v2 != prv | nxt:
                    continue
                if d.inn[v] & v2 != prv or d.out[v] & v2 != nxt:
                    continue
                if not arrow_mask(d, prv, 1 << v) or not arrow_mask(d, 1 << v, nxt):
                    continue
                classes[i] |= 1 << v
                v2 |= 1 << v
                changed = True
                break
    return classes


def _canonical_rotation(classes: list[int]) -> tuple:
    j = min(range(len(classes)), key=lambda i: lowest(classes[i]))
    return tuple(classes[j:] + classes[:j])


def find_decomposition(d: Digraph) -> AlisDecomposition | None:
    """First validated partition built from an induced odd directed cycle, or ``None``.

    Candidate cycles are tried by lexicographic vertex set.  Each is grown
    into an extended cycle by absorbing twins of its classes; ``V1`` is then
    everything that maps to the whole extended cycle and ``V3`` the rest.
    """
    for cyc in _induced_directed_odd_cycles(d):
        classes = _grow_classes(d, cyc)
        v2 = 0
        for c in classes:
            v2 |= c
        v1 = 0
        for v in iter_bits(d.full & ~v2):
            if maps_to_mask(d, 1 << v, v2):
                v1 |= 1 << v
        dec = AlisDecomposition(v1, _canonical_rotation(classes), d.full & ~v1 & ~v2)
        if not decomposition_problems(d, dec):
            return dec
    return None


def decompose(d: Digraph) -> AlisDecomposition:
    """Decomposition of a connected, non-diperfect ALIS digraph without clique cut."""
    if d.n == 0 or len(components_mask(d)) != 1:
        raise PreconditionError("decomposition needs a connected digraph")
    if not is_alis(d):
        raise PreconditionError("digraph is not arc-locally in-semicomplete")
    if is_diperfect(d, method="holes"):
        raise PreconditionError("digraph is diperfect")
    if find_clique_cut_mask(d) is not None:
        raise PreconditionError("digraph has a clique cut")
    dec = find_decomposition(d)
    if dec is None:
        raise InvariantBreach("alis-trichotomy", f"no decomposition found for {d!r}")
    return dec


# ---------------------------------------------------------------------------
# layers

@dataclass
class LayerStructure:
    layers: list            # N_0 = V2, N_1, N_2, ...
    out: list               # N^+(X_i) inside V3
    left: list              # L_i
    inner: list             # I_i
    right: list             # R_i
    inner_plus: list        # I^+_i
    w: list                 # W_i
    unreachable: int = 0    # V3 vertices with no directed path from V2

    def layer(self, d: int) -> int:
        return self.layers[d] if d < len(self.layers) else 0

    def to_json(self):
        f = lambda ms: [sorted(to_set(m)) for m in ms]  # noqa: E731
        return {
            "layers": f(self.layers), "out": f(self.out), "L": f(self.left), "I": f(self.inner),
            "R": f(self.right), "Iplus": f(self.inner_plus), "W": f(self.w),
            "unreachable": sorted(to_set(self.unreachable)),
        }


def layer_structure(d: Digraph, dec: AlisDecomposition) -> LayerStructure:
    problems = decomposition_problems(d, dec)
    if problems:
        raise PreconditionError("invalid decomposition: " + "; ".join(problems))
    k = dec.k
    layers = distance_layers(d, dec.v2)
    reached = 0
    for m in layers:
        reached |= m
    n2 = layers[2] if len(layers) > 2 else 0
    outs = [out_nbrs(d, dec.cls(i)) & dec.v3 for i in range(k)]
    left, right = [], []
    for i in range(k):
        o, nxt, prv = outs[i], outs[(i + 1) % k], outs[i - 1]
        right.append(sum(1 << v for v in iter_bits(o) if d.out[v] & nxt))
        left.append(sum(1 << v for v in iter_bits(o) if d.inn[v] & prv))
    inner = [outs[i] & ~left[i] & ~right[i] for i in range(k)]
    w = [out_nbrs(d, outs[i]) & n2 for i in range(k)]
    inner_plus = [in_nbrs(d, w[i]) & inner[i] for i in range(k)]
    return LayerStructure(layers, outs, left, inner, right, inner_plus, w,
                          dec.v3 & ~reached)


# ---------------------------------------------------------------------------
# structural audit

class Violation(NamedTuple):
    item: str
    detail: str
    witness: tuple


def _arcs_between(d, a, b):
    return [(u, v) for u in iter_bits(a) for v in iter_bits(d.out[u] & b)]


def verify_structure_facts(d: Digraph, dec: AlisDecomposition, ls: LayerStructure) -> list[Violation]:
    """Check the nine layer facts directly; returns every violation found."""
    bad: list[Violation] = []
    k = dec.k
    cls = dec.cls
    outs = ls.out

    def need_subset(item, what, a, b):
        extra = a & ~b
        if extra:
            bad.append(Violation(item, what, tuple(iter_bits(extra))))

    # (i) deep layers are stable
    for dd in range(2, len(ls.layers)):
        for u, v in _arcs_between(d, ls.layers[dd], ls.layers[dd]):
            bad.append(Violation("i", f"arc inside N_{dd}", (u, v)))
    # (ii) no V3 vertex is dominated by two classes
    for y in iter_bits(dec.v3):
        hit = [i for i in range(k) if d.inn[y] & cls(i)]
        if len(hit) > 1:
            bad.append(Violation("ii", "V3 vertex dominated by two classes", (y,) + tuple(hit)))
    # (iii) no arc between out-neighbourhoods of non-adjacent classes
    for i in range(k):
        for j in range(k):
            if i == j or (j - i) % k in (1, k - 1):
                continue
            for u, v in _arcs_between(d, outs[i], outs[j]):
                bad.append(Violation("iii", f"arc from N+(X_{i + 1}) to N+(X_{j + 1})", (u, v)))
    # (iv) N+(X_i) => N+(X_{i+1})
    for i in range(k):
        for u, v in _arcs_between(d, outs[(i + 1) % k], outs[i] & ~outs[(i + 1) % k]):
            bad.append(Violation("iv", f"arc from N+(X_{(i + 1) % k + 1}) back to N+(X_{i + 1})", (u, v)))
    # (v) in-neighbours of a layer lie in the previous layer or V1
    for dd in range(1, len(ls.layers)):
        need_subset("v", f"in-neighbour of N_{dd} outside N_{dd - 1} and V1",
                    in_nbrs(d, ls.layers[dd]), ls.layers[dd - 1] | dec.v1)
    # (vi) D[N_1] has no path with two arcs
    n1 = ls.layer(1)
    for u in iter_bits(n1):
        for v in iter_bits(d.out[u] & n1):
            for w in iter_bits(d.out[v] & n1 & ~(1 << u)):
                bad.append(Violation("vi", "path of length two inside N_1", (u, v, w)))
    # (vii) N+(X_i) stable
    for i in range(k):
        if not is_stable_mask(d, outs[i]):
            bad.append(Violation("vii", f"N+(X_{i + 1}) not stable", tuple(iter_bits(outs[i]))))
    # (viii)
    for i in range(k):
        L, I, R = ls.left[i], ls.inner[i], ls.right[i]
        if L & I or L & R or I & R:
            bad.append(Violation("viii", f"L/I/R of class {i + 1} overlap", tuple(iter_bits((L & I) | (L & R) | (I & R)))))
        need_subset("viii", f"N-(L_{i + 1})", in_nbrs(d, L), ls.right[i - 1] | cls(i) | dec.v1)
        need_subset("viii", f"N-(I_{i + 1} u R_{i + 1})", in_nbrs(d, I | R), cls(i) | dec.v1)
        need_subset("viii", f"N+(R_{i + 1})", out_nbrs(d, R), ls.w[i] | ls.left[(i + 1) % k])
        need_subset("viii", f"N+(L_{i + 1} u I_{i + 1})", out_nbrs(d, L | I), ls.w[i])
        if R and not maps_to_mask(d, cls(i), R):
            bad.append(Violation("viii", f"X_{i + 1} does not map to R_{i + 1}", tuple(iter_bits(R))))
    # (ix)
    for i in range(k):
        need_subset("ix", f"N-(W_{i + 1})", in_nbrs(d, ls.w[i]),
                    ls.left[i] | ls.inner[i] | ls.right[i] | dec.v1)
    return bad


def triangle_free_outside_v1(d: Digraph, dec: AlisDecomposition) -> bool:
    """U(D[V2 ∪ V3]) has no triangle."""
    m = dec.v2 | dec.v3
    adj = _adjacency(d)
    for u in iter_bits(m):
        for v in iter_bits(adj[u] & m):
            if v > u and adj[u] & adj[v] & m:
                return False
    return True
