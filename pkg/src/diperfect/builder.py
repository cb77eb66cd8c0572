"""Constructive S-path and S_BE-path partitions for arc-locally in-/out-semicomplete digraphs.

Every rule reduces the instance to a strictly smaller induced subdigraph,
solves that recursively and lifts the answer back through the paths it set
aside.  Instances are relabelled on each recursion; ``labels`` maps local
vertices back to the caller's digraph so the trace speaks in original
vertex names.

The exact search stands in for the diperfect base case, for instances at or
below ``oracle_threshold`` vertices, and for the few degenerate situations
that the reductions do not cover; each such use is recorded in the trace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .alis import (
    AlisDecomposition,
    find_decomposition,
    hamiltonian_path_semicomplete,
    is_alis,
    is_alos,
    layer_structure,
)
from .detectors import find_clique_cut_mask, in_class_B, in_class_D, is_diperfect, max_stable_masks
from .digraph import (
    Digraph,
    components_mask,
    in_nbrs,
    inverse,
    is_stable_mask,
    iter_bits,
    lowest,
    maps_to_mask,
    nbrs,
    out_nbrs,
    popcount,
    to_mask,
    to_set,
)
from .errors import InvariantBreach, PreconditionError
from .matching import (
    BipartiteView,
    Matching,
    constrained_matching,
    deficiency_core,
    matching_against_stable,
    maximum_matching,
)
from .partitions import Mode, find_partition_mask, validate

DEFAULT_ORACLE_THRESHOLD = 10


@dataclass
class TraceStep:
    depth: int
    rule: str
    vertices: tuple          # instance vertex set, original labels
    parent: int | None
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"depth": self.depth, "rule": self.rule, "vertices": list(self.vertices),
                "parent": self.parent, "detail": self.detail}


@dataclass
class BuildTrace:
    mode: str
    stable: tuple
    steps: list
    result: list

    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def oracle_reasons(self) -> list[str]:
        return [s.detail.get("reason", "") for s in self.steps if s.rule == "oracle"]

    def to_json(self):
        return {"mode": self.mode, "stable": list(self.stable),
                "steps": [s.to_json() for s in self.steps],
                "result": [list(p) for p in self.result]}


def check_trace(trace: BuildTrace) -> bool:
    """Every recursive instance is a strict subset of the instance that spawned it."""
    for j, s in enumerate(trace.steps):
        if s.parent is None:
            continue
        if not 0 <= s.parent < j:
            return False
        parent = trace.steps[s.parent]
        child, up = set(s.vertices), set(parent.vertices)
        if not (child < up or (child == up and parent.rule in ("inverse", "begin-end-reuse"))):
            return False
    return True


def _orient(d: Digraph, a: int, b: int) -> tuple[int, int]:
    if d.has_arc(a, b):
        return (a, b)
    if d.has_arc(b, a):
        return (b, a)
    raise InvariantBreach("matching-edge", f"{a} and {b} are not adjacent")


def _matching_paths(d: Digraph, m: Matching) -> list[tuple]:
    return [_orient(d, x, y) for x, y in m.pairs.items()]


def _bip_components(d: Digraph, a: int, b: int) -> list[tuple[int, int]]:
    """Components (A-part, B-part) of the bipartite graph of edges between ``a`` and ``b``.

    Only components with at least one edge are listed, ordered by least vertex.
    """
    adj = {}
    for v in iter_bits(a):
        adj[v] = d.adj(v) & b
    for v in iter_bits(b):
        adj[v] = d.adj(v) & a
    done = 0
    comps = []
    for v in iter_bits(a | b):
        if done >> v & 1 or not adj[v]:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            grow = 0
            for u in iter_bits(frontier):
                grow |= adj[u]
            grow &= ~comp
            comp |= grow
            frontier = grow
        done |= comp
        comps.append((comp & a, comp & b))
    comps.sort(key=lambda c: lowest(c[0] | c[1]))
    return comps


class _Fallback(Exception):
    """Internal signal: a degenerate situation outside the reductions' reach."""


class Builder:
    def __init__(self, mode, oracle_threshold: int = DEFAULT_ORACLE_THRESHOLD, clique_cuts: bool = True):
        self.mode = Mode.parse(mode)
        self.clique_cuts = clique_cuts
        self.be = self.mode is Mode.BE
        self.threshold = oracle_threshold
        self.steps: list[TraceStep] = []

    # -- bookkeeping -----------------------------------------------------
    def _step(self, ctx, rule, **detail) -> int:
        d, labels, depth, parent, _ = ctx
        self.steps.append(TraceStep(depth, rule, tuple(labels), parent, detail))
        return len(self.steps) - 1

    @staticmethod
    def _names(labels, mask):
        return [labels[v] for v in iter_bits(mask)]

    def sub(self, ctx, step, keep: int, s: int, be: bool | None = None) -> list[tuple]:
        """Solve the induced instance on ``keep`` and return paths in the current labels."""
        d, labels, depth, _, mode_be = ctx
        be = mode_be if be is None else be
        if keep == d.full:
            raise InvariantBreach("termination", "a reduction did not remove any vertex")
        sub, local = d.induced(keep)
        index = {old: new for new, old in enumerate(local)}
        s_local = 0
        for v in iter_bits(s & keep):
            s_local |= 1 << index[v]
        if popcount(s_local) != max_stable_masks(sub)[0]:
            raise InvariantBreach(self.steps[step].rule,
                                  f"remaining stable set {self._names(labels, s & keep)} is not maximum")
        sub_labels = [labels[v] for v in local]
        paths = self.solve(sub, s_local, sub_labels, depth + 1, step, be)
        return [tuple(local[v] for v in p) for p in paths]

    def oracle(self, ctx, s, reason, be=None):
        d, labels, _, _, mode_be = ctx
        be = mode_be if be is None else be
        self._step(ctx, "oracle", reason=reason)
        part = find_partition_mask(d, s, Mode.BE if be else Mode.ORTHOGONAL)
        if part is None:
            raise InvariantBreach("oracle", f"no partition exists for S={self._names(labels, s)}")
        return part

    # -- dispatch --------------------------------------------------------
    def solve(self, d: Digraph, s: int, labels, depth=0, parent=None, be=None) -> list[tuple]:
        be = self.be if be is None else be
        ctx = (d, labels, depth, parent, be)
        if d.n == 0:
            return []
        if d.n <= self.threshold:
            return self.oracle(ctx, s, "small instance", be)
        comps = components_mask(d)
        if len(comps) > 1:
            step = self._step(ctx, "components", parts=[self._names(labels, c) for c in comps])
            paths = []
            for c in comps:
                paths += self.sub(ctx, step, c, s, be)
            return paths
        if is_diperfect(d, method="holes"):
            return self.oracle(ctx, s, "diperfect", be)
        cut = find_clique_cut_mask(d)
        if cut is not None and self.clique_cuts:
            return self.clique_cut(ctx, s, cut, be)
        dec = find_decomposition(d)
        if dec is None and cut is not None:
            return self.clique_cut(ctx, s, cut, be)
        if dec is None:
            raise InvariantBreach("alis-trichotomy", "connected, not diperfect, no clique cut, no decomposition")
        try:
            if be:
                return self.be_decomposed(ctx, s, dec)
            return self.alpha_decomposed(ctx, s, dec)
        except _Fallback as why:
            return self.oracle(ctx, s, f"flagged: {why}", be)

    def clique_cut(self, ctx, s, cut, be):
        d, labels, _, _, _ = ctx
        alpha = popcount(s)
        comps = components_mask(d, d.full & ~cut)
        split = None
        for r in range(1, len(comps)):
            for chosen in combinations(comps, r):
                side = 0
                for c in chosen:
                    side |= c
                sub_cut = cut
                while True:
                    a = side | sub_cut
                    b = d.full & ~a
                    if b and max_stable_masks(d, a)[0] + max_stable_masks(d, b)[0] == alpha:
                        split = a
                        break
                    if sub_cut == 0:
                        break
                    sub_cut = (sub_cut - 1) & cut
                if split is not None:
                    break
            if split is not None:
                break
        if split is None:
            return self.oracle(ctx, s, "flagged: no additive split at the clique cut", be)
        rest = d.full & ~split
        step = self._step(ctx, "clique-cut", cut=self._names(labels, cut),
                          parts=[self._names(labels, split), self._names(labels, rest)])
        return self.sub(ctx, step, split, s, be) + self.sub(ctx, step, rest, s, be)

    # -- shared reductions ----------------------------------------------
    def reduce_uncovered_stable(self, ctx, s, be=None):
        """Cover the neighbours of a deficient part of S by a matching and remove them."""
        d, labels, _, _, _ = ctx
        ns = nbrs(d, s)
        view = BipartiteView.from_digraph(d, s, ns)
        core = deficiency_core(view)
        if core is None:
            raise PreconditionError("a matching covers S against N(S)")
        xp = to_mask(core.xp)
        if core.degenerate:
            # an isolated stable vertex: it is a path on its own
            v = lowest(xp)
            step = self._step(ctx, "uncovered-stable", isolated=labels[v])
            return self.sub(ctx, step, d.full & ~(1 << v), s) + [(v,)]
        nx = nbrs(d, xp)
        step = self._step(ctx, "uncovered-stable", core=self._names(labels, xp),
                          removed=self._names(labels, nx))
        paths = self.sub(ctx, step, d.full & ~nx, s)
        matched = {x for x in core.matching.pairs}
        paths = [p for p in paths if not (len(p) == 1 and p[0] in matched)]
        return paths + _matching_paths(d, core.matching)

    def reduce_small_neighborhood(self, ctx, s, z, rule):
        d, labels, _, _, _ = ctx
        y = nbrs(d, z)
        if not z or not is_stable_mask(d, z) or popcount(y) > popcount(z):
            raise PreconditionError("Z must be non-empty, stable and at least as large as N(Z)")
        m1 = maximum_matching(BipartiteView.from_digraph(d, z & s, y & ~s))
        if len(m1) < popcount(z & s):
            return self.reduce_uncovered_stable(ctx, s)
        m2 = matching_against_stable(d, s, z & ~s, check_maximum=False)
        m = Matching(list(m1.pairs.items()) + list(m2.pairs.items()))
        if m.vertex_mask != z | y:
            raise InvariantBreach(rule, "matching between Z and N(Z) is not perfect")
        step = self._step(ctx, rule, z=self._names(labels, z), y=self._names(labels, y))
        return self.sub(ctx, step, d.full & ~m.vertex_mask, s & ~m.vertex_mask) + _matching_paths(d, m)

    def reduce_uxy(self, ctx, s, u, x, y, rule):
        d, labels, _, _, _ = ctx
        ok = (u and x and y and not (u & x or u & y or x & y)
              and is_stable_mask(d, x) and is_stable_mask(d, y)
              and nbrs(d, y) & ~x == 0 and nbrs(d, x) & ~(u | y) == 0
              and all(d.adj(w) & x == x for w in iter_bits(u)))
        if not ok:
            raise InvariantBreach(rule, f"U={self._names(labels, u)} X={self._names(labels, x)} "
                                        f"Y={self._names(labels, y)} do not have the required shape")
        m1 = matching_against_stable(d, s, y & ~s, check_maximum=False)
        m2 = maximum_matching(BipartiteView.from_digraph(d, y & s, x & ~s))
        if len(m2) < popcount(y & s):
            return self.reduce_uncovered_stable(ctx, s)
        m = Matching(list(m1.pairs.items()) + list(m2.pairs.items()))
        step = self._step(ctx, rule, u=self._names(labels, u), x=self._names(labels, x),
                          y=self._names(labels, y))
        return self.sub(ctx, step, d.full & ~m.vertex_mask, s & ~m.vertex_mask) + _matching_paths(d, m)

    def reduce_hxy(self, ctx, s, hx, hy, rule):
        d, labels, _, _, _ = ctx
        nx, ny = nbrs(d, hx), nbrs(d, hy)
        ok = (hy & ~s == 0 and nx & s == hy and not nx & ny
              and all(d.adj(w) & nx == nx for w in iter_bits(ny & ~hx)))
        if not ok:
            raise InvariantBreach(rule, f"H[X={self._names(labels, hx)}, Y={self._names(labels, hy)}] "
                                        "does not have the required shape")
        m = matching_against_stable(d, s, hx, check_maximum=False)
        step = self._step(ctx, rule, x=self._names(labels, hx), y=self._names(labels, hy))
        return self.sub(ctx, step, d.full & ~m.vertex_mask, s & ~m.vertex_mask) + _matching_paths(d, m)

    def reduce_source_bipartite(self, ctx, s, hx, hy, rule):
        d, labels, _, _, _ = ctx
        view = BipartiteView.from_digraph(d, hx, hy)
        core = deficiency_core(view)
        if core is None:
            raise PreconditionError("a matching covers X")
        if core.degenerate:
            raise _Fallback("source-side vertex without in-neighbours")
        xp = to_mask(core.xp)
        yp = in_nbrs(d, xp)
        step = self._step(ctx, rule, core=self._names(labels, xp), removed=self._names(labels, yp))
        paths = self.sub(ctx, step, d.full & ~yp, s)
        front = {}
        for x, y in core.matching.pairs.items():
            front[x] = y
        out = []
        for p in paths:
            if p[0] in front:
                y = front.pop(p[0])
                if not d.has_arc(y, p[0]):
                    raise InvariantBreach(rule, f"{labels[y]} does not dominate {labels[p[0]]}")
                p = (y,) + p
            out.append(p)
        if front:
            raise InvariantBreach(rule, "a matched vertex does not start a path")
        return out

    # -- BE on a decomposition -------------------------------------------
    def be_decomposed(self, ctx, s, dec: AlisDecomposition):
        d, labels, _, _, _ = ctx
        if dec.v1:
            raise InvariantBreach("empty-dominating-part",
                                  f"V1={self._names(labels, dec.v1)} in a digraph without blocking odd cycles")
        if not dec.v3:
            return self.extended_cycle(ctx, s, list(dec.classes))
        ls = layer_structure(d, dec)
        if ls.unreachable:
            raise _Fallback("V3 vertices unreachable from the extended cycle")
        if len(ls.layers) > 3:
            dd = len(ls.layers) - 1
            deep, prev = ls.layers[dd], ls.layers[dd - 1]
            comps = [c for c in _bip_components(d, prev, deep) if c[1]]
            comps.sort(key=lambda c: lowest(c[1]))
            hx, hy = comps[0]
            return self.reduce_uxy(ctx, s, in_nbrs(d, hx), hx, hy, "deep-layer")
        return self.shallow_layers(ctx, s, dec, ls)

    def extended_cycle(self, ctx, s, classes):
        d, labels, _, _, _ = ctx
        k = len(classes)
        if k % 2 == 0:
            return self.oracle(ctx, s, "even extended cycle is bipartite")
        for c in classes:
            if c & s and c & ~s:
                raise InvariantBreach("extended-cycle", "a class is split by the maximum stable set")
        for i in range(k):
            a, b, c = classes[i], classes[(i + 1) % k], classes[(i + 2) % k]
            if a & ~s == 0 and not b & s and not c & s:
                path = (lowest(a), lowest(b), lowest(c))
                step = self._step(ctx, "extended-cycle", path=[labels[v] for v in path])
                keep = d.full & ~to_mask(path)
                return self.sub(ctx, step, keep, s & keep) + [path]
        raise InvariantBreach("extended-cycle", "no class in S followed by two classes outside S")

    def shallow_layers(self, ctx, s, dec, ls):
        d, labels, _, _, _ = ctx
        k = dec.k
        cls = dec.cls
        L, I, R, W, Ip = ls.left, ls.inner, ls.right, ls.w, ls.inner_plus
        at = lambda seq, i: seq[i % k]  # noqa: E731

        # L_i has no out-neighbours
        for i in range(k):
            nl = out_nbrs(d, L[i])
            if nl:
                comps = _bip_components(d, L[i], nl)
                hx, hy = comps[0]
                return self.reduce_uxy(ctx, s, in_nbrs(d, hx), hx, hy, "left-out-neighbours")
        # every class maps onto I+_i, R_i and the next class
        for i in range(k):
            for hx, hy in _bip_components(d, Ip[i] | R[i], W[i]):
                if hx & ~Ip[i] == 0:
                    return self.reduce_uxy(ctx, s, in_nbrs(d, hx), hx, hy, "inner-plus-component")
            target = Ip[i] | R[i] | cls(i + 1)
            if not maps_to_mask(d, cls(i), target):
                raise InvariantBreach("class-domination", f"X_{i + 1} does not map to I+ u R u X_{i + 2}")
        # no class is split by S
        for i in range(k):
            c = cls(i)
            if c & s and c & ~s:
                z = (s & (L[i] | (I[i] & ~Ip[i]))) | (s & at(W, i - 1))
                return self.reduce_small_neighborhood(ctx, s, z, "split-class")
        # no three consecutive classes miss S
        for i in range(k):
            if not (cls(i) | cls(i + 1) | cls(i + 2)) & s:
                j = (i + 1) % k
                z = (s & (L[j] | I[j] | R[j])) | (s & W[i])
                return self.reduce_small_neighborhood(ctx, s, z, "three-free-classes")
        # orient so that the second and third classes miss S
        r = next((i for i in range(k) if not (cls(i + 1) | cls(i + 2)) & s), None)
        if r is None:
            raise InvariantBreach("odd-cycle-parity", "no two consecutive classes miss S")
        x1, x2, x3, x4 = cls(r), cls(r + 1), cls(r + 2), cls(r + 3)
        if x1 & ~s or x4 & ~s:
            raise InvariantBreach("class-in-stable-set", "the neighbouring classes are not inside S")
        p1, p2, p3 = r % k, (r + 1) % k, (r + 2) % k
        if R[p2]:
            return self.case_right(ctx, s, p2, p3, L, I, R, W, Ip, x3)
        return self.case_no_right(ctx, s, p1, p2, p3, L, I, R, W, Ip, x1, x2, x3)

    def case_right(self, ctx, s, p2, p3, L, I, R, W, Ip, x3):
        d, labels, _, _, _ = ctx
        t = (Ip[p2] | R[p2]) & s
        if t:
            comps = [c for c in _bip_components(d, t, W[p2] | L[p3]) if c[0]]
            ty, tx = comps[0]
            return self.reduce_hxy(ctx, s, tx, ty, "right-stable-component")
        x = W[p2] | L[p3] | (I[p3] & ~Ip[p3])
        y = nbrs(d, x)
        if x & ~s or y & s:
            raise InvariantBreach("right-matching", "X is not inside S or N(X) meets S")
        view = BipartiteView.from_digraph(d, x, y)
        if len(maximum_matching(view)) < popcount(x):
            return self.reduce_uncovered_stable(ctx, s)
        yp = Ip[p2] | R[p2]
        m = constrained_matching(view, yp)
        if yp & ~m.vertex_mask:
            raise _Fallback("constrained matching does not cover I+ u R")
        step = self._step(ctx, "right-matching", x=self._names(labels, x), y=self._names(labels, y))
        keep = d.full & ~m.vertex_mask
        return self.sub(ctx, step, keep, s & ~x) + _matching_paths(d, m)

    def case_no_right(self, ctx, s, p1, p2, p3, L, I, R, W, Ip, x1, x2, x3):
        d, labels, _, _, _ = ctx
        if W[p2]:
            comps = _bip_components(d, Ip[p2], W[p2])
            hx, hy = comps[0]
            return self.reduce_uxy(ctx, s, x2, hx, hy, "no-right-inner-component")
        x = W[p1] | L[p2] | I[p2] | x3
        y = in_nbrs(d, x)
        view = BipartiteView.from_digraph(d, x, y)
        m = maximum_matching(view)
        if len(m) < popcount(x):
            return self.reduce_source_bipartite(ctx, s, x, y, "source-bipartite")
        step = self._step(ctx, "append-last-class", removed=self._names(labels, x3))
        paths = self.sub(ctx, step, d.full & ~x3, s)
        mate = dict(m.pairs)              # x vertex -> its Y partner
        inner = {a: b for a, b in mate.items() if not x3 >> a & 1}
        if not inner:
            return self._append_class(d, paths, x3, mate)
        inner_y = 0
        for b in inner.values():
            inner_y |= 1 << b
        touched = [p for p in paths if to_mask(p) & y]
        for p in touched:
            if len(p) != 2:
                raise InvariantBreach("append-last-class", f"path {p} through Y is not a single arc")
        inner_x = to_mask(inner)
        # a matched X vertex may also sit alone in the sub-partition; the
        # matching path replaces it
        kept = [p for p in paths if not to_mask(p) & y and not (len(p) == 1 and inner_x >> p[0] & 1)]
        new = kept + [_orient(d, b, a) for a, b in inner.items()]
        used = 0
        for p in new:
            used |= to_mask(p)
        free_x1 = [v for v in iter_bits(x1 & ~used)]
        loose_y = [v for v in iter_bits(y & ~inner_y)]
        if len(free_x1) < len(loose_y):
            raise InvariantBreach("append-last-class", "not enough free vertices of the first class")
        for u, v in zip(free_x1, loose_y):
            if not d.has_arc(u, v):
                raise InvariantBreach("append-last-class", f"{labels[u]} does not dominate {labels[v]}")
            new.append((u, v))
        new += [(u,) for u in free_x1[len(loose_y):]]
        return self._append_class(d, new, x3, mate)

    @staticmethod
    def _append_class(d, paths, x3, mate):
        by_end = {p[-1]: j for j, p in enumerate(paths)}
        paths = list(paths)
        for v in iter_bits(x3):
            end = mate[v]
            j = by_end.pop(end, None)
            if j is None or not d.has_arc(end, v):
                raise InvariantBreach("append-last-class", f"no path ends at the partner of {v}")
            paths[j] = paths[j] + (v,)
        return paths

    # -- alpha on a decomposition ----------------------------------------
    def alpha_decomposed(self, ctx, s, dec: AlisDecomposition):
        d, labels, _, _, _ = ctx
        if not dec.v1:
            if not dec.v3:
                return self.extended_cycle(ctx, s, list(dec.classes))
            if not in_class_D(d):
                raise InvariantBreach("no-dominating-part",
                                      "V1 is empty but the digraph has a blocking odd cycle")
            step = self._step(ctx, "begin-end-reuse")
            return self.solve(d, s, labels, ctx[2] + 1, step, be=True)
        if not dec.v1 & s:
            return self.alpha_outside_v1(ctx, s, dec)
        return self.alpha_cycle_splice(ctx, s, dec)

    def alpha_outside_v1(self, ctx, s, dec):
        d, labels, _, _, _ = ctx
        step = self._step(ctx, "dominating-prefix", v1=self._names(labels, dec.v1))
        paths = self.sub(ctx, step, d.full & ~dec.v1, s, be=False)
        ham = hamiltonian_path_semicomplete(d, dec.v1)
        v2 = dec.v2
        starts = sorted((p[0], j) for j, p in enumerate(paths) if v2 >> p[0] & 1)
        if not starts:
            raise InvariantBreach("dominating-prefix", "no path starts in the extended cycle")
        j = starts[0][1]
        paths[j] = ham + paths[j]
        return paths

    def alpha_cycle_splice(self, ctx, s, dec):
        d, labels, _, _, _ = ctx
        k = dec.k
        cyc = [lowest(c) for c in dec.classes]
        cmask = to_mask(cyc)
        step = self._step(ctx, "cycle-splice", cycle=[labels[v] for v in cyc])
        paths = self.sub(ctx, step, d.full & ~cmask, s, be=False)
        class_of = {}
        for i, c in enumerate(dec.classes):
            for v in iter_bits(c):
                class_of[v] = i

        def around(i):  # cycle path x_i, x_{i+1}, ..., x_{i-1}
            return tuple(cyc[(i + j) % k] for j in range(k))

        rest_q = dec.v2 & ~cmask
        if rest_q:
            for j, p in enumerate(paths):
                v = p[0]
                if rest_q >> v & 1:
                    paths[j] = around(class_of[v]) + p
                    return paths
            for j, p in enumerate(paths):
                v = p[-1]
                if rest_q >> v & 1:
                    paths[j] = p + around((class_of[v] + 1) % k)
                    return paths
            for j, p in enumerate(paths):
                for t in range(1, len(p) - 1):
                    v = p[t]
                    if rest_q >> v & 1:
                        i = class_of[v]
                        w = p[t - 1]
                        if not d.has_arc(w, cyc[i]):
                            raise InvariantBreach("cycle-splice", "predecessor does not dominate the cycle")
                        paths[j] = p[:t] + around(i) + p[t:]
                        return paths
            raise InvariantBreach("cycle-splice", "no place to insert the cycle")
        n1 = out_nbrs(d, dec.v2) & dec.v3
        for j, p in enumerate(paths):
            v = p[0]
            if n1 >> v & 1:
                i = class_of[lowest(d.inn[v] & cmask)]
                paths[j] = around((i + 1) % k) + p
                return paths
        for j, p in enumerate(paths):
            for t in range(1, len(p)):
                w, v = p[t - 1], p[t]
                if dec.v1 >> w & 1 and n1 >> v & 1:
                    i = class_of[lowest(d.inn[v] & cmask)]
                    first = cyc[(i + 1) % k]
                    if not d.has_arc(w, first):
                        raise InvariantBreach("cycle-splice", "dominating vertex misses the cycle")
                    paths[j] = p[:t] + around((i + 1) % k) + p[t:]
                    return paths
        raise InvariantBreach("cycle-splice", "no first-layer vertex to attach the cycle to")


def build(d: Digraph, s, mode="be", oracle_threshold: int = DEFAULT_ORACLE_THRESHOLD,
          clique_cuts: bool = True) -> BuildTrace:
    """Partition of ``d`` orthogonal to the maximum stable set ``s`` (BE or alpha mode).

    ``d`` must be arc-locally in- or out-semicomplete and free of blocking
    (BE) or anti-directed (alpha) induced odd cycles.  Out-semicomplete
    inputs are solved on the inverse and the paths reversed.
    """
    m = Mode.parse(mode)
    if m is Mode.PLAIN:
        raise PreconditionError("mode must be alpha or be")
    sm = to_mask(s)
    d.check_vertices(sm)
    if not is_stable_mask(d, sm) or popcount(sm) != max_stable_masks(d)[0]:
        raise PreconditionError("S is not a maximum stable set")
    if m is Mode.BE and not in_class_D(d):
        raise PreconditionError("digraph contains an induced blocking odd cycle")
    if m is Mode.ORTHOGONAL and not in_class_B(d):
        raise PreconditionError("digraph contains an induced anti-directed odd cycle")
    reverse = False
    work = d
    if not is_alis(d):
        if not is_alos(d):
            raise PreconditionError("digraph is neither arc-locally in- nor out-semicomplete")
        work = inverse(d)
        reverse = True
    b = Builder(m, oracle_threshold, clique_cuts)
    if reverse:
        b._step((work, list(range(d.n)), 0, None, b.be), "inverse")
    paths = b.solve(work, sm, list(range(d.n)), 1 if reverse else 0, 0 if reverse else None)
    if reverse:
        paths = [tuple(reversed(p)) for p in paths]
    paths = sorted(paths)
    check = validate(d, paths, sm, m)
    if not check:
        raise InvariantBreach("output-validation", f"built partition rejected: {check.reason}")
    label = "be" if m is Mode.BE else "alpha"
    return BuildTrace(label, tuple(sorted(to_set(sm))), b.steps, paths)
