"""Exhaustive and randomized sweeps: conjecture checks, builder cross-checks, structural audits."""
from __future__ import annotations

import csv
import json
import logging
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import NamedTuple

from .alis import find_decomposition, is_alis, layer_structure, verify_structure_facts
from .builder import DEFAULT_ORACLE_THRESHOLD, build, check_trace
from .detectors import (
    _dihedral,
    _is_anti_labelling,
    _roles,
    find_anti_directed_odd_cycle,
    find_blocking_odd_cycle,
    in_class_B,
    in_class_D,
    max_stable_masks,
)
from .digraph import Digraph, is_connected, to_set
from .enumeration import (
    LABELLED_BOUND,
    enumerate_digraphs,
    hereditary_classes,
    labelled_count,
    relabel,
)
from .errors import DiperfectError, InvariantBreach, PreconditionError, SizeBoundError
from .formats import encode_digraph6
from .partitions import _search, find_partition_mask, is_diperfect_property

log = logging.getLogger(__name__)

MODES = ("conjecture_B", "conjecture_D", "alis_builder", "structure_facts")
WORKERS_ENV = "DIPERFECT_WORKERS"


@dataclass
class SweepConfig:
    n_max: int
    mode: str
    shard: tuple = (0, 1)
    canonical: bool = False
    out: str | None = None
    n_min: int | None = None
    oracle_threshold: int = DEFAULT_ORACLE_THRESHOLD
    halt: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise PreconditionError(f"unknown sweep mode {self.mode!r}")
        s, k = self.shard
        if not 0 <= s < k:
            raise PreconditionError(f"shard index {s} not below count {k}")
        if self.n_min is None:
            self.n_min = self.n_max
        if not 0 <= self.n_min <= self.n_max:
            raise PreconditionError("need 0 <= n_min <= n_max")
        labelled = self.mode.startswith("conjecture") or not self.canonical
        if labelled and self.n_max > LABELLED_BOUND:
            raise SizeBoundError(f"labelled sweeps limited to n <= {LABELLED_BOUND}")


@dataclass
class SweepRecord:
    encoding: str
    n: int
    in_B: bool
    in_D: bool
    alpha_property: bool
    be_property: bool
    alpha_diperfect: bool
    be_diperfect: bool
    witness: dict | None = None

    def to_json(self):
        return dict(self.__dict__)


@dataclass
class SweepSummary:
    mode: str
    shard: tuple
    totals: dict = field(default_factory=dict)          # n -> digraphs seen
    cells: Counter = field(default_factory=Counter)
    counterexamples: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.totals.values())

    def merge(self, other: "SweepSummary") -> "SweepSummary":
        for n, c in other.totals.items():
            self.totals[n] = self.totals.get(n, 0) + c
        self.cells.update(other.cells)
        self.counterexamples += other.counterexamples
        return self

    def line(self) -> str:
        return f"{len(self.counterexamples)} counterexamples / {self.total}"

    def to_json(self):
        return {"mode": self.mode, "shard": list(self.shard), "totals": self.totals,
                "cells": dict(sorted(self.cells.items())), "counterexamples": self.counterexamples}


# ---------------------------------------------------------------------------
# hereditary verdicts

class Verdict(NamedTuple):
    in_B: bool
    in_D: bool
    alpha_property: bool
    be_property: bool
    alpha_diperfect: bool
    be_diperfect: bool
    alpha: int
    subs_alpha_diperfect: bool
    subs_be_diperfect: bool


def _spanning_cycle(d: Digraph):
    """Cyclic vertex order when U(D) is a single cycle through every vertex."""
    n = d.n
    if n < 3:
        return None
    for v in range(n):
        if (d.out[v] | d.inn[v]).bit_count() != 2:
            return None
    order = [0]
    prev, cur = -1, 0
    while True:
        a = d.out[cur] | d.inn[cur]
        nxt = next(w for w in range(n) if a >> w & 1 and w != prev)
        if nxt == 0:
            break
        prev, cur = cur, nxt
        order.append(cur)
    return tuple(order) if len(order) == n else None


class HereditaryEvaluator:
    """Verdicts computed from those of the one-vertex-deleted subdigraphs.

    A digraph lies in a class excluding induced cycles exactly when every
    D - v does and D itself is not such a cycle; diperfection is the
    property on D plus diperfection of every D - v.  Verdicts of digraphs
    smaller than the current sweep size are cached.
    """

    def __init__(self):
        self.cache: dict = {}

    def verdict(self, d: Digraph, keep: bool = False) -> Verdict:
        key = d.out
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        n = d.n
        if n == 0:
            v = Verdict(True, True, True, True, True, True, 0, True, True)
            self.cache[key] = v
            return v
        subs = [self.verdict(d.induced(d.full & ~(1 << v))[0], True) for v in range(n)]
        in_b = all(s.in_B for s in subs)
        in_d = all(s.in_D for s in subs)
        cyc = _spanning_cycle(d) if n % 2 == 1 else None
        if cyc is not None:
            src, snk = _roles(d, cyc)
            if in_d and any((cyc[j] in src and cyc[(j + 1) % n] in snk)
                            or (cyc[j] in snk and cyc[(j + 1) % n] in src) for j in range(n)):
                in_d = False
            if in_b and n >= 5 and any(_is_anti_labelling(lab, src, snk) for lab in _dihedral(cyc)):
                in_b = False
        alpha, stables = max_stable_masks(d)
        ap = bp = True
        for sm in stables:
            if _search(d, sm, True) is None:
                bp = False
                if _search(d, sm, False) is None:
                    ap = False
                    break
        sa = all(s.alpha_diperfect for s in subs)
        sb = all(s.be_diperfect for s in subs)
        v = Verdict(in_b, in_d, ap, bp, ap and sa, bp and sb, alpha, sa, sb)
        if keep:
            self.cache[key] = v
        return v


def make_record(d: Digraph, v: Verdict) -> SweepRecord:
    witness = None
    if not v.in_D:
        w = find_blocking_odd_cycle(d)
        witness = w.to_json() if w else None
    elif not v.in_B:
        w = find_anti_directed_odd_cycle(d)
        witness = w.to_json() if w else None
    elif not v.be_diperfect:
        res = is_diperfect_property(d, "alpha" if not v.alpha_diperfect else "be")
        if not res.holds:
            witness = {"kind": "FailingPair", "subset": sorted(res.failing_subset),
                       "stable": sorted(res.failing_stable_set)}
    return SweepRecord(encode_digraph6(d), d.n, v.in_B, v.in_D, v.alpha_property, v.be_property,
                       v.alpha_diperfect, v.be_diperfect, witness)


def _conjecture_shard(args):
    cfg, shard = args
    ev = HereditaryEvaluator()
    summary = SweepSummary(cfg.mode, shard)
    records = []
    member_d = cfg.mode == "conjecture_D"
    for n in range(cfg.n_min, cfg.n_max + 1):
        seen = 0
        for d in enumerate_digraphs(n, shard, cfg.canonical):
            seen += 1
            v = ev.verdict(d)
            member = v.in_D if member_d else v.in_B
            dip = v.be_diperfect if member_d else v.alpha_diperfect
            summary.cells[f"member={int(member)},diperfect={int(dip)}"] += 1
            if 2 * v.alpha >= n:
                summary.cells["half_alpha_checked"] += 1
                if v.subs_alpha_diperfect and not v.alpha_property:
                    summary.cells["half_alpha_violation_alpha"] += 1
                if v.subs_be_diperfect and not v.be_property:
                    summary.cells["half_alpha_violation_be"] += 1
            if cfg.out:
                records.append(make_record(d, v).to_json())
            if member != dip:
                rec = make_record(d, v).to_json()
                summary.counterexamples.append(rec)
                log.error("counterexample: %s", json.dumps(rec))
                if cfg.halt:
                    summary.totals[n] = seen
                    return summary, records
        summary.totals[n] = seen
    return summary, records


# ---------------------------------------------------------------------------
# builder cross-check and structural audit

def builder_check(d: Digraph, mode: str, oracle_threshold: int = 0, clique_cuts: bool = True) -> list[dict]:
    """Build for every maximum stable set and compare with the exact search.

    Each returned entry has ``ok`` set when the build succeeded, its result
    validated, its trace only shrinks instances, and the exact search agrees
    that a partition exists.
    """
    out = []
    for sm in max_stable_masks(d)[1]:
        entry = {"stable": sorted(to_set(sm)), "mode": mode}
        try:
            trace = build(d, to_set(sm), mode, oracle_threshold, clique_cuts)
            oracle = find_partition_mask(d, sm, mode) is not None
            entry.update(ok=oracle and check_trace(trace), rules=sorted(set(trace.rules())),
                         oracle=oracle)
        except DiperfectError as exc:
            entry.update(ok=False, error=f"{type(exc).__name__}: {exc}")
        out.append(entry)
    return out


def _alis_family(cfg, n):
    if cfg.canonical:
        return _canonical_alis(cfg.n_max)[n]
    return (d for d in enumerate_digraphs(n, cfg.shard) if is_alis(d))


_ALIS_CACHE: dict = {}


def _canonical_alis(n_max: int):
    if n_max not in _ALIS_CACHE:
        _ALIS_CACHE[n_max] = hereditary_classes(n_max, is_alis)
    return _ALIS_CACHE[n_max]


def _alis_shard(args):
    cfg, shard = args
    summary = SweepSummary(cfg.mode, shard)
    records = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        family = list(_alis_family(cfg, n))
        if cfg.canonical:
            s, k = shard
            family = family[s::k]
        summary.totals[n] = len(family)
        for d in family:
            if cfg.mode == "alis_builder":
                for mode, member in (("be", in_class_D), ("alpha", in_class_B)):
                    if not member(d):
                        continue
                    for entry in builder_check(d, mode, cfg.oracle_threshold):
                        summary.cells[f"{mode}_builds"] += 1
                        entry["encoding"] = encode_digraph6(d)
                        if cfg.out:
                            records.append(entry)
                        if not entry["ok"]:
                            summary.counterexamples.append(entry)
                            if cfg.halt:
                                return summary, records
            else:
                if not is_connected(d):
                    continue
                dec = find_decomposition(d)
                if dec is None:
                    continue
                summary.cells["decomposed"] += 1
                bad = verify_structure_facts(d, dec, layer_structure(d, dec))
                entry = {"encoding": encode_digraph6(d), "decomposition": dec.to_json(),
                         "violations": [v._asdict() for v in bad]}
                if cfg.out:
                    records.append(entry)
                if bad:
                    summary.counterexamples.append(entry)
                    if cfg.halt:
                        return summary, records
    return summary, records


# ---------------------------------------------------------------------------
# driver

def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def sweep(cfg: SweepConfig, workers: int | None = None) -> SweepSummary:
    """Run the configured sweep, write reports when ``cfg.out`` is set, return the merged summary.

    The configured shard is split further across worker processes; the
    summary is a sum over sub-shards and the report is sorted, so the
    output does not depend on the worker count.
    """
    workers = worker_count() if workers is None else workers
    s, k = cfg.shard
    subs = [(cfg, (s + w * k, k * workers)) for w in range(workers)]
    job = _conjecture_shard if cfg.mode.startswith("conjecture") else _alis_shard
    if workers == 1:
        results = [job(subs[0])]
    else:
        with Pool(workers) as pool:
            results = pool.map(job, subs)
    summary = SweepSummary(cfg.mode, cfg.shard)
    records = []
    for part, recs in results:
        summary.merge(part)
        records += recs
    if cfg.mode.startswith("conjecture") and not cfg.canonical and not summary.counterexamples:
        for n in range(cfg.n_min, cfg.n_max + 1):
            expect = len(range(s, labelled_count(n), k))
            if summary.totals.get(n) != expect:
                raise InvariantBreach("shard-merge", f"n={n}: saw {summary.totals.get(n)} digraphs, "
                                                     f"expected {expect}")
    if cfg.out:
        write_reports(cfg.out, records, summary)
    return summary


def write_reports(path: str, records: list, summary: SweepSummary) -> None:
    records = sorted(records, key=lambda r: (r.get("encoding", ""), json.dumps(r, sort_keys=True)))
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
    base = path[:-6] if path.endswith(".jsonl") else path
    with open(base + ".csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mode", "key", "count"])
        for n, c in sorted(summary.totals.items()):
            w.writerow([summary.mode, f"n={n}", c])
        for key, c in sorted(summary.cells.items()):
            w.writerow([summary.mode, key, c])
        w.writerow([summary.mode, "counterexamples", len(summary.counterexamples)])


# ---------------------------------------------------------------------------
# random arc-locally in-semicomplete digraphs

def _extended_cycle_masks(sizes):
    k = len(sizes)
    classes, v = [], 0
    for s in sizes:
        classes.append(range(v, v + s))
        v += s
    out = [0] * v
    for i in range(k):
        for a in classes[i]:
            for b in classes[(i + 1) % k]:
                out[a] |= 1 << b
    return out, classes


def random_alis(n: int, rng: random.Random, keep=None, dominating: bool = False,
                tries: int = 300) -> Digraph:
    """A random ALIS digraph on ``n`` vertices satisfying ``keep`` (a hereditary predicate).

    Usually seeded with a random odd extended cycle, optionally with a
    semicomplete part dominating it; then grown one vertex at a time by
    attaching it to a few random vertices, rejecting growth steps that leave
    the family.  The result is randomly relabelled.
    """
    keep = keep or (lambda d: True)
    while True:
        out = []
        if n >= 5 and rng.random() < 0.7:
            k = rng.choice([k for k in (3, 5, 7) if k <= n - 1])
            m = rng.randint(k, n - 1)
            sizes = [1] * k
            for _ in range(m - k):
                sizes[rng.randrange(k)] += 1
            out, _ = _extended_cycle_masks(sizes)
            if dominating and len(out) < n:
                cyc = (1 << len(out)) - 1
                for _ in range(rng.randint(1, min(2, n - len(out)))):
                    a = len(out)
                    for b in range(len(out)):
                        if not cyc >> b & 1:
                            out[b] |= 1 << a
                    out.append(cyc)
        d = Digraph.from_masks(len(out), out)
        if d.n and not (is_alis(d) and keep(d)):
            continue
        grown = True
        while d.n < n and grown:
            grown = False
            for _ in range(tries):
                o = list(d.out) + [0]
                new = d.n
                if d.n:
                    for v in rng.sample(range(d.n), rng.randint(1, min(4, d.n))):
                        state = rng.choice((1, 1, 2, 2, 3)) if rng.random() < 0.9 else 3
                        if state & 1:
                            o[v] |= 1 << new
                        if state & 2:
                            o[new] |= 1 << v
                e = Digraph.from_masks(d.n + 1, o)
                if is_alis(e) and keep(e):
                    d, grown = e, True
                    break
        if grown or d.n == n:
            perm = list(range(n))
            rng.shuffle(perm)
            return relabel(d, perm)


def random_builder_sweep(count: int, mode: str, seed: int = 0, n_range=(7, 9),
                         oracle_threshold: int = 0, clique_cuts: bool = True) -> SweepSummary:
    """Builder cross-check on ``count`` random ALIS digraphs of the mode's class."""
    rng = random.Random(seed)
    member = in_class_D if mode == "be" else in_class_B
    summary = SweepSummary("alis_builder_random", (0, 1))
    for j in range(count):
        n = rng.randint(*n_range)
        d = random_alis(n, rng, member, dominating=mode != "be" and j % 4 == 0)
        summary.totals[n] = summary.totals.get(n, 0) + 1
        for entry in builder_check(d, mode, oracle_threshold, clique_cuts):
            summary.cells["builds"] += 1
            for rule in entry.get("rules", ()):
                summary.cells[f"rule:{rule}"] += 1
            if not entry["ok"]:
                entry["encoding"] = encode_digraph6(d)
                summary.counterexamples.append(entry)
    return summary
