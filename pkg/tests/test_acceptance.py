"""End-to-end acceptance checks; each logs one pass/fail line, printed at the end of the run."""
from itertools import permutations

import pytest

from diperfect.builder import build
from diperfect.cli import main
from diperfect.detectors import alpha_and_max_stable_sets, in_class_B, in_class_D
from diperfect.digraph import is_connected, to_mask
from diperfect.enumeration import enumerate_digraphs, labelled_count
from diperfect.alis import find_decomposition, layer_structure, verify_structure_facts
from diperfect.formats import decode_digraph6, encode_digraph6
from diperfect.matching import BipartiteView, deficiency_core, hall_violator, maximum_matching
from diperfect.partitions import satisfies_property, validate
from diperfect.sweep import SweepConfig, builder_check, random_builder_sweep, sweep

from instances import ADC5, BC5, EXT5, TT3

RANDOM_BUILDS = 10_000


def report(log, number, ok, detail):
    log.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def small_sweeps():
    """Both conjecture sweeps over every labelled digraph with 1 to 5 vertices."""
    return {mode: sweep(SweepConfig(5, mode, n_min=1), workers=None)
            for mode in ("conjecture_D", "conjecture_B")}


def test_conjecture_sweeps(small_sweeps, acceptance_log, capsys):
    lines = []
    for mode in ("conjecture_D", "conjecture_B"):
        assert main(["sweep", "--mode", mode, "--n-max", "4"]) == 0
        lines.append(capsys.readouterr().out.strip())
    ok = lines == ["0 counterexamples / 4096"] * 2
    parts = [f"n=4 cli: {lines[0]!r}, {lines[1]!r}"]
    for mode, s in small_sweeps.items():
        counts_ok = all(s.totals[n] == labelled_count(n) for n in range(1, 6))
        ok = ok and counts_ok and not s.counterexamples
        parts.append(f"{mode} n<=5: {len(s.counterexamples)} counterexamples, "
                     f"{s.totals[5]} digraphs at n=5")
    report(acceptance_log, 1, ok, "; ".join(parts))


def test_half_alpha_implication(small_sweeps, acceptance_log):
    cells = small_sweeps["conjecture_D"].cells
    checked = cells["half_alpha_checked"]
    bad_a, bad_be = cells["half_alpha_violation_alpha"], cells["half_alpha_violation_be"]
    report(acceptance_log, 2, checked > 0 and bad_a == 0 and bad_be == 0,
           f"{checked} digraphs with alpha >= n/2 at n <= 5; violations alpha={bad_a} be={bad_be}")


def _brute_size(nbr, a, b):
    # pad to a square and try every assignment of Y to X
    side = max(a, b)
    best = 0
    for perm in permutations(range(side)):
        best = max(best, sum(1 for i in range(a) if perm[i] < b and nbr[i] >> perm[i] & 1))
    return best


def test_matching_engine_oracle(acceptance_log):
    seen = mismatches = 0
    for a in range(5):
        for b in range(5):
            xs, ys = list(range(a)), list(range(10, 10 + b))
            for pattern in range(1 << (a * b)):
                nbr = [(pattern >> (i * b)) & ((1 << b) - 1) for i in range(a)]
                edges = [(i, 10 + j) for i in range(a) for j in range(b) if nbr[i] >> j & 1]
                view = BipartiteView(xs, ys, edges)
                seen += 1
                size = len(maximum_matching(view))
                brute = _brute_size(nbr, a, b)
                w = hall_violator(view)
                deficient = brute < a
                good = size == brute and (w is not None) == deficient
                if w is not None:
                    good = good and view.neighbours(to_mask(w)).bit_count() < len(w)
                core = deficiency_core(view)
                good = good and (core is not None) == deficient
                if core is not None and not core.degenerate:
                    n_core = view.neighbours(to_mask(core.xp))
                    good = good and n_core.bit_count() == len(core.xp) == len(core.matching)
                mismatches += not good
    report(acceptance_log, 3, mismatches == 0 and seen >= 1 << 16,
           f"{seen} bipartite views with |X|,|Y| <= 4, {mismatches} mismatches")


def test_structure_facts(alis_classes, acceptance_log):
    audited = bad = 0
    for n in range(1, 7):
        for d in alis_classes[n]:
            if not is_connected(d):
                continue
            dec = find_decomposition(d)
            if dec is None:
                continue
            audited += 1
            if verify_structure_facts(d, dec, layer_structure(d, dec)):
                bad += 1
    report(acceptance_log, 4, audited > 0 and bad == 0,
           f"{audited} connected ALIS classes with a decomposition at n <= 6, {bad} with violations")


def test_builder_exhaustive_and_random(alis_classes, acceptance_log):
    parts, ok = [], True
    for mode, member in (("be", in_class_D), ("alpha", in_class_B)):
        builds = failures = 0
        for n in range(1, 7):
            for d in alis_classes[n]:
                if not member(d):
                    continue
                for entry in builder_check(d, mode, oracle_threshold=0):
                    builds += 1
                    failures += not entry["ok"]
        rnd = random_builder_sweep(RANDOM_BUILDS, mode, seed=2024)
        ok = ok and failures == 0 and not rnd.counterexamples and rnd.total == RANDOM_BUILDS
        parts.append(f"{mode}: {builds} exhaustive builds (n <= 6) with {failures} failures, "
                     f"{rnd.total} random digraphs (n 7-9) / {rnd.cells['builds']} builds "
                     f"with {len(rnd.counterexamples)} failures")
    report(acceptance_log, 5, ok, "; ".join(parts))


def test_named_instances(acceptance_log):
    checks = {}
    tt3_alpha, tt3_be = satisfies_property(TT3, "alpha"), satisfies_property(TT3, "be")
    checks["TT3"] = tt3_alpha.holds and not tt3_be.holds and tt3_be.failing_stable_set == {2}
    adc5 = satisfies_property(ADC5, "alpha")
    checks["ADC5"] = not adc5.holds and adc5.failing_stable_set == {1, 3}
    checks["BC5"] = not satisfies_property(BC5, "be").holds
    alpha, stables = alpha_and_max_stable_sets(EXT5)
    ext_be = satisfies_property(EXT5, "be").holds
    trace = build(EXT5, {0, 1, 3, 4, 5}, "be", oracle_threshold=0)
    checks["extended cycle"] = (alpha == 5 and stables == [frozenset({0, 1, 3, 4, 5})] and ext_be
                                and bool(validate(EXT5, trace.result, {0, 1, 3, 4, 5}, "be")))
    failed = [k for k, v in checks.items() if not v]
    report(acceptance_log, 6, not failed, f"{len(checks)} named instances, failing: {failed or 'none'}")


def test_digraph6(acceptance_log):
    code = encode_digraph6(TT3)
    bad = sum(1 for d in enumerate_digraphs(4) if decode_digraph6(encode_digraph6(d)) != d)
    report(acceptance_log, 7, code == "&BWO" and bad == 0,
           f"TT3 -> {code!r}; {bad} round-trip failures over {labelled_count(4)} digraphs")
