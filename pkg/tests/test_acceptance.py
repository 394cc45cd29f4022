"""Acceptance criteria, one test each, with their time limits.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` or in the
terminal summary).  Samples come from the shared seeded corpus, so the time
charged to a criterion includes generating the samples it uses first.
"""
import random
import time

import pytest

from monadlab.analysis import buchsbaum_index, cmr_bound, generic_bounds
from monadlab.cohomology import instanton_hilbert
from monadlab.verify import (GNC_SHAPES, SAMPLE_COUNTS, buchsbaum_oracle, duality_consistent,
                             euler_conserved, jump_p, mult_maps_commute)

@pytest.fixture
def criterion(request, capsys):
    """Times the test body and prints its verdict line."""
    state = {"start": time.perf_counter(), "detail": ""}
    yield state
    secs = time.perf_counter() - state["start"]
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {state['n']}: {state['detail']} ({secs:.2f}s)"
    with capsys.disabled():
        print("\n" + line)


def _within(state, limit):
    secs = time.perf_counter() - state["start"]
    assert secs < limit, f"took {secs:.1f}s, limit {limit}s"


def test_01_ein_example(corpus, criterion):
    criterion["n"] = 1
    m, rep = corpus.builtin("ein")
    c = rep.classification
    got = (c.chern, rep.table[0, 1], rep.table[1, 1], rep.module.dims(), c.buchsbaum_p,
           c.regularity_computed, c.is_stable)
    criterion["detail"] = f"ein (c1,c2), h0(F(1)), h1(F(1)), H^1, p, reg, stable = {got}"
    assert got == ((-1, 2), 1, 1, {-1: 1, 0: 2, 1: 1}, 3, 3, True)
    _within(criterion, 1.0)


def test_02_nullcorrelation(corpus, criterion):
    criterion["n"] = 2
    m, rep = corpus.builtin("nullcorrelation")
    c = rep.classification
    got = (rep.module.dims(), c.buchsbaum_p, c.is_instanton, c.chern[1], c.regularity_computed)
    criterion["detail"] = f"nullcorrelation H^1, p, instanton, charge, reg = {got}"
    assert got == ({-1: 1}, 1, True, 1, 1)
    _within(criterion, 1.0)


def test_03_low_charges(corpus, criterion):
    criterion["n"] = 3
    ps = {k: [corpus.instanton(k, i)[1].classification.buchsbaum_p for i in range(10)] for k in (1, 2)}
    criterion["detail"] = f"charge 1 p values {sorted(set(ps[1]))}, charge 2 p values {sorted(set(ps[2]))}"
    assert ps[1] == [1] * 10 and ps[2] == [2] * 10
    _within(criterion, 30.0)


def test_04_charge_three(corpus, criterion):
    criterion["n"] = 4
    ps = [corpus.instanton(3, i)[1].classification.buchsbaum_p for i in range(10)]
    criterion["detail"] = f"charge 3 p values {ps}"
    assert ps == [3] * 10
    _within(criterion, 60.0)


def test_05_generic_charges_four_to_six(corpus, criterion):
    criterion["n"] = 5
    ps = {k: [corpus.instanton(k, i)[1].classification.buchsbaum_p for i in range(n)]
          for k, n in ((4, 20), (5, 20), (6, 10))}
    outliers = {k: [(i, p) for i, p in enumerate(ps[k]) if p != 3] for k in (4, 5)}
    criterion["detail"] = (f"#p=3: k=4 {ps[4].count(3)}/20, k=5 {ps[5].count(3)}/20; "
                           f"k=6 min p {min(ps[6])}; outliers {outliers}")
    assert ps[4].count(3) >= 18 and ps[5].count(3) >= 18
    assert min(ps[6]) >= 4
    _within(criterion, 300.0)


def test_06_annihilator_equals_h1_jump(corpus, criterion):
    criterion["n"] = 6
    bad = []
    for k in range(1, 7):
        b = generic_bounds(k)
        for i in range(SAMPLE_COUNTS[k]):
            rep = corpus.instanton(k, i)[1]
            p = rep.classification.buchsbaum_p
            if jump_p(rep) != p or not (b.lower_p <= p <= k):
                bad.append((k, i, p, jump_p(rep)))
    criterion["detail"] = f"{sum(SAMPLE_COUNTS.values())} samples, violations {bad}"
    assert not bad


def test_07_regularity_bounds(corpus, criterion):
    criterion["n"] = 7
    for k in range(1, 7):
        assert cmr_bound(corpus.instanton(k, 0)[0]) == k
    assert cmr_bound(corpus.builtin("ein")[0]) == 3
    for variant, a, b, d in GNC_SHAPES:
        assert cmr_bound(corpus.gnc(variant, a, b, d)[0]) == (3 * d - 2 if variant == "E" else 3 * d)
    items = [corpus.builtin(n) for n in ("ein", "nullcorrelation")]
    items += [corpus.gnc(*s) for s in GNC_SHAPES]
    items += [corpus.instanton(k, i) for k in range(1, 7) for i in range(SAMPLE_COUNTS[k])]
    over = [m.name for m, rep in items
            if rep.classification.regularity_computed > rep.classification.regularity_bound_cmr]
    criterion["detail"] = f"bounds k / 3 / 3d-2 / 3d hold; reg > bound on {over} of {len(items)}"
    assert not over


def test_08_charge_three_unnatural_iff_sections(corpus, criterion):
    criterion["n"] = 8
    reps = [corpus.instanton(3, i)[1] for i in range(10)]
    reps += [corpus.instanton(3, i, thooft=True)[1] for i in range(3)]
    unnatural = [not r.classification.has_natural_cohomology for r in reps]
    sections = [r.table[0, 1] != 0 for r in reps]
    criterion["detail"] = f"{len(reps)} samples, {sum(unnatural)} unnatural, agree {unnatural == sections}"
    assert len(reps) >= 10 and sum(unnatural) >= 2
    assert unnatural == sections


def test_09_property_suites(corpus, criterion):
    criterion["n"] = 9
    rng = random.Random(1)
    builtins = [corpus.builtin(n) for n in ("ein", "nullcorrelation")]
    builtins += [corpus.gnc(*s) for s in GNC_SHAPES]
    insts = [(k, *corpus.instanton(k, i)) for k in range(1, 7) for i in range(SAMPLE_COUNTS[k])]
    items = builtins + [(m, rep) for _, m, rep in insts]
    for m, rep in items:
        assert euler_conserved(rep), m.name
        assert duality_consistent(m, rep), m.name
        assert mult_maps_commute(rep.module), m.name
    for m, rep in builtins:
        assert buchsbaum_oracle(rep.module, rng) == buchsbaum_index(rep.module), m.name
    for k, m, rep in insts:
        for t in range(-2, rep.table.window[1] + 1):
            assert instanton_hilbert(k, t) == rep.table[0, t] - rep.table[1, t], (m.name, t)
    criterion["detail"] = (f"euler/duality/commutativity on {len(items)} monads, oracle on "
                           f"{len(builtins)} builtins, Hilbert polynomial on {len(insts)} instantons")


def test_10_supernatural_gate(corpus, criterion):
    criterion["n"] = 10
    five = [corpus.instanton(5, i)[1].classification for i in range(20)]
    natural5 = [c for c in five if c.has_natural_cohomology]
    low = [corpus.instanton(k, i)[1].classification.is_supernatural
           for k in (3, 4) for i in range(SAMPLE_COUNTS[k])]
    criterion["detail"] = (f"k=5 natural {len(natural5)}/20, supernatural among them "
                           f"{sum(c.is_supernatural for c in natural5)}; k=3,4 supernatural {sum(low)}")
    assert natural5 and all(c.is_supernatural for c in natural5)
    assert not any(low)
