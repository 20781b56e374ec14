"""Acceptance criteria; each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import math
import os
import time

import numpy as np
import pytest

from subjrand import hmm
from subjrand.analysis import percentile_check, reproduce_table1, table1_discrepancies
from subjrand.bitseq import BitSeq, decode
from subjrand.generator import GenConfig, SinkError, generate, generate_walk, stream_stats, window_codes
from subjrand.hmm import MotifMachine, SixStateModel, path_exponents6, viterbi_abstract, viterbi_numeric6
from subjrand.rating import SRValue, dp_plus, exact_value
from subjrand.reference import TABLE2, TABLE1_DEVIATION_NOTE
from subjrand.seqgraph import main_component, reproduce_table2, verify_theorem1

V = SRValue.of
T44 = V(4, 4)


def test_criterion_01_table1(verdict):
    start = time.perf_counter()
    problems = table1_discrepancies(reproduce_table1())
    seconds = time.perf_counter() - start
    ok = not problems and seconds < 1
    verdict(1, "Table 1 groups, order, finite and context columns", ok,
            f"{seconds:.2f}s; {TABLE1_DEVIATION_NOTE}" if not problems else "; ".join(problems))
    assert not problems
    assert seconds < 1


def test_criterion_02_oracle_equivalence(verdict):
    start = time.perf_counter()
    machine = MotifMachine()
    eight = [c for c in range(256)
             if not dp_plus(decode(c, 8)) == exact_value(decode(c, 8)) == machine.score(decode(c, 8))]
    rng = np.random.default_rng(2024)
    longer = 0
    for _ in range(10_000):
        n = int(rng.integers(9, 33))
        x = BitSeq(tuple(int(b) for b in rng.integers(0, 2, n)))
        longer += exact_value(x) != viterbi_abstract(x, machine)
    seconds = time.perf_counter() - start
    ok = not eight and longer == 0 and seconds < 10
    verdict(2, "dp+ = exact = Viterbi (256 windows), exact = Viterbi (10^4 random)", ok,
            f"8-bit mismatches {eight}, long mismatches {longer}, {seconds:.1f}s")
    assert not eight and longer == 0
    assert seconds < 10


def test_criterion_03_table2(verdict):
    start = time.perf_counter()
    results = reproduce_table2()
    seconds = time.perf_counter() - start
    wrong = []
    for res, ref in zip(results, TABLE2):
        got = (tuple(s.vertices for s in res.stats), tuple(s.arcs for s in res.stats),
               tuple(s.cycle_basis for s in res.stats))
        want = (ref.vertices, ref.arcs, ref.cycle_basis)
        if got != want:
            wrong.append(f"{ref.threshold}: got V/A/basis {got}, published {want}")
        if ref.members is not None and set(res.components) != set(ref.members):
            wrong.append(f"{ref.threshold}: component members differ")
        if ref.excluded is not None and res.excluded != ref.excluded:
            wrong.append(f"{ref.threshold}: excluded {sorted(res.excluded)} != {sorted(ref.excluded)}")
    ok = not wrong and seconds < 5
    verdict(3, "Table 2 vertices, arcs, cycle basis, excluded codes", ok,
            f"{seconds:.2f}s; " + ("; ".join(wrong) if wrong else "all 12 rows exact"))
    assert not wrong
    assert seconds < 5


def test_criterion_04_theorem(verdict):
    result = verify_theorem1()
    failed = {k: w for k, w in result.witnesses.items() if w}
    verdict(4, "component theorem clauses (a)-(d)", result.passed,
            " ".join(f"({k}) {'ok' if v else 'FAIL'}" for k, v in result.clauses.items())
            + (f" {failed}" if failed else ""))
    assert result.passed


def test_criterion_05_generation_soundness(verdict):
    comp = main_component(T44)
    member = np.zeros(256, dtype=bool)
    member[list(comp)] = True
    outside = sinks = 0
    for rng_seed in range(100):
        for method in ("walk", "bounds"):
            x = generate(GenConfig(method, T44, None, 10_000, rng_seed))
            outside += int(np.count_nonzero(~member[window_codes(x)]))
    for t in (V(4, 4.5), V(3, 7), V(2, 6), V(1, 7)):
        for rng_seed in range(10):
            try:
                generate(GenConfig("bounds", t, None, 10_000, rng_seed))
            except SinkError:
                sinks += 1
    ok = outside == 0 and sinks == 0
    verdict(5, "every window in C([4,4]); no sinks at thresholds <= [4,4.5]", ok,
            f"windows outside {outside}, sink errors {sinks}")
    assert ok


def test_criterion_06_stream_statistics(verdict):
    start = time.perf_counter()
    rates = {m: stream_stats(generate(GenConfig(m, T44, None, 1_000_000, 0))).alternation
             for m in ("walk", "bounds")}
    excess = np.array([generate_walk(GenConfig("walk", T44, None, 10_000, s)).count_x() - 5_000
                       for s in range(100)], dtype=float)
    mean, se = excess.mean(), excess.std(ddof=1) / math.sqrt(len(excess))
    seconds = time.perf_counter() - start
    alt_ok = all(abs(r - 0.58) <= 0.02 for r in rates.values())
    bal_ok = abs(mean) <= 3 * se
    ok = alt_ok and bal_ok and seconds < 60
    verdict(6, "alternation 0.58 +/- 0.02 and balanced X count", ok,
            f"alternation walk {rates['walk']:.4f} bounds {rates['bounds']:.4f}; "
            f"mean #X - n/2 = {mean:.2f} (3 SE = {3 * se:.2f}); {seconds:.1f}s")
    assert alt_ok and bal_ok
    assert seconds < 60


def test_criterion_07_periodicity(verdict):
    x = generate_walk(GenConfig("walk", V(5, 3), decode(44, 8), 200, 0))
    periodic = all(x[k] == x[k + 6] for k in range(len(x) - 6))
    visited = set(window_codes(x).tolist())
    ok = periodic and len(visited) == 6
    verdict(7, "walk at [5,3] has period 6", ok, f"{x[:20].to_ox()}..., {len(visited)} vertices visited")
    assert ok


def test_criterion_08_percentile(verdict):
    report = percentile_check(20, 1000, rng_seed=0, jobs=os.cpu_count() or 1)
    detail = (f"worst sample {report.worst_sample} rated {report.worst_sample_value}: "
              f"{report.worst_context:.2%} of 2^20 sequences rate strictly more random "
              f"(finite-state reading {report.worst_finite:.2%}); "
              f"<= 9%: {report.tight_passed} (informative); "
              f"least-window reading {report.worst_window_min:.2%}; "
              f"share with every window in C([4,4]) {report.producible_share:.2%}; "
              f"{report.seconds:.0f}s")
    verdict(8, "worst generated 20-bit sample within the top 10%", report.passed, detail)
    assert report.passed


def test_criterion_09_benchmark(verdict):
    report = hmm.bench_ratings(5)
    ok = report.identical and report.dp_plus_seconds <= report.viterbi_seconds
    verdict(9, "dp+ no slower than the 72-state Viterbi, identical outputs", ok,
            f"dp+ {report.dp_plus_seconds:.3f}s, Viterbi {report.viterbi_seconds:.3f}s, "
            f"time ratio {report.time_ratio:.1f}x, space ratio {report.space_ratio:.2f}x")
    assert ok


def test_criterion_10_numeric_consistency(verdict):
    short = MotifMachine([m for m in hmm.motif_set() if len(m) <= 2])
    mismatches = []
    for code in range(256):
        x = decode(code, 8)
        _, path = viterbi_numeric6(x, 0.11, 0.70)
        if path_exponents6(path) != short.score(x):
            mismatches.append(code)
    model = SixStateModel(0.11, 0.70)
    init = model.initial()
    own_entry = [0, 1, 2, 2, 5, 5]
    worst = max(abs(sum(row) + init[e] - 1) for row, e in zip(model.matrix(), own_entry))
    ok = not mismatches and worst <= 1e-12
    verdict(10, "numeric six-state argmax matches abstract exponents; rows stochastic", ok,
            f"mismatches {mismatches}, max row deviation {worst:.1e}")
    assert ok
