"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations


from conftest import ACCEPTANCE
from greedylab import constructions as C
from greedylab import seqfile
from greedylab import verify as V
from greedylab.envelope import alternating_indicator, envelope_interval, ucc_witness
from greedylab.greedy import greedy_family, iter_greedy_sets_of_size
from greedylab.norms import NormValue, SpaceSpec, norm_A, norm_B, norm_combined, lorentz, sigma_g
from greedylab.seq import FinSeq, dec_rearrangement, indicator, permute, project, sum_over

LOR = SpaceSpec()


def record(num, ok, detail):
    ACCEPTANCE.append((num, bool(ok), detail))
    assert ok, detail


def test_c01_three_block_formula():
    start = time.perf_counter()
    bad = []
    for i in range(200):
        t, g = V.rand_three_block(random.Random(f"acc/1/{i}"))
        assert all(v >= 0 for v in g.values()) and max(g.values(), default=0) <= 1
        assert sum(g.values(), Fraction(0)) >= 1
        if norm_B(C.three_block(t, g)) != C.three_block_predicted(t, g):
            bad.append(i)
    elapsed = time.perf_counter() - start
    record(1, not bad and elapsed < 1, f"three-block formula: {200 - len(bad)}/200 exact, {elapsed:.2f}s (< 1s)")


def test_c02_oracle_equivalence():
    start = time.perf_counter()
    r = V.run_suite("ORACLE-EQ", V.CorpusSpec(seed=0, trials=10**5))
    elapsed = time.perf_counter() - start
    record(2, r.passed and elapsed < 30, f"oracle equivalence: {r.trials} cases, {len(r.failures)} disagreements, {elapsed:.1f}s (< 30s)")


def test_c03_quasi_greedy_constant_one():
    corpus = V.CorpusSpec()
    bad = 0
    for i in range(1000):
        rng = random.Random(f"acc/3/{i}")
        f = V.rand_seq(rng, corpus)
        nf = norm_B(f)
        for A in greedy_family(f):
            bad += norm_B(f - project(f, A)) > nf
        for lo in range(1, corpus.window + 1):
            for hi in range(lo, corpus.window + 1):
                bad += norm_B(project(f, range(lo, hi + 1))) > nf
    record(3, bad == 0, f"greedy residuals and interval projections: {bad} violations over 1000 vectors")


def test_c04_leibniz_norm_law():
    bad = 0
    for i in range(500):
        d = V.rand_leibniz(random.Random(f"acc/4/{i}"))
        bad += norm_B(C.alternating_from_leibniz(d)) != d.alpha
    sep_bad = 0
    for i in range(100):
        rng = random.Random(f"acc/4/pair/{i}")
        d = V.rand_leibniz(rng)
        while len(d.blocks) < 2:
            d = V.rand_leibniz(rng)
        K = len(d.blocks)
        subsets = [frozenset(s) for r in range(K + 1) for s in combinations(range(1, K + 1), r)]
        Nset, Mset = rng.sample(subsets, 2)
        gap = norm_B(C.leibniz_subfamily(d, Nset) - C.leibniz_subfamily(d, Mset))
        sep_bad += gap < d.omega_trunc
    record(4, bad == 0 and sep_bad == 0, f"Leibniz norm law: {bad}/500 mismatches; separation: {sep_bad}/100 violations")


def test_c05_discontinuity_jump():
    a = sum((Fraction(1, n) for n in range(3, 33)), Fraction(0))
    grid = (Fraction(0), Fraction(1, 2), Fraction(9, 10), Fraction(99, 100))
    phi = {}
    for t in grid + (Fraction(1),):
        G, _ = C.discontinuity_witness(32, t)
        phi[t] = norm_combined(G, LOR, "B").value
    ok = all(phi[t] == 1 + a - t for t in grid) and phi[Fraction(1)] == 1 + a
    # on [0, 1) the map is 1 + a - t, so its left limit at 1 is a
    jump = phi[Fraction(1)] - a
    record(5, ok and jump == 1, f"Phi(t) = 1+a-t on the grid, Phi(1) = 1+a, jump {jump}")


def test_c06_envelope_ucc():
    start = time.perf_counter()
    ms = (4, 8, 16, 32, 64)
    notes, ok = [], True
    for m in ms:
        b = envelope_interval(indicator(range(1, m + 1)), LOR, "B")
        if not (b.lower == m and b.upper == m and b.verify(indicator(range(1, m + 1)))):
            ok = False
            notes.append(f"indicator m={m}: [{b.lower}, {b.upper}]")
    witnesses = [ucc_witness(m) for m in ms]
    for w in witnesses:
        if not w["upper_alt"] <= w["bound"]:
            ok = False
            notes.append(f"m={w['m']}: upper {w['upper_alt']} > D m/s_m")
    ratios = [Fraction(m // 2) / w["upper_alt"].value for m, w in zip(ms, witnesses)]
    if not all(x < y for x, y in zip(ratios, ratios[1:])):
        ok = False
        notes.append(f"ratios not increasing: {[float(r) for r in ratios]}")
    b4 = envelope_interval(alternating_indicator(4), LOR, "B")
    if not (b4.lower == 1 and b4.upper == NormValue.exact(Fraction(48, 25))):
        ok = False
        notes.append(f"m=4 interval is [{b4.lower}, {b4.upper}], expected [1, 48/25]")
    elapsed = time.perf_counter() - start
    if elapsed >= 10:
        ok = False
    notes.append(f"ratios {[round(float(r), 3) for r in ratios]}, {elapsed:.1f}s (< 10s)")
    record(6, ok, "envelope/UCC: " + "; ".join(notes))


def test_c07_h0_dichotomy():
    start = time.perf_counter()
    notes, ok = [], True
    for K in range(1, 7):
        h0, _ = C.build_h0(C.H0Params.preset_a(K), K)
        if norm_B(h0) < Fraction(3, 2) ** K:
            ok = False
            notes.append(f"preset A K={K} below (3/2)^K")
    h0, meta = C.build_h0(C.H0Params.preset_a(6), 6)
    for k in range(1, 7):
        if abs(sum_over(h0, meta.J_minus[k - 1])) < Fraction(3, 2) ** k:
            ok = False
            notes.append(f"oscillation k={k} below (3/2)^k")
    bnorms = {}
    for K in range(2, 8):
        hb, _ = C.build_h0(C.H0Params.preset_b(K), K)
        bnorms[K] = norm_B(hb)
    if len({bnorms[K] for K in (5, 6, 7)}) != 1:
        ok = False
        notes.append("preset B not constant from K=5: " + ", ".join(f"K={K}:{v}" for K, v in bnorms.items()))
    elapsed = time.perf_counter() - start
    if elapsed >= 20:
        ok = False
    notes.append(f"{elapsed:.1f}s (< 20s)")
    record(7, ok, "h0 dichotomy: " + "; ".join(notes))


def test_c08_doubled_construction():
    params = C.H0Params.preset_b(5)
    h0, _ = C.build_h0(params, 5)
    h, _ = C.build_h(params, 5)
    D = dec_rearrangement(h0)
    order = sorted(h.indices(), key=lambda n: (-abs(h[n]), n))
    bad = 0
    for size in range(len(order) + 1):
        s = sum_over(h, order[:size])
        bad += s != 0 if size % 2 == 0 else abs(s) != D[(size + 1) // 2 - 1]
    for size in range(1, len(order) + 1):
        for A in iter_greedy_sets_of_size(h, size):
            s = sum_over(h, A)
            bad += s != 0 if size % 2 == 0 else abs(s) != D[(size + 1) // 2 - 1]
    record(8, bad == 0 and sigma_g(h) == 0, f"doubled h: {bad} chain violations over {len(order) + 1} sizes, sigma_g(h) = {sigma_g(h)}")


def test_c09_background_inequalities():
    corpus = V.CorpusSpec(seed=0, trials=1000)
    reports = [V.run_suite(sid, corpus) for sid in ("TWISTED-ID", "BS-LEM", "B99", "B1-SUBADD", "ACONV")]
    ok = all(r.passed and r.trials == 1000 for r in reports)
    record(9, ok, "background suites: " + ", ".join(f"{r.suite} {len(r.failures)} failures/{r.trials}" for r in reports))


def test_c10_symmetry_split():
    r = V.run_suite("SYMMETRY", V.CorpusSpec(seed=0, trials=500))
    bad = 0
    corpus = V.CorpusSpec()
    for i in range(500):
        rng = random.Random(f"acc/10/{i}")
        f = V.rand_seq(rng, corpus)
        pi = V.rand_perm(rng, corpus.window)
        g = permute(f, pi)
        bad += norm_A(g) != norm_A(f)
        bad += any(lorentz(g, q) != lorentz(f, q) for q in (1, 2, 3, float("inf")))
    f, pi = V.SYMMETRY_WITNESS
    split = norm_B(permute(f, pi)) != norm_B(f)
    record(10, r.passed and bad == 0 and split, f"symmetry: suite {len(r.failures)} failures, direct {bad} violations, witness {norm_B(f)} vs {norm_B(permute(f, pi))}")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "greedylab", *argv], capture_output=True, check=False)


def test_c11_determinism_and_round_trip(tmp_path):
    payloads = {}
    for threads in ("1", "4"):
        rep = tmp_path / f"r{threads}.jsonl"
        out = tmp_path / f"h{threads}.txt"
        runs = [
            _cli("--threads", threads, "verify", "--suite", "B1-SUBADD", "--trials", "200", "--report", str(rep)),
            _cli("--threads", threads, "envelope", "--target", "alt-indicator:16"),
            _cli("--threads", threads, "norm", "--input", str(tmp_path / "missing"), "--which", "B"),
            _cli("--threads", threads, "construct", "--which", "h", "--preset", "B", "--depth", "4", "--out", str(out)),
            _cli("--threads", threads, "democracy", "--gauge", "B-comb", "--space", "lorentz:inf", "--m-max", "6"),
        ]
        payloads[threads] = [(r.returncode, r.stdout) for r in runs] + [
            rep.read_bytes(),
            out.read_bytes(),
            (tmp_path / f"h{threads}.txt.meta.json").read_bytes(),
        ]
    same = payloads["1"] == payloads["4"]
    corpus = V.CorpusSpec(support=(0, 12), window=40)
    rt_bad = 0
    for i in range(1000):
        f = V.rand_seq(random.Random(f"acc/11/{i}"), corpus)
        rt_bad += seqfile.loads(seqfile.dumps_lines(f)) != f
        rt_bad += seqfile.loads(seqfile.dumps_json(f)) != f
    record(11, same and rt_bad == 0, f"payloads identical across --threads 1/4: {same}; round-trip failures {rt_bad}/2000")
