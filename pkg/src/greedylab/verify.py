"""Seeded property suites with JSON-lines reports.

Every suite owns one documented invariant.  A trial draws its inputs from
``random.Random(f"{seed}/{suite}/{trial}")``, so the corpus depends only on the
:class:`CorpusSpec` and never on execution order or worker count.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Optional

import gmpy2

from . import constructions as C
from . import envelope as E
from . import greedy as G
from . import norms as N
from .seq import (
    FinSeq,
    SignVector,
    dec_at,
    dec_rearrangement,
    multiply,
    permute,
    project,
    sum_over,
)
from .seqfile import frac_str, to_entries

INF = math.inf


DEFAULT_GRID = (
    Fraction(0),
    Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2),
    Fraction(-1, 4), Fraction(-1, 3), Fraction(-1, 2), Fraction(-1), Fraction(-3, 2), Fraction(-2),
)
ORACLE_GRID = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(-1, 2), Fraction(-1), Fraction(-2))
ORACLE_WINDOW = 10
ORACLE_MAX_SUPPORT = 8


class UnknownSuite(KeyError):
    pass


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    trials: int = 500
    support: tuple = (0, 8)
    window: int = 10
    grid: tuple = DEFAULT_GRID

    def __post_init__(self):
        lo, hi = self.support
        if self.trials < 0 or lo < 0 or hi < lo or self.window < 1:
            raise ValueError("invalid corpus specification")
        object.__setattr__(self, "grid", tuple(Fraction(v) for v in self.grid))
        if not any(self.grid):
            raise ValueError("value grid needs a nonzero entry")


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    trials: int
    failures: tuple = ()
    constants: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "failures": [_ser(f) for f in self.failures],
            "constants": _ser(self.constants),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _ser(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, FinSeq):
        return to_entries(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, N.NormValue):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _ser(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_ser(v) for v in x]
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _fail(relation: str, inputs: dict, observed: dict) -> dict:
    return {"relation": relation, "input": inputs, "observed": observed}


# --------------------------------------------------------------------------
# corpus helpers


def rand_seq(rng: random.Random, corpus: CorpusSpec, max_support=None, window=None, grid=None, nonneg=False) -> FinSeq:
    window = corpus.window if window is None else window
    grid = corpus.grid if grid is None else grid
    values = [v for v in grid if v and (v > 0 or not nonneg)]
    lo, hi = corpus.support
    hi = min(hi, window) if max_support is None else min(hi, window, max_support)
    size = rng.randint(min(lo, hi), hi)
    idx = rng.sample(range(1, window + 1), size)
    return FinSeq((n, rng.choice(values)) for n in sorted(idx))


def rand_subset(rng: random.Random, universe) -> frozenset:
    return frozenset(n for n in universe if rng.random() < 0.5)


def rand_perm(rng: random.Random, window: int) -> dict:
    img = list(range(1, window + 1))
    rng.shuffle(img)
    return {n: img[n - 1] for n in range(1, window + 1)}


def _greedy_sets(f: FinSeq, rng: random.Random, limit: int = 256) -> list:
    fam = G.greedy_family(f)
    sets = list(fam)
    if len(sets) > limit:
        sets = rng.sample(sets, limit)
    return sets


def _qth_power(v: N.NormValue, q: int) -> Fraction:
    return v.value**q if v.is_exact else v.power


# --------------------------------------------------------------------------
# suite registry


@dataclass(frozen=True)
class Suite:
    id: str
    module: str
    invariant: str
    trial: Callable
    cases: Optional[int] = None  # deterministic suites have a fixed number of cases
    prepare: Optional[Callable] = None
    finalize: Optional[Callable] = None
    extra: bool = False  # an acceptance check not tied to a listed invariant


REGISTRY: dict = {}


def suite(id, module, invariant, cases=None, prepare=None, finalize=None, extra=False):
    def deco(fn):
        if id in REGISTRY:
            raise ValueError(f"duplicate suite {id}")
        REGISTRY[id] = Suite(id, module, invariant, fn, cases, prepare, finalize, extra)
        return fn

    return deco


# ---- seq_core


@suite("TWISTED-ID", "seq_core", "twisted three-set identity for indicator sums")
def _twisted(rng, corpus, i, ctx):
    f, g = rand_seq(rng, corpus), rand_seq(rng, corpus)
    U = range(1, corpus.window + 1)
    A, B, D = rand_subset(rng, U), rand_subset(rng, U), rand_subset(rng, U)
    lhs = sum_over(f + g, A) - sum_over(f, B) - sum_over(g, D)
    rhs = sum_over(f, (A | D) - B) + sum_over(g, (A | B) - D) - sum_over(f + g, (B | D) - A)
    if lhs - rhs != 0:
        return [_fail("residue == 0", {"f": f, "g": g, "A": A, "B": B, "D": D}, {"residue": lhs - rhs})], None
    return [], None


@suite("BS-EST", "seq_core", "D(f+g)(m+n) <= D(f)(m) + D(g)(n)")
def _bs_est(rng, corpus, i, ctx):
    f, g = rand_seq(rng, corpus), rand_seq(rng, corpus)
    Df, Dg, Ds = dec_rearrangement(f), dec_rearrangement(g), dec_rearrangement(f + g)
    for m in range(1, len(f) + 2):
        for n in range(1, len(g) + 2):
            if dec_at(Ds, m + n) > dec_at(Df, m) + dec_at(Dg, n):
                return [_fail("D(f+g)(m+n) <= D(f)(m)+D(g)(n)", {"f": f, "g": g, "m": m, "n": n}, {})], None
    return [], None


@suite("DREARR", "seq_core", "decreasing rearrangement is sign and permutation invariant")
def _drearr(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    pi = rand_perm(rng, corpus.window)
    tau = SignVector({n: rng.choice((1, -1)) for n in range(1, corpus.window + 1)})
    g = multiply(permute(f, pi), tau)
    if dec_rearrangement(g) != dec_rearrangement(f):
        return [_fail("D(M_tau P_pi f) == D(f)", {"f": f, "pi": pi, "tau": tau.signs}, {})], None
    return [], None


@suite("PROJ-SUM", "seq_core", "sum over B of the projection onto A equals sum over A and B")
def _proj_sum(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    U = range(1, corpus.window + 1)
    A, B = rand_subset(rng, U), rand_subset(rng, U)
    if sum_over(project(f, A), B) != sum_over(f, A & B):
        return [_fail("sum_B(S_A f) == sum_{A&B}(f)", {"f": f, "A": A, "B": B}, {})], None
    return [], None


# ---- greedy_engine


@suite("G-UNION", "greedy_engine", "union of two greedy sets is greedy")
def _g_union(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus, max_support=6)
    sets = list(G.greedy_family(f))
    for A in sets:
        for B in sets:
            if not G.is_greedy_set(f, A | B):
                return [_fail("A|B greedy", {"f": f, "A": A, "B": B}, {})], None
    return [], None


@suite("G-PROJ", "greedy_engine", "A greedy for f and B greedy for the residual give A|B greedy for f")
def _g_proj(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus, max_support=6)
    for A in G.greedy_family(f):
        r = f - project(f, A)
        for B in G.greedy_family(r):
            if not G.is_greedy_set(f, A | B):
                return [_fail("A|B greedy", {"f": f, "A": A, "B": B}, {})], None
    return [], None


@suite("G-ENUM", "greedy_engine", "greedy_sets_of_size is sound and complete")
def _g_enum(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    supp = f.indices()
    for m in range(len(f) + 1):
        got = list(G.greedy_sets_of_size(f, m))
        want = {frozenset(S) for S in combinations(supp, m) if G.is_greedy_set(f, S)}
        if len(got) != len(set(got)) or set(got) != want:
            return [_fail("enumeration == brute force", {"f": f, "m": m}, {"got": got, "want": want})], None
    return [], None


@suite("G-MONO", "greedy_engine", "max_greedy_within is monotone in k")
def _g_mono(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    prev = frozenset()
    for k in range(corpus.window + 1):
        A = G.max_greedy_within(f, k)
        if not (prev <= A and G.is_greedy_set(f, A) and all(n <= k for n in A)):
            return [_fail("A_k greedy, inside [1,k], increasing", {"f": f, "k": k}, {"A_k": A, "A_prev": prev})], None
        prev = A
    return [], None


# ---- norms


@lru_cache(maxsize=1)
def _oracle_small_cases() -> tuple:
    cases = [FinSeq()]
    for size in (1, 2):
        for idx in combinations(range(1, ORACLE_WINDOW + 1), size):
            for vals in _product(ORACLE_GRID, size):
                cases.append(FinSeq(zip(idx, vals)))
    return tuple(cases)


def _product(values, r):
    from itertools import product

    return product(values, repeat=r)


@suite("ORACLE-EQ", "norms", "fast B and A norms agree with brute-force enumeration")
def _oracle_eq(rng, corpus, i, ctx):
    small = _oracle_small_cases()
    if i < len(small):
        f = small[i]
    else:
        size = rng.randint(0, ORACLE_MAX_SUPPORT)
        idx = sorted(rng.sample(range(1, ORACLE_WINDOW + 1), size))
        f = FinSeq((n, rng.choice(ORACLE_GRID)) for n in idx)
    b, bo = N.norm_B(f), N.norm_B_oracle(f)
    a, ao = N.norm_A(f), N.norm_A_oracle(f)
    if b != bo or a != ao:
        return [_fail("fast == oracle", {"f": f}, {"B": b, "B_oracle": bo, "A": a, "A_oracle": ao})], None
    return [], None


@suite("B0-LE-L1", "norms", "B norm is at most l1, with equality for nonnegative input")
def _b0_le_l1(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    out = []
    if N.norm_B(f) > N.l1(f):
        out.append(_fail("||f||_B <= ||f||_1", {"f": f}, {"B": N.norm_B(f), "l1": N.l1(f)}))
    p = abs(f)
    if N.norm_B(p) != N.l1(p):
        out.append(_fail("||f||_B == ||f||_1 for f >= 0", {"f": p}, {"B": N.norm_B(p), "l1": N.l1(p)}))
    return out, None


@suite("B-SCHAUDER", "norms", "interval projections do not increase the B norm")
def _b_schauder(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    nf = N.norm_B(f)
    W = corpus.window
    for lo in range(1, W + 1):
        for hi in range(lo, W + 1):
            v = N.norm_B(project(f, range(lo, hi + 1)))
            if v > nf:
                return [_fail("||S_J f||_B <= ||f||_B", {"f": f, "J": [lo, hi]}, {"SJ": v, "f": nf})], None
    return [], None


@suite("QG-B", "norms", "greedy residuals do not increase the B norm")
def _qg_b(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    nf = N.norm_B(f)
    for A in _greedy_sets(f, rng):
        v = N.norm_B(f - project(f, A))
        if v > nf:
            return [_fail("||f - S_A f||_B <= ||f||_B", {"f": f, "A": A}, {"residual": v, "f": nf})], None
    return [], None


@suite("B1-SUBADD", "norms", "quasi-triangle inequality for B and A with weak-l1 correction; sigma_g additive")
def _b1_subadd(rng, corpus, i, ctx):
    f, g = rand_seq(rng, corpus), rand_seq(rng, corpus)
    L = lambda h: N.lorentz(h, INF).value
    corr = 2 * (L(f + g) + L(f) + L(g))
    out = []
    for name, nrm in (("B", N.norm_B), ("A", N.norm_A)):
        lhs, rhs = nrm(f + g), corr + nrm(f) + nrm(g)
        if lhs > rhs:
            out.append(_fail(f"{name} quasi-triangle", {"f": f, "g": g}, {"lhs": lhs, "rhs": rhs}))
    if N.sigma_g(f + g) != N.sigma_g(f) + N.sigma_g(g):
        out.append(_fail("sigma_g additive", {"f": f, "g": g}, {}))
    return out, None


@suite("BS-LEM", "norms", "rho(f+g, 1+k1+k2) <= 2(rho(f,k1) + rho(g,k2))")
def _bs_lem(rng, corpus, i, ctx):
    f, g = rand_seq(rng, corpus), rand_seq(rng, corpus)
    rho = lambda h, k: N.rho_1q(h, k, INF).value
    for k1 in range(len(f) + 1):
        for k2 in range(len(g) + 1):
            lhs, rhs = rho(f + g, 1 + k1 + k2), 2 * (rho(f, k1) + rho(g, k2))
            if lhs > rhs:
                return [_fail("rho inequality", {"f": f, "g": g, "k1": k1, "k2": k2}, {"lhs": lhs, "rhs": rhs})], None
    return [], None


@suite("B99", "norms", "sums off a greedy set are bounded by |B| rho(f,k)/(1+|A|-k)")
def _b99(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    U = range(1, corpus.window + 1)
    for A in _greedy_sets(f, rng, 64):
        B = rand_subset(rng, [n for n in U if n not in A])
        lhs = abs(sum_over(f, B))
        for k in range(len(A) + 1):
            rhs = Fraction(len(B), 1 + len(A) - k) * N.rho_1q(f, k, INF).value
            if lhs > rhs:
                return [_fail("tail bound", {"f": f, "A": A, "B": B, "k": k}, {"lhs": lhs, "rhs": rhs})], None
    return [], None


@suite("ACONV", "norms", "sigma_g of a greedy residual equals the defect; sup over supersets is monotone")
def _aconv(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    sets = list(G.greedy_family(f))
    for A in sets:
        if N.sigma_g(f - project(f, A)) != N.sigma_g_defect(f, A):
            return [_fail("sigma_g(f - S_A f) == sigma_g(f, A)", {"f": f, "A": A}, {})], None
    prev = None
    for k in range(corpus.window + 1):
        A = G.max_greedy_within(f, k)
        v = max(abs(N.sigma_g_defect(f, B)) for B in sets if A <= B)
        if prev is not None and v > prev:
            return [_fail("sup over supersets nonincreasing", {"f": f, "k": k}, {"prev": prev, "now": v})], None
        prev = v
    return [], None


SYMMETRY_WITNESS = (FinSeq.from_values([2, 2, -1]), {1: 1, 2: 3, 3: 2})


@suite("SYMMETRY", "norms", "A and Lorentz norms are permutation invariant; B is not (stored witness)")
def _symmetry(rng, corpus, i, ctx):
    out = []
    if i == 0:
        f, pi = SYMMETRY_WITNESS
        if N.norm_B(permute(f, pi)) == N.norm_B(f):
            out.append(_fail("stored witness separates B", {"f": f, "pi": pi}, {}))
    f = rand_seq(rng, corpus)
    pi = rand_perm(rng, corpus.window)
    g = permute(f, pi)
    if N.norm_A(g) != N.norm_A(f):
        out.append(_fail("norm_A invariant", {"f": f, "pi": pi}, {}))
    for q in (1, 2, INF):
        if N.lorentz(g, q) != N.lorentz(f, q):
            out.append(_fail(f"lorentz q={q} invariant", {"f": f, "pi": pi}, {}))
    return out, None


EMBED_QS = (2, 3)


@suite("EMBED-CQ", "norms", "weak-l1 is dominated by the (1,q) Lorentz norm; constant measured")
def _embed_cq(rng, corpus, i, ctx):
    f = rand_seq(rng, corpus)
    out, ratios = [], {}
    if not f:
        return out, None
    w = N.lorentz(f, INF).value
    for q in EMBED_QS:
        P = _qth_power(N.lorentz(f, q), q)
        ratios[q] = w**q / P
        if ratios[q] > q:  # m^q <= q * sum_{j<=m} j^(q-1)
            out.append(_fail(f"weak <= q^(1/q) lorentz q={q}", {"f": f}, {"ratio^q": ratios[q]}))
    return out, ratios


def _embed_finalize(measures, corpus, ctx):
    consts = {}
    for q in EMBED_QS:
        vals = [m[q] for m in measures if m]
        if vals:
            consts[f"C_{q}"] = N.NormValue.qth_power(max(vals), q)
    return consts, []


def _weak(h):
    return N.lorentz(h, INF).value


def _pconv_prepare(corpus):
    kappa = Fraction(1)
    for j in range(corpus.trials):
        rng = random.Random(f"{corpus.seed}/AR-PCONV/kappa/{j}")
        f, g = rand_seq(rng, corpus), rand_seq(rng, corpus)
        den = _weak(f) + _weak(g)
        if den:
            kappa = max(kappa, _weak(f + g) / den)
    return kappa


def _mpf(x: Fraction):
    return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))


@suite(
    "AR-PCONV",
    "norms",
    "p-convexity with constant 4^(1/p), p from the measured quasi-triangle constant",
    prepare=_pconv_prepare,
)
def _ar_pconv(rng, corpus, i, ctx):
    kappa = ctx
    with gmpy2.context(gmpy2.get_context(), precision=200):
        p = 1 / (1 + gmpy2.log2(_mpf(kappa)))
        fs = [rand_seq(rng, corpus) for _ in range(rng.randint(2, 6))]
        total = FinSeq()
        for f in fs:
            total = total + f
        lhs = _mpf(_weak(total))
        s = sum((_mpf(_weak(f)) ** p for f in fs), gmpy2.mpfr(0))
        rhs = gmpy2.mpfr(4) ** (1 / p) * s ** (1 / p)
        ok = lhs <= rhs
    if not ok:
        return [_fail("||sum f_j|| <= 4^(1/p) (sum ||f_j||^p)^(1/p)", {"fs": fs}, {"kappa": kappa})], None
    return [], None


def _pconv_finalize(measures, corpus, kappa):
    p = 1 / (1 + math.log2(kappa))
    return {"kappa": kappa, "p": f"{p:.12f}"}, []


BNORM3_POS = tuple(Fraction(p, q) for q in (1, 2, 3, 4, 8, 64) for p in range(1, q + 1))


def rand_three_block(rng: random.Random) -> tuple:
    """``(t, g)`` with ``g >= 0`` on indices ``>= 3``, entries at most 1 and total mass at least 1."""
    vals = {}
    n = 3
    while sum(vals.values(), Fraction(0)) < 1 or rng.random() < 0.5:
        n += rng.randint(0, 2)
        vals[n] = rng.choice(BNORM3_POS)
        n += 1
    t = Fraction(1) if rng.random() < 0.25 else Fraction(rng.randrange(64), 64)
    return t, FinSeq(vals)


@suite("BNORM3", "norms", "three-block exact formula for e1 - t e2 + g", extra=True)
def _bnorm3(rng, corpus, i, ctx):
    t, g = rand_three_block(rng)
    got, want = N.norm_B(C.three_block(t, g)), C.three_block_predicted(t, g)
    if got != want:
        return [_fail("norm_B == predicted", {"t": t, "g": g}, {"got": got, "want": want})], None
    return [], None


# ---- envelope

ENV_WINDOW = 6
ENV_SPACE = N.SpaceSpec(INF)


def _env_target(rng, corpus):
    f = FinSeq()
    while not f:
        f = rand_seq(rng, corpus, max_support=4, window=ENV_WINDOW)
    return f, rng.choice(("B", "A"))


@suite("ENV-CERT", "envelope", "both certificates replay exactly")
def _env_cert(rng, corpus, i, ctx):
    f, which = _env_target(rng, corpus)
    b = E.envelope_interval(f, ENV_SPACE, which)
    if not b.verify(f):
        return [_fail("certificates replay", {"f": f, "which": which}, {"lower": b.lower, "upper": b.upper})], None
    return [], None


@suite("ENV-ORDER", "envelope", "lower <= upper")
def _env_order(rng, corpus, i, ctx):
    f, which = _env_target(rng, corpus)
    b = E.envelope_interval(f, ENV_SPACE, which)
    if N.NormValue.exact(b.lower) > b.upper:
        return [_fail("lower <= upper", {"f": f, "which": which}, {"lower": b.lower, "upper": b.upper})], None
    return [], None


@suite("ENV-MONO", "envelope", "larger dictionaries and dual families tighten the bounds")
def _env_mono(rng, corpus, i, ctx):
    f, which = _env_target(rng, corpus)
    small = E.coordinate_dictionary(f.indices(), ENV_SPACE, which)
    big = small + E.piece_dictionary(f, ENV_SPACE, which)
    u_small, _ = E.upper_bound(f, small)
    u_big, _ = E.upper_bound(f, big)
    full = E.default_dual_family(f, which)
    sub = [phi for phi in full if rng.random() < 0.5] or full[:1]
    l_sub, _ = E.lower_bound(f, which, sub)
    l_full, _ = E.lower_bound(f, which, full)
    out = []
    if u_big > u_small:
        out.append(_fail("upper monotone in dictionary", {"f": f, "which": which}, {"small": u_small, "big": u_big}))
    if l_sub > l_full:
        out.append(_fail("lower monotone in duals", {"f": f, "which": which}, {"sub": l_sub, "full": l_full}))
    return out, None


UCC_MS = (4, 8, 16, 32, 64)


@suite("ENV-UCC", "envelope", "cyclic upper bound below D m / s_m, even-index lower bound m/2, ratio increasing", cases=len(UCC_MS))
def _env_ucc(rng, corpus, i, ctx):
    m = UCC_MS[i]
    w = E.ucc_witness(m, ENV_SPACE, "B")
    out = []
    if w["upper_alt"] > w["bound"]:
        out.append(_fail("upper <= D m / s_m", {"m": m}, {"upper": w["upper_alt"], "bound": w["bound"]}))
    if w["lower_even"] != m // 2:
        out.append(_fail("lower(even indicator) == floor(m/2)", {"m": m}, {"lower": w["lower_even"]}))
    ratio = Fraction(m // 2) / w["upper_alt"].value
    return out, {"m": m, "ratio": ratio, "upper": w["upper_alt"], "bound": w["bound"]}


def _ucc_finalize(measures, corpus, ctx):
    ms = [x for x in measures if x]
    out = []
    for a, b in zip(ms, ms[1:]):
        if not a["ratio"] < b["ratio"]:
            out.append(_fail("ratio strictly increasing", {"m": [a["m"], b["m"]]}, {"ratios": [a["ratio"], b["ratio"]]}))
    return {f"ratio_{x['m']}": x["ratio"] for x in ms}, out


def vertex_enumeration(A, b, c) -> Optional[Fraction]:
    """Minimum of ``c.x`` over basic feasible solutions of ``A x = b, x >= 0``; ``None`` if infeasible."""
    m, n = len(A), len(c)
    best = None
    for r in range(0, min(m, n) + 1):
        for cols in combinations(range(n), r):
            x = _basic_solution(A, b, cols)
            if x is None or any(v < 0 for v in x):
                continue
            val = sum((c[j] * v for j, v in zip(cols, x)), Fraction(0))
            best = val if best is None or val < best else best
    return best


def _basic_solution(A, b, cols):
    """Unique solution of ``A[:, cols] x = b`` if the columns are independent and ``b`` is in their span."""
    m, r = len(A), len(cols)
    rows = [[Fraction(A[i][j]) for j in cols] + [Fraction(b[i])] for i in range(m)]
    piv_row = 0
    for col in range(r):
        p = next((k for k in range(piv_row, m) if rows[k][col]), None)
        if p is None:
            return None
        rows[piv_row], rows[p] = rows[p], rows[piv_row]
        pr = rows[piv_row]
        pr[:] = [v / pr[col] for v in pr]
        for k in range(m):
            if k != piv_row and rows[k][col]:
                fac = rows[k][col]
                rows[k] = [a - fac * v for a, v in zip(rows[k], pr)]
        piv_row += 1
    if any(rows[k][-1] for k in range(piv_row, m)):
        return None
    return [rows[k][-1] for k in range(r)]


@suite("LP-OPT", "envelope", "simplex value equals vertex enumeration on small dictionaries")
def _lp_opt(rng, corpus, i, ctx):
    small = CorpusSpec(corpus.seed, corpus.trials, (1, 4), 4, corpus.grid)
    vecs = []
    while len(vecs) < 3:
        v = rand_seq(rng, small)
        if v and v not in vecs and -v not in vecs:
            vecs.append(v)
    d = E.atoms_from_vectors(vecs, ENV_SPACE, "B")
    f = rand_seq(rng, small)
    rows = sorted(set(f.indices()).union(*(a.vector.support for a in d.atoms)))
    A = [[a.vector[n] for a in d.atoms] for n in rows]
    want = vertex_enumeration(A, [f[n] for n in rows], [a.cost for a in d.atoms]) if rows else Fraction(0)
    try:
        got = E.upper_bound(f, d)[0].value
    except E.DictionaryError:
        got = None
    if got != want:
        return [_fail("simplex == vertex enumeration", {"f": f, "atoms": vecs}, {"simplex": got, "vertices": want})], None
    return [], None


# ---- constructions

H0_A_DEPTHS = (1, 2, 3, 4, 5, 6)
H0_B_DEPTHS = (2, 3, 4, 5, 6, 7)


@suite("H0-A-DIVERGE", "constructions", "preset A truncation norms grow at least like (3/2)^K", cases=len(H0_A_DEPTHS))
def _h0_a_diverge(rng, corpus, i, ctx):
    K = H0_A_DEPTHS[i]
    h0, _ = C.build_h0(C.H0Params.preset_a(K), K)
    v = N.norm_B(h0)
    if v < Fraction(3, 2) ** K:
        return [_fail("norm_B(h0^K) >= (3/2)^K", {"K": K}, {"norm": v})], {"K": K, "norm": v}
    return [], {"K": K, "norm": v}


def _a_div_finalize(measures, corpus, ctx):
    return {f"norm_K{x['K']}": x["norm"] for x in measures if x}, []


@suite("H0-B-BOUNDED", "constructions", "preset B truncation norms are constant from K = 5 on", cases=len(H0_B_DEPTHS))
def _h0_b_bounded(rng, corpus, i, ctx):
    K = H0_B_DEPTHS[i]
    h0, _ = C.build_h0(C.H0Params.preset_b(K), K)
    return [], {"K": K, "norm": N.norm_B(h0)}


def _b_bounded_finalize(measures, corpus, ctx):
    vals = {x["K"]: x["norm"] for x in measures if x}
    out = []
    tail = [K for K in sorted(vals) if K >= 5]
    for a, b in zip(tail, tail[1:]):
        if vals[a] != vals[b]:
            out.append(_fail("norm constant from K=5", {"K": [a, b]}, {"norms": [vals[a], vals[b]]}))
    return {f"norm_K{K}": v for K, v in sorted(vals.items())}, out


OSC_DEPTH = 6


@lru_cache(maxsize=1)
def _h0_a_full():
    return C.build_h0(C.H0Params.preset_a(OSC_DEPTH), OSC_DEPTH)


@suite("H0-A-OSC", "constructions", "preset A greedy-net oscillation on J_k^- is at least (3/2)^k", cases=OSC_DEPTH)
def _h0_a_osc(rng, corpus, i, ctx):
    k = i + 1
    h0, meta = _h0_a_full()
    I_next = meta.I[k - 1] | meta.J[k - 1]
    osc = sum_over(h0, I_next) - sum_over(h0, meta.G[k - 1])
    minus = sum_over(h0, meta.J_minus[k - 1])
    out = []
    if osc != minus or abs(osc) < Fraction(3, 2) ** k:
        out.append(_fail("oscillation == sum over J_k^- and >= (3/2)^k", {"k": k}, {"osc": osc, "minus": minus}))
    if not (G.is_greedy_set(h0, meta.I[k - 1]) and G.is_greedy_set(h0, meta.G[k - 1])):
        out.append(_fail("I_k and G_k greedy", {"k": k}, {}))
    return out, None


G0_CASES = tuple(("A", K) for K in range(1, 7)) + tuple(("B", K) for K in range(1, 8))


@suite("G0-MASS", "constructions", "g0 total mass equals sum m_k eps_k", cases=len(G0_CASES))
def _g0_mass(rng, corpus, i, ctx):
    preset, K = G0_CASES[i]
    params = C.H0Params.named(preset, K)
    _, meta = C.build_h0(params, K)
    want = sum((params.m(k) * params.eps(k) for k in range(1, K + 1)), Fraction(0))
    got = sum(meta.g0.values(), Fraction(0))
    if got != want:
        return [_fail("mass(g0) == sum m_k eps_k", {"preset": preset, "K": K}, {"got": got, "want": want})], None
    return [], None


def rand_leibniz(rng: random.Random) -> C.LeibnizData:
    """Random Leibnizian data: values strictly decreasing along the blocks, block sums nonincreasing."""
    while True:
        nblocks = rng.randint(1, 4)
        sizes = [rng.randint(1, 3) for _ in range(nblocks)]
        pool = sorted({Fraction(rng.randint(1, 64), rng.choice((1, 2, 4, 8))) for _ in range(3 * sum(sizes))}, reverse=True)
        if len(pool) < sum(sizes):
            continue
        vals = sorted(rng.sample(pool, sum(sizes)), reverse=True)
        entries, blocks, n, pos = {}, [], 1, 0
        for s in sizes:
            n += rng.randint(0, 1)
            lo = n
            for _ in range(s):
                entries[n] = vals[pos]
                pos += 1
                n += 1 + (rng.random() < 0.2)
            blocks.append((lo, n - 1))
            n += 1
        try:
            return C.leibniz_check(FinSeq(entries), blocks)
        except C.ConstructionError:
            continue


@suite("LEIBNIZ", "constructions", "alternating vectors have norm alpha; subfamilies separate by omega")
def _leibniz(rng, corpus, i, ctx):
    d = rand_leibniz(rng)
    out = []
    f = C.alternating_from_leibniz(d)
    if N.norm_B(f) != d.alpha:
        out.append(_fail("norm_B(alternating) == alpha", {"g": d.g, "blocks": [(J.lo, J.hi) for J in d.blocks]}, {"norm": N.norm_B(f), "alpha": d.alpha}))
    K = len(d.blocks)
    sums = d.block_sums()
    Ns = [frozenset(k for k in range(1, K + 1) if rng.random() < 0.5) for _ in range(4)]
    for Nset in Ns:
        if N.norm_B(C.leibniz_subfamily(d, Nset)) > d.alpha:
            out.append(_fail("norm_B(f_N) <= alpha", {"g": d.g, "N": Nset}, {}))
    for a, b in combinations(Ns, 2):
        if a == b:
            continue
        gap = N.norm_B(C.leibniz_subfamily(d, a) - C.leibniz_subfamily(d, b))
        need = max(sums[k - 1] for k in a ^ b)
        if gap < need or need < d.omega_trunc:
            out.append(_fail("||f_N - f_M||_B >= max block sum >= omega", {"g": d.g, "N": a, "M": b}, {"gap": gap, "need": need}))
    return out, None


DISCONT_CASES = tuple(
    (Nn, t)
    for Nn in (16, 32)
    for t in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10), Fraction(99, 100), Fraction(1))
)


@suite("DISCONT", "constructions", "combined norm of G(t) matches the prediction on a t grid including 1", cases=len(DISCONT_CASES))
def _discont(rng, corpus, i, ctx):
    Nn, t = DISCONT_CASES[i]
    try:
        C.discontinuity_witness(Nn, t)
    except C.ConstructionError as exc:
        return [_fail("combined norm == predicted", {"N": Nn, "t": t}, {"error": str(exc)})], None
    return [], None


FINALIZERS = {
    "EMBED-CQ": _embed_finalize,
    "AR-PCONV": _pconv_finalize,
    "ENV-UCC": _ucc_finalize,
    "H0-A-DIVERGE": _a_div_finalize,
    "H0-B-BOUNDED": _b_bounded_finalize,
}
for _sid, _fin in FINALIZERS.items():
    REGISTRY[_sid] = replace(REGISTRY[_sid], finalize=_fin)


# --------------------------------------------------------------------------
# running


def _run_trial(args):
    sid, corpus, i, ctx = args
    s = REGISTRY[sid]
    rng = random.Random(f"{corpus.seed}/{sid}/{i}")
    failures, measure = s.trial(rng, corpus, i, ctx)
    return [{"trial": i, **f} for f in failures], measure


def n_trials(sid: str, corpus: CorpusSpec) -> int:
    s = REGISTRY[sid]
    return corpus.trials if s.cases is None else min(corpus.trials, s.cases)


def run_suite(sid: str, corpus: CorpusSpec = CorpusSpec(), workers: int = 1) -> SuiteReport:
    if sid not in REGISTRY:
        raise UnknownSuite(f"unknown suite {sid!r}")
    s = REGISTRY[sid]
    n = n_trials(sid, corpus)
    ctx = s.prepare(corpus) if s.prepare else None
    jobs = [(sid, corpus, i, ctx) for i in range(n)]
    if workers > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=max(1, n // (4 * workers))))
    else:
        results = [_run_trial(j) for j in jobs]
    failures = [f for fs, _ in results for f in fs]
    constants = {}
    if s.finalize:
        constants, extra = s.finalize([m for _, m in results], corpus, ctx)
        failures += [{"trial": None, **f} for f in extra]
    return SuiteReport(sid, corpus.seed, n, tuple(failures), constants)


def run_all(corpus: CorpusSpec = CorpusSpec(), workers: int = 1) -> list:
    return [run_suite(sid, corpus, workers) for sid in REGISTRY]


def replay(sid: str, corpus: CorpusSpec, trial: int) -> list:
    """Re-run one trial and return its failures."""
    s = REGISTRY[sid]
    ctx = s.prepare(corpus) if s.prepare else None
    return _run_trial((sid, corpus, trial, ctx))[0]


def write_report(reports, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")
