import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from greedylab import constructions as C
from greedylab.greedy import is_greedy_set, iter_greedy_sets_of_size
from greedylab.norms import SpaceSpec, norm_B, norm_combined, sigma_g
from greedylab.seq import FinSeq, IntInterval, ValidationError, dec_rearrangement, sum_over
from greedylab.verify import rand_leibniz, rand_three_block

from helpers import brute_norm_B

F = FinSeq.from_values
half = Fraction(1, 2)


def greedy_chain(f):
    order = sorted(f.indices(), key=lambda n: (-abs(f[n]), n))
    return [frozenset(order[:k]) for k in range(len(order) + 1)]


# Leibniz data


def test_leibniz_example():
    d = C.leibniz_check(F([3, 1, 1, half, half]), [(1, 1), (2, 3), (4, 5)])
    f = C.alternating_from_leibniz(d)
    assert f == F([3, -1, -1, half, half])
    assert d.alpha == 3 and d.omega_trunc == 1
    assert norm_B(f) == 3 == brute_norm_B(f)


@pytest.mark.parametrize(
    "g, blocks, clause",
    [
        (F([1, -1]), [(1, 1), (2, 2)], "g must be nonnegative"),
        (F([2, 1]), [(1, 2), (2, 2)], "blocks not right-dominant"),
        (F([2, 1, 1]), [(1, 1), (2, 2)], "support not covered by blocks"),
        (F([1, 1, 1]), [(1, 1), (2, 3)], "block sums not nonincreasing"),
        (F([2, 1, 1]), [(1, 2), (3, 3)], "block values not separated"),
    ],
)
def test_leibniz_check_clauses(g, blocks, clause):
    with pytest.raises(C.ConstructionError) as exc:
        C.leibniz_check(g, blocks)
    assert exc.value.clause == clause


@settings(max_examples=80)
@given(st.integers(0, 10**6))
def test_leibniz_norm_law(seed):
    d = rand_leibniz(random.Random(seed))
    f = C.alternating_from_leibniz(d)
    assert norm_B(f) == d.alpha
    if len(f) <= 7:
        assert brute_norm_B(f) == d.alpha


def test_subfamily_separation():
    d = C.leibniz_check(F([4, 3, 2, 1]), [(1, 1), (2, 2), (3, 3), (4, 4)])
    a, b = C.leibniz_subfamily(d, {1, 3}), C.leibniz_subfamily(d, {2, 3})
    assert a == F([4, 0, -2]) and b == F([0, 3, -2])
    assert norm_B(a - b) >= d.omega_trunc
    with pytest.raises(ValidationError):
        C.leibniz_subfamily(d, {5})


def test_admissible_blocks_harmonic():
    g = FinSeq((n, Fraction(1, n)) for n in range(1, 200))
    d = C.build_admissible(g, 1, 3)
    assert [(J.lo, J.hi) for J in d.blocks] == [(1, 2), (4, 12), (13, 39)]
    for k, s in enumerate(d.block_sums(), 1):
        lo, hi = C.admissible_window(k, Fraction(1))
        assert lo <= s <= hi
    with pytest.raises(C.ConstructionError) as exc:
        C.build_admissible(FinSeq((n, Fraction(1, n)) for n in range(1, 10)), 1, 3)
    assert exc.value.clause == "insufficient tail mass"
    with pytest.raises(ValidationError):
        C.build_admissible(F([1, 2]), 1, 1)


# three-block witness


@settings(max_examples=80)
@given(st.integers(0, 10**6))
def test_three_block_formula(seed):
    t, g = rand_three_block(random.Random(seed))
    f = C.three_block(t, g)
    assert norm_B(f) == C.three_block_predicted(t, g)


def test_discontinuity_witness():
    for t in (0, half, Fraction(9, 10), Fraction(99, 100), 1):
        G, pred = C.discontinuity_witness(32, t)
        assert norm_combined(G, SpaceSpec(), "B") == pred
    _, p1 = C.discontinuity_witness(32, 1)
    _, p0 = C.discontinuity_witness(32, Fraction(999, 1000))
    assert p1 - p0 == Fraction(999, 1000)
    with pytest.raises(ValidationError):
        C.discontinuity_witness(32, 2)
    with pytest.raises(ValidationError):
        C.three_block(1, F([1]))


# h0 and h


def test_build_c_first_block():
    c = C.build_c(C.H0Params.preset_a(1), 1)
    assert len(c) == 7
    assert c[0] == 1 and c[1] == Fraction(5, 8) and c[6] == half
    assert c[1] - c[5] == Fraction(1, 16)


def test_preset_a_layout():
    h0, meta = C.build_h0(C.H0Params.preset_a(3), 3)
    assert meta.n == (0, 3, 12, 39)
    assert len(h0) == 78
    assert sum(meta.g0.values()) == sum(Fraction(3**k, 4**k) for k in range(1, 4))
    for k in range(1, 4):
        assert is_greedy_set(h0, meta.I[k - 1]) and is_greedy_set(h0, meta.G[k - 1])


def test_preset_a_growth_and_oscillation():
    h0, meta = C.build_h0(C.H0Params.preset_a(6), 6)
    for k in range(1, 7):
        assert abs(sum_over(h0, meta.J_minus[k - 1])) >= Fraction(3, 2) ** k
    for K in range(1, 5):
        h, _ = C.build_h0(C.H0Params.preset_a(K), K)
        assert norm_B(h) >= Fraction(3, 2) ** K


PRESET_B_NORMS = {
    2: Fraction(79, 64),
    3: Fraction(347, 256),
    4: Fraction(1459, 1024),
    5: Fraction(5987, 4096),
    6: Fraction(24259, 16384),
    7: Fraction(97667, 65536),
}


def test_preset_b_truncation_norms():
    for K, want in PRESET_B_NORMS.items():
        h0, meta = C.build_h0(C.H0Params.preset_b(K), K)
        assert norm_B(h0) == want < Fraction(3, 2)
        for k in range(1, K + 1):
            p = C.H0Params.preset_b(K)
            assert C.max_subset_sum(h0, meta.J[k - 1]) <= 2 * p.m(k) * p.b(k - 1)


def test_build_h_structure():
    params = C.H0Params.preset_b(5)
    h0, _ = C.build_h0(params, 5)
    h, meta = C.build_h(params, 5)
    assert sigma_g(h) == 0
    assert len(h) == 2 * len(h0)
    D = dec_rearrangement(h0)
    for A in greedy_chain(h):
        s = sum_over(h, A)
        if len(A) % 2 == 0:
            assert s == 0
        else:
            assert abs(s) == D[(len(A) + 1) // 2 - 1]
    for m in (1, 2, 7, 30):
        for A in iter_greedy_sets_of_size(h, m):
            assert (sum_over(h, A) == 0) == (m % 2 == 0)


def test_params_validation():
    with pytest.raises(ValidationError):
        C.H0Params("X", -1, lambda k: Fraction(1, 2**k), lambda k: 1, lambda k: Fraction(1, 8**k))
    with pytest.raises(C.ConstructionError):
        C.H0Params("X", 2, lambda k: Fraction(1, 2**k), lambda k: 0, lambda k: Fraction(1, 8**k))
    with pytest.raises(C.ConstructionError):
        C.H0Params("X", 2, lambda k: Fraction(1, 2**k), lambda k: 1, lambda k: Fraction(1))
    with pytest.raises(ValidationError):
        C.H0Params.named("Z")
    assert C.H0Params.named("b").K == 7


def test_max_subset_sum():
    assert C.max_subset_sum(F([3, -1, 2, -5]), {1, 2, 3}) == 5
    assert C.max_subset_sum(F([3, -1, 2, -5]), {2, 4}) == 6
