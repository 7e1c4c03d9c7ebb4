from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from greedylab.greedy import (
    count_greedy_sets_of_size,
    greedy_family,
    greedy_sets_of_size,
    is_greedy_set,
    max_greedy_within,
    tga_residual,
)
from greedylab.seq import FinSeq, ValidationError, project

from helpers import brute_greedy_sets, brute_is_greedy, finseqs

F = FinSeq.from_values


def test_family_examples():
    assert greedy_family(F([3, 1, 2])).levels == ((3, {1}), (2, {3}), (1, {2}))
    assert greedy_family(F([1, -1, 1, -1])).levels == ((1, {1, 2, 3, 4}),)
    assert greedy_family(FinSeq()).levels == ()


def test_is_greedy_examples():
    f = F([3, 1, 2])
    assert is_greedy_set(f, {1, 3})
    assert not is_greedy_set(f, {2})
    assert is_greedy_set(f, {1, 2, 3, 9})
    # an off-support index inside A forces the whole support in
    assert not is_greedy_set(f, {1, 9})


def test_sets_of_size_examples():
    assert set(greedy_sets_of_size(F([1, -1]), 1)) == {frozenset({1}), frozenset({2})}
    assert greedy_sets_of_size(F([3, 1, 2]), 2) == [frozenset({1, 3})]
    assert len(greedy_sets_of_size(F([1, -1, 1, -1]), 2)) == 6
    with pytest.raises(ValidationError, match="size exceeds support"):
        greedy_sets_of_size(F([1]), 2)


def test_large_family_is_lazy():
    f = FinSeq((n, 1) for n in range(1, 31))
    assert count_greedy_sets_of_size(f, 15) > 10**6
    it = greedy_sets_of_size(f, 15)
    assert not isinstance(it, list)
    assert len(next(it)) == 15


def test_max_greedy_within_examples():
    assert max_greedy_within(F([3, 1, 2]), 2) == {1}
    assert max_greedy_within(F([3, 1, 2]), 3) == {1, 2, 3}
    assert max_greedy_within(F([1, -1, 1, -1]), 2) == {1, 2}


def test_residual_examples():
    f = F([3, 1, 2])
    assert tga_residual(f, {1}) == FinSeq({2: 1, 3: 2})
    assert tga_residual(f, {1, 2, 3}) == FinSeq()
    assert tga_residual(f, set()) == f
    with pytest.raises(ValidationError, match="not a greedy set"):
        tga_residual(f, {2})


@given(finseqs(), st.sets(st.integers(1, 9)))
def test_is_greedy_matches_definition(f, A):
    assert is_greedy_set(f, A) == brute_is_greedy(f, A)


@given(finseqs(max_size=7))
def test_family_matches_brute_force(f):
    fam = list(greedy_family(f))
    assert len(fam) == len(set(fam)) == greedy_family(f).count()
    assert set(fam) == set(brute_greedy_sets(f))


@given(finseqs(max_size=7))
def test_sets_of_size_sound_and_complete(f):
    for m in range(len(f) + 1):
        got = greedy_sets_of_size(f, m)
        want = {frozenset(S) for S in combinations(f.indices(), m) if brute_is_greedy(f, S)}
        assert set(got) == want and len(got) == len(want) == count_greedy_sets_of_size(f, m)


@given(finseqs(max_size=5))
def test_union_and_projection_closure(f):
    fam = list(greedy_family(f))
    for A in fam:
        for B in fam:
            assert is_greedy_set(f, A | B)
        r = f - project(f, A)
        for B in greedy_family(r):
            assert is_greedy_set(f, A | B)


@given(finseqs())
def test_max_greedy_within_monotone(f):
    prev = frozenset()
    for k in range(0, 10):
        A = max_greedy_within(f, k)
        assert prev <= A and is_greedy_set(f, A) and all(n <= k for n in A)
        # maximal: no greedy subset of [1,k] is larger
        assert all(len(B) <= len(A) for B in brute_greedy_sets(f) if all(n <= k for n in B))
        prev = A
