from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from greedylab.simplex import LPInfeasible, LPIterationLimit, LPUnbounded, solve_lp
from greedylab.verify import vertex_enumeration


def test_small_known_lp():
    # min x + 2y + 3z  s.t.  x + y + z = 1, x - y = 0
    res = solve_lp([[1, 1, 1], [1, -1, 0]], [1, 0], [1, 2, 3])
    assert res.value == Fraction(3, 2)
    assert res.x == (Fraction(1, 2), Fraction(1, 2), 0)


def test_negative_rhs_and_redundant_row():
    A = [[1, 1], [2, 2], [-1, 0]]
    res = solve_lp(A, [2, 4, -Fraction(1, 2)], [3, 1])
    assert res.value == Fraction(3, 2) + Fraction(3, 2)
    assert res.x == (Fraction(1, 2), Fraction(3, 2))


def test_infeasible_and_unbounded():
    with pytest.raises(LPInfeasible):
        solve_lp([[1, 1]], [-1], [1, 1])
    with pytest.raises(LPUnbounded):
        solve_lp([[1, -1]], [1], [0, -1])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_lp([[1, 2]], [1], [1])


def test_hint_certified_without_pivots():
    res = solve_lp([[1, 0, 1], [0, 1, 1]], [1, 1], [1, 1, 3], basis_hint=[0, 1])
    assert res.iterations == 0 and res.warm_started and res.value == 2
    # a non-optimal hint still reaches the optimum
    res = solve_lp([[1, 0, 1], [0, 1, 1]], [1, 1], [1, 1, 1], basis_hint=[0, 1])
    assert res.value == 1


def test_iteration_cap():
    n = 6
    A = [[1 if i == j or j == n + i else 0 for j in range(2 * n)] for i in range(n)]
    c = [1] * n + [0] * n
    with pytest.raises(LPIterationLimit):
        solve_lp(A, [1] * n, c, basis_hint=list(range(n)), max_iter=1)


small_int = st.integers(-3, 3)


@given(
    st.integers(1, 3).flatmap(
        lambda m: st.tuples(
            st.lists(st.lists(small_int, min_size=5, max_size=5), min_size=m, max_size=m),
            st.lists(small_int, min_size=m, max_size=m),
            st.lists(st.integers(0, 4), min_size=5, max_size=5),
        )
    )
)
def test_matches_vertex_enumeration(data):
    A, b, c = data
    expected = vertex_enumeration(A, b, c)
    if expected is None:
        with pytest.raises(LPInfeasible):
            solve_lp(A, b, c)
    else:
        res = solve_lp(A, b, c)
        assert res.value == expected
        assert all(x >= 0 for x in res.x)
        for row, bi in zip(A, b):
            assert sum(a * x for a, x in zip(row, res.x)) == bi
