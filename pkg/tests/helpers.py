"""Independent brute-force oracles and hypothesis strategies shared by the tests.

The oracles restate each definition with plain loops and do not call the
library's fast paths.
"""

from fractions import Fraction
from itertools import chain, combinations

from hypothesis import strategies as st

from greedylab.seq import FinSeq

GRID = [Fraction(v) for v in ("1/4", "1/3", "1/2", "1", "3/2", "2")]
GRID = GRID + [-v for v in GRID]


def finseqs(max_size=6, window=8, values=GRID, min_size=0):
    @st.composite
    def build(draw):
        idx = draw(st.lists(st.integers(1, window), min_size=min_size, max_size=max_size, unique=True))
        vals = draw(st.lists(st.sampled_from(values), min_size=len(idx), max_size=len(idx)))
        return FinSeq(zip(idx, vals))

    return build()


def nonneg_finseqs(max_size=6, window=8):
    return finseqs(max_size, window, [v for v in GRID if v > 0])


def subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))


def brute_is_greedy(f, A):
    A = set(A)
    return all(abs(f[n]) >= abs(f[k]) for n in A for k in f.support - A)


def brute_greedy_sets(f):
    return [frozenset(S) for S in subsets(f.indices()) if brute_is_greedy(f, S)]


def brute_norm_B(f):
    if not f:
        return Fraction(0)
    top = f.max_index()
    best = Fraction(0)
    for A in brute_greedy_sets(f):
        for lo in range(1, top + 1):
            for hi in range(lo, top + 1):
                s = sum((f[n] for n in range(lo, hi + 1) if n not in A), Fraction(0))
                best = max(best, abs(s))
    return best


def brute_norm_A(f):
    total = sum(f.values(), Fraction(0))
    return max(abs(total - sum((f[n] for n in A), Fraction(0))) for A in brute_greedy_sets(f))


def brute_rho_inf(f, k=0):
    D = sorted((abs(v) for v in f.values()), reverse=True)
    return max([m * D[m + k - 1] for m in range(1, len(D) - k + 1)], default=Fraction(0))


def brute_lorentz_q_power(f, q):
    D = sorted((abs(v) for v in f.values()), reverse=True)
    return sum((m ** (q - 1) * D[m - 1] ** q for m in range(1, len(D) + 1)), Fraction(0))
