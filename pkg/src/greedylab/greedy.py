"""Greedy sets of finitely supported sequences.

A greedy set of ``f`` inside ``supp(f)`` is a union of the top ``l-1`` modulus
levels plus an arbitrary subset of level ``l``.  :class:`GreedyFamily` stores
that level decomposition, which describes the whole family compactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .seq import FinSeq, ValidationError, project

DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class GreedyFamily:
    levels: tuple  # ((modulus, frozenset), ...) by strictly decreasing modulus

    @property
    def support(self) -> frozenset:
        return frozenset().union(*(members for _, members in self.levels))

    def prefix(self, level: int) -> frozenset:
        """Union of the first ``level`` levels."""
        return frozenset().union(*(members for _, members in self.levels[:level]))

    def count(self) -> int:
        """Number of greedy sets contained in the support."""
        return 1 + sum((1 << len(members)) - 1 for _, members in self.levels)

    def __iter__(self) -> Iterator[frozenset]:
        """Every greedy subset of the support, each exactly once."""
        yield frozenset()
        done: frozenset = frozenset()
        for _, members in self.levels:
            ordered = sorted(members)
            for r in range(1, len(ordered) + 1):
                for S in combinations(ordered, r):
                    yield done | frozenset(S)
            done = done | members


def greedy_family(f: FinSeq) -> GreedyFamily:
    by_modulus: dict[Fraction, set] = {}
    for n, v in f:
        by_modulus.setdefault(abs(v), set()).add(n)
    levels = tuple((mod, frozenset(by_modulus[mod])) for mod in sorted(by_modulus, reverse=True))
    return GreedyFamily(levels)


def is_greedy_set(f: FinSeq, A: Iterable[int]) -> bool:
    """True iff ``|a_n| >= |a_k|`` for every ``n`` in ``A`` and every ``k`` outside ``A``.

    ``A`` may contain indices off the support; such an ``A`` is greedy only when it
    swallows the whole support.
    """
    A = frozenset(A)
    if not A:
        return True
    inside = min(abs(f[n]) for n in A)
    outside = max((abs(v) for n, v in f if n not in A), default=Fraction(0))
    return inside >= outside


def iter_greedy_sets_of_size(f: FinSeq, m: int) -> Iterator[frozenset]:
    fam = greedy_family(f)
    if m < 0 or m > len(f):
        raise ValidationError("size exceeds support")
    if m == 0:
        yield frozenset()
        return
    done: frozenset = frozenset()
    for _, members in fam.levels:
        if len(done) + len(members) >= m:
            for S in combinations(sorted(members), m - len(done)):
                yield done | frozenset(S)
            return
        done = done | members


def count_greedy_sets_of_size(f: FinSeq, m: int) -> int:
    if m < 0 or m > len(f):
        raise ValidationError("size exceeds support")
    if m == 0:
        return 1
    done = 0
    for _, members in greedy_family(f).levels:
        if done + len(members) >= m:
            return comb(len(members), m - done)
        done += len(members)
    raise AssertionError("unreachable")


def greedy_sets_of_size(f: FinSeq, m: int, cap: int = DEFAULT_ENUM_CAP):
    """Greedy subsets of ``supp(f)`` with ``m`` elements.

    Returns a list when the count is at most ``cap``, otherwise a lazy iterator.
    """
    it = iter_greedy_sets_of_size(f, m)
    if count_greedy_sets_of_size(f, m) <= cap:
        return list(it)
    return it


def max_greedy_within(f: FinSeq, k: int) -> frozenset:
    """Largest greedy set of ``f`` inside ``[1, k]``, intersected with ``supp(f)``."""
    done: frozenset = frozenset()
    for _, members in greedy_family(f).levels:
        if max(members) <= k:
            done = done | members
            continue
        return done | frozenset(n for n in members if n <= k)
    return done


def tga_residual(f: FinSeq, A: Iterable[int]) -> FinSeq:
    """``f - S_A(f)`` for a greedy set ``A``."""
    A = frozenset(A)
    if not is_greedy_set(f, A):
        raise ValidationError("not a greedy set")
    return f - project(f, A)
