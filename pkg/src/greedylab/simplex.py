"""Dense exact-rational simplex for ``min c.x  s.t.  A x = b, x >= 0``.

Two phases, Bland's anti-cycling rule, optional warm-start basis.  The tableau
uses ``gmpy2.mpq`` internally; inputs and outputs are ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from gmpy2 import mpq, mpz

MAX_ITER = 10**5


class LPInfeasible(ValueError):
    pass


class LPIterationLimit(RuntimeError):
    """Iteration cap hit; ``x``/``value`` hold the best feasible point if one was reached."""

    def __init__(self, msg, x=None, value=None):
        super().__init__(msg)
        self.x = x
        self.value = value


class LPUnbounded(RuntimeError):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple
    basis: tuple
    iterations: int
    warm_started: bool


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _frac(x: mpq) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class _Tableau:
    def __init__(self, A, b, n):
        m = len(A)
        self.m, self.n = m, n
        # columns 0..n-1 structural, n..n+m-1 artificial, last = rhs
        self.rows = []
        for i in range(m):
            sign = -1 if b[i] < 0 else 1
            row = [sign * _q(a) for a in A[i]]
            row += [mpq(int(k == i)) for k in range(m)]
            row.append(sign * _q(b[i]))
            self.rows.append(row)
        self.basis = [n + i for i in range(m)]
        self.width = n + m + 1
        self.obj = None
        self.iterations = 0

    def set_objective(self, cost):
        obj = [_q(x) for x in cost] + [mpq(0)] * (self.width - len(cost))
        for i, j in enumerate(self.basis):
            cj = obj[j]
            if cj:
                row = self.rows[i]
                obj = [o - cj * r for o, r in zip(obj, row)]
        self.obj = obj

    def pivot(self, i, j):
        row = self.rows[i]
        p = row[j]
        if p != 1:
            row = [r / p for r in row]
            self.rows[i] = row
        nz = [k for k, r in enumerate(row) if r]
        for k in range(self.m):
            if k == i:
                continue
            other = self.rows[k]
            factor = other[j]
            if factor:
                for t in nz:
                    other[t] -= factor * row[t]
        if self.obj is not None:
            factor = self.obj[j]
            if factor:
                obj = self.obj
                for t in nz:
                    obj[t] -= factor * row[t]
        self.basis[i] = j
        self.iterations += 1

    def run(self, allowed, max_iter):
        while True:
            if self.iterations >= max_iter:
                raise LPIterationLimit("iteration cap exceeded")
            entering = next((j for j in allowed if self.obj[j] < 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise LPUnbounded("objective unbounded below")
            self.pivot(best[1], entering)

    def drive_out_artificials(self):
        """Pivot zero-level artificials out of the basis; drop rows that are redundant."""
        i = 0
        while i < len(self.rows):
            if self.basis[i] >= self.n:
                row = self.rows[i]
                j = next((j for j in range(self.n) if row[j]), None)
                if j is None:
                    del self.rows[i]
                    del self.basis[i]
                    continue
                self.pivot(i, j)
            i += 1
        self.m = len(self.rows)

    def solution(self):
        x = [Fraction(0)] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = _frac(self.rows[i][-1])
        return x


def _solve_square(M, rhs):
    """Solve ``M z = rhs`` exactly; ``None`` if ``M`` is singular.

    Rows are scaled to integers and reduced by fraction-free (Bareiss)
    elimination, so intermediate sizes stay bounded by minors of ``M``.
    """
    k = len(M)
    aug = []
    for row, r in zip(M, rhs):
        full = list(row) + [r]
        den = 1
        for v in full:
            den = lcm(den, int(v.denominator))
        aug.append([mpz(v * den) for v in full])
    prev = mpz(1)
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        p = prow[col]
        for r in range(col + 1, k):
            row = aug[r]
            a = row[col]
            for t in range(col + 1, k + 1):
                row[t] = (p * row[t] - a * prow[t]) // prev
            row[col] = mpz(0)
        prev = p
    z = [mpq(0)] * k
    for r in range(k - 1, -1, -1):
        row = aug[r]
        acc = mpq(row[k])
        for t in range(r + 1, k):
            if row[t]:
                acc -= row[t] * z[t]
        z[r] = acc / row[r]
    return z


def _certify_basis(A, b, cost, hint):
    """Return ``x`` if the square basis ``hint`` is primal feasible and dual optimal."""
    m, n = len(A), len(cost)
    if len(hint) != m or len(set(hint)) != m:
        return None
    B = [[_q(A[i][j]) for j in hint] for i in range(m)]
    xb = _solve_square(B, [_q(v) for v in b])
    if xb is None or any(v < 0 for v in xb):
        return None
    Bt = [[B[i][k] for i in range(m)] for k in range(m)]
    y = _solve_square(Bt, [_q(cost[j]) for j in hint])
    for j in range(n):
        reduced = _q(cost[j]) - sum((y[i] * _q(A[i][j]) for i in range(m) if A[i][j]), mpq(0))
        if reduced < 0:
            return None
    x = [Fraction(0)] * n
    for j, v in zip(hint, xb):
        x[j] = _frac(v)
    return x


def _try_warm_start(tab: _Tableau, hint) -> bool:
    for j in hint:
        if j in tab.basis:
            continue
        row_i = next(
            (i for i, b in enumerate(tab.basis) if b >= tab.n and tab.rows[i][j] != 0),
            None,
        )
        if row_i is None:
            return False
        tab.pivot(row_i, j)
    if any(row[-1] < 0 for row in tab.rows):
        return False
    return all(row[-1] == 0 for row, b in zip(tab.rows, tab.basis) if b >= tab.n)


def solve_lp(
    A: Sequence[Sequence],
    b: Sequence,
    c: Sequence,
    basis_hint: Optional[Sequence[int]] = None,
    max_iter: int = MAX_ITER,
    extra_hints: Sequence[Sequence[int]] = (),
) -> LPResult:
    """Minimise ``c.x`` over ``A x = b, x >= 0`` exactly.

    ``basis_hint`` lists structural columns believed to form a feasible basis;
    when it does, phase one is skipped.  Each square candidate among
    ``basis_hint`` and ``extra_hints`` is first tested directly for primal
    feasibility and dual optimality, which avoids the tableau altogether.
    """
    m, n = len(A), len(c)
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    cost = [Fraction(x) for x in c]

    warm = False
    tab = None
    for hint in ([basis_hint] if basis_hint else []) + [h for h in extra_hints if h]:
        x = _certify_basis(A, b, cost, list(hint))
        if x is not None:
            value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
            return LPResult(value, tuple(x), tuple(hint), 0, True)
    if basis_hint:
        tab = _Tableau(A, b, n)
        warm = _try_warm_start(tab, list(basis_hint))
        if not warm:
            tab = None
    if tab is None:
        tab = _Tableau(A, b, n)
        tab.set_objective([0] * n + [1] * m)
        tab.run(range(n + m), max_iter)
        if -tab.obj[-1] > 0:
            raise LPInfeasible("no feasible point")
    tab.drive_out_artificials()
    tab.set_objective(cost)
    try:
        tab.run(range(n), max_iter)
    except LPIterationLimit:
        x = tab.solution()
        raise LPIterationLimit(
            "iteration cap exceeded; returning best feasible bound (not optimal)",
            x=tuple(x),
            value=sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0)),
        )
    x = tab.solution()
    value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
    return LPResult(value, tuple(x), tuple(tab.basis), tab.iterations, warm)
