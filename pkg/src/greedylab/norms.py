"""Exact evaluation of the norm functionals on finitely supported sequences.

Every value here is exact.  Lorentz norms with finite ``q >= 2`` are usually
irrational, so they are carried as :class:`NormValue` objects holding the
``q``-th power; comparisons between such values are decided exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Optional, Union

import gmpy2
import numpy as np

from .seq import (
    FinSeq,
    ScalarLike,
    SignVector,
    ValidationError,
    dec_at,
    dec_rearrangement,
    scalar,
    signed_indicator,
)

ORACLE_CAP = 12
INF = math.inf


class OracleCapExceeded(ValidationError):
    pass


# --------------------------------------------------------------------------
# exact norm values


def _root_enclosure(x: Fraction, q: int, bits: int) -> tuple:
    """Rationals ``lo <= x**(1/q) <= hi`` with ``hi - lo <= 2**-bits / den(x)``."""
    a, b = x.numerator, x.denominator
    scale = 1 << bits
    r, exact = gmpy2.iroot(gmpy2.mpz(a * b ** (q - 1) * scale**q), q)
    r = int(r)
    lo = Fraction(r, b * scale)
    hi = lo if exact else Fraction(r + 1, b * scale)
    return lo, hi


def _rational_root(x: Fraction, q: int) -> Optional[Fraction]:
    if q == 1:
        return x
    rn, en = gmpy2.iroot(gmpy2.mpz(x.numerator), q)
    rd, ed = gmpy2.iroot(gmpy2.mpz(x.denominator), q)
    if en and ed:
        return Fraction(int(rn), int(rd))
    return None


@total_ordering
@dataclass(frozen=True, eq=False)
class NormValue:
    """The real number ``offset + power**(1/q)``, with ``power >= 0``.

    ``q == 1`` means the value is the rational ``offset + power``; construction
    normalises perfect ``q``-th powers to that form.  A bare ``QthPower`` has
    ``offset == 0``; a nonzero offset only arises from affine gauges.
    """

    power: Fraction
    q: int = 1
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        power = scalar(self.power)
        if power < 0:
            raise ValidationError("norm power must be nonnegative")
        if self.q < 1:
            raise ValidationError("q must be a positive integer")
        offset = scalar(self.offset)
        q = int(self.q)
        root = _rational_root(power, q)
        if root is not None and q != 1:
            offset, power, q = offset + root, Fraction(0), 1
        if q == 1:
            offset, power = offset + power, Fraction(0)
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def exact(cls, x: ScalarLike) -> "NormValue":
        return cls(Fraction(0), 1, scalar(x))

    @classmethod
    def qth_power(cls, power: ScalarLike, q: int) -> "NormValue":
        return cls(scalar(power), q)

    @property
    def is_exact(self) -> bool:
        return self.q == 1

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ArithmeticError(f"{self} is not rational")
        return self.offset

    def enclosure(self, bits: int = 64) -> tuple:
        if self.is_exact:
            return self.offset, self.offset
        lo, hi = _root_enclosure(self.power, self.q, bits)
        return self.offset + lo, self.offset + hi

    def upper_rational(self, bits: int = 64) -> Fraction:
        return self.enclosure(bits)[1]

    def lower_rational(self, bits: int = 64) -> Fraction:
        return self.enclosure(bits)[0]

    def __float__(self) -> float:
        if self.is_exact:
            return float(self.offset)
        return float(self.offset) + float(self.power) ** (1.0 / self.q)

    def __add__(self, other) -> "NormValue":
        if isinstance(other, NormValue):
            if other.is_exact:
                return NormValue(self.power, self.q, self.offset + other.offset)
            if self.is_exact:
                return other + self
            raise TypeError("sum of two irrational norm values is not representable")
        return NormValue(self.power, self.q, self.offset + scalar(other))

    __radd__ = __add__

    def scale(self, c: ScalarLike) -> "NormValue":
        c = scalar(c)
        if c < 0:
            raise ValidationError("norm values scale by nonnegative factors only")
        return NormValue(self.power * c**self.q, self.q, self.offset * c)

    def _cmp(self, other: "NormValue") -> int:
        if self.is_exact and other.is_exact:
            d = self.offset - other.offset
            return (d > 0) - (d < 0)
        if other.is_exact:
            return -other._cmp(self)
        if self.is_exact:
            # r vs c + y**(1/q)  <=>  r - c vs y**(1/q)
            r = self.offset - other.offset
            if r < 0:
                return -1
            d = r**other.q - other.power
            return (d > 0) - (d < 0)
        if self.offset == other.offset:
            d = self.power**other.q - other.power**self.q
            return (d > 0) - (d < 0)
        for bits in (64, 256, 1024, 4096):
            a_lo, a_hi = self.enclosure(bits)
            b_lo, b_hi = other.enclosure(bits)
            if a_lo > b_hi:
                return 1
            if a_hi < b_lo:
                return -1
        raise ArithmeticError(f"cannot separate {self} and {other}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormValue):
            if isinstance(other, (int, Fraction)):
                other = NormValue.exact(other)
            else:
                return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other) -> bool:
        if not isinstance(other, NormValue):
            other = NormValue.exact(other)
        return self._cmp(other) < 0

    def __hash__(self) -> int:
        return hash((self.power, self.q, self.offset))

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.offset)
        root = f"{self.power} ^(1/{self.q})"
        if self.offset:
            return f"{self.offset} + {root}"
        return root

    def __repr__(self) -> str:
        return f"NormValue({self})"


def nmax(values: Iterable[NormValue]) -> NormValue:
    return max(values)


# --------------------------------------------------------------------------
# Lorentz spaces


@dataclass(frozen=True)
class SpaceSpec:
    """Lorentz space ``l_{1,q}``; ``q = 1`` is ``l_1`` and ``q = inf`` is weak ``l_1``."""

    q: Union[int, float] = INF

    def __post_init__(self):
        q = self.q
        if q != INF and (int(q) != q or q < 1):
            raise ValidationError("exact Lorentz evaluation needs integer q >= 1 or q = inf")
        object.__setattr__(self, "q", INF if q == INF else int(q))

    @classmethod
    def parse(cls, text: str) -> "SpaceSpec":
        kind, _, q = text.partition(":")
        if kind != "lorentz" or not q:
            raise ValidationError(f"unknown space {text!r}; expected lorentz:q")
        return cls(INF if q in ("inf", "infty", "oo") else int(q))

    def norm(self, f: FinSeq) -> NormValue:
        return lorentz(f, self.q)

    def __str__(self) -> str:
        return f"lorentz:{'inf' if self.q == INF else self.q}"


def rho_1q(f: FinSeq, k: int, q=INF) -> NormValue:
    """``rho_{1,q}(f, k)``: the Lorentz quasi-norm of the rearrangement shifted by ``k``."""
    if k < 0:
        raise ValidationError("k must be nonnegative")
    D = dec_rearrangement(f)[k:]
    if q == INF:
        return NormValue.exact(max((m * d for m, d in enumerate(D, 1)), default=Fraction(0)))
    q = int(q)
    if q < 1:
        raise ValidationError("q must be >= 1")
    if q == 1:
        return NormValue.exact(sum(D, Fraction(0)))
    return NormValue.qth_power(sum((m ** (q - 1) * d**q for m, d in enumerate(D, 1)), Fraction(0)), q)


def lorentz(f: FinSeq, q=INF) -> NormValue:
    return rho_1q(f, 0, q)


def lorentz_approx(f: FinSeq, q: float) -> float:
    """Floating-point ``||f||_{1,q}`` for real ``q``; no exactness guarantee."""
    D = [float(d) for d in dec_rearrangement(f)]
    if q == INF:
        return max((m * d for m, d in enumerate(D, 1)), default=0.0)
    return sum((m ** (1 - 1 / q) * d) ** q for m, d in enumerate(D, 1)) ** (1 / q)


def l1(f: FinSeq) -> Fraction:
    return sum((abs(v) for v in f.values()), Fraction(0))


def linf(f: FinSeq) -> Fraction:
    return max((abs(v) for v in f.values()), default=Fraction(0))


# --------------------------------------------------------------------------
# interval sums and the B gauge


def _integerize(values) -> tuple:
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in values], den


def _extreme_subarrays(xs) -> tuple:
    """(max, min) interval sums of ``xs``, the empty interval included."""
    best_hi = best_lo = 0
    run_hi = run_lo = 0
    for x in xs:
        run_hi = max(run_hi + x, 0)
        run_lo = min(run_lo + x, 0)
        if run_hi > best_hi:
            best_hi = run_hi
        if run_lo < best_lo:
            best_lo = run_lo
    return best_hi, best_lo


def beta(f: FinSeq, A: Iterable[int]) -> Fraction:
    """``sup_I |sum_{I \\ A} a_n|`` as the spread of prefix sums with ``A`` zeroed."""
    A = frozenset(A)
    run = hi = lo = Fraction(0)
    for n, v in f:
        if n in A:
            continue
        run += v
        hi = max(hi, run)
        lo = min(lo, run)
    return hi - lo


class _ExtremeTree:
    """Segment tree of max/min interval sums under point updates."""

    # node: (sum, max_prefix, max_suffix, max_sub, min_prefix, min_suffix, min_sub)
    _ZERO = (0, 0, 0, 0, 0, 0, 0)

    def __init__(self, xs):
        size = 1
        while size < len(xs):
            size *= 2
        self.size = size
        self.t = [self._ZERO] * (2 * size)
        for i, x in enumerate(xs):
            self.t[size + i] = self._leaf(x)
        for v in range(size - 1, 0, -1):
            self.t[v] = self._merge(self.t[2 * v], self.t[2 * v + 1])

    @staticmethod
    def _leaf(x):
        hi = x if x > 0 else 0
        lo = x if x < 0 else 0
        return (x, hi, hi, hi, lo, lo, lo)

    @staticmethod
    def _merge(a, b):
        s1, p1, q1, m1, lp1, lq1, lm1 = a
        s2, p2, q2, m2, lp2, lq2, lm2 = b
        return (
            s1 + s2,
            max(p1, s1 + p2),
            max(q2, q1 + s2),
            max(m1, m2, q1 + p2),
            min(lp1, s1 + lp2),
            min(lq2, lq1 + s2),
            min(lm1, lm2, lq1 + lp2),
        )

    def set(self, i, x):
        v = self.size + i
        self.t[v] = self._leaf(x)
        v //= 2
        while v:
            self.t[v] = self._merge(self.t[2 * v], self.t[2 * v + 1])
            v //= 2

    def extremes(self):
        root = self.t[1]
        return root[3], root[6]


_TREE_THRESHOLD = 48


def _norm_B_int(xs: list) -> int:
    """Fast B gauge on an integer vector listed in index order."""
    levels: dict[int, list] = {}
    for i, x in enumerate(xs):
        levels.setdefault(abs(x), []).append(i)
    order = [levels[m] for m in sorted(levels, reverse=True)]
    best = 0
    if len(xs) < _TREE_THRESHOLD:
        cur = list(xs)
        for members in order:
            keep_pos = list(cur)
            keep_neg = list(cur)
            for i in members:
                if cur[i] < 0:
                    keep_pos[i] = 0
                else:
                    keep_neg[i] = 0
            hi, _ = _extreme_subarrays(keep_pos)
            _, lo = _extreme_subarrays(keep_neg)
            best = max(best, hi, -lo)
            for i in members:
                cur[i] = 0
        return best
    tree = _ExtremeTree(xs)
    for members in order:
        neg = [i for i in members if xs[i] < 0]
        pos = [i for i in members if xs[i] > 0]
        for i in neg:
            tree.set(i, 0)
        hi, _ = tree.extremes()
        for i in neg:
            tree.set(i, xs[i])
        for i in pos:
            tree.set(i, 0)
        _, lo = tree.extremes()
        for i in neg:
            tree.set(i, 0)
        best = max(best, hi, -lo)
    return best


def norm_B(f: FinSeq) -> Fraction:
    """``sup |sum_{I \\ A} a_n|`` over greedy sets ``A`` and integer intervals ``I``.

    For a boundary level, the extremal choice inside that level drops either all
    of its negative or all of its positive entries; each choice reduces to a
    maximum (minimum) interval sum.
    """
    if not f:
        return Fraction(0)
    xs, den = _integerize(f.values())
    return Fraction(_norm_B_int(xs), den)


@lru_cache(maxsize=None)
def _subset_masks(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)


def _oracle_arrays(f: FinSeq, cap: int):
    if len(f) > cap:
        raise OracleCapExceeded(f"support size {len(f)} exceeds oracle cap {cap}")
    xs, den = _integerize(f.values())
    bound = sum(abs(x) for x in xs) + 1
    dtype = np.int64 if bound < 2**62 else object
    x = np.array(xs, dtype=dtype)
    masks = _subset_masks(len(xs))
    mod = np.abs(x)
    # greedy test straight from the definition: min inside >= max outside
    big = bound
    inside = np.where(masks, mod, big).min(axis=1) if len(xs) else np.array([big])
    outside = np.where(masks, 0, mod).max(axis=1) if len(xs) else np.array([0])
    greedy = masks[np.asarray(inside >= outside, dtype=bool)]
    return x, greedy, den


def norm_B_oracle(f: FinSeq, cap: int = ORACLE_CAP) -> Fraction:
    """Brute force over all greedy subsets of the support and all intervals."""
    if not f:
        return Fraction(0)
    x, greedy, den = _oracle_arrays(f, cap)
    kept = np.where(greedy, 0, x[None, :])
    zeros = np.zeros((kept.shape[0], 1), dtype=kept.dtype)
    P = np.concatenate([zeros, np.cumsum(kept, axis=1)], axis=1)
    sums = P[:, None, :] - P[:, :, None]  # sums[g, i, j] = interval (i, j]
    return Fraction(int(np.abs(sums).max()), den)


# --------------------------------------------------------------------------
# greedy sums and the A gauge


def sigma_g(f: FinSeq) -> Fraction:
    """Greedy sum; at finite support the greedy net stabilises at ``supp(f)``."""
    return sum(f.values(), Fraction(0))


def sigma_g_defect(f: FinSeq, A: Iterable[int]) -> Fraction:
    return sigma_g(f) - sum((f[n] for n in frozenset(A)), Fraction(0))


def norm_A(f: FinSeq) -> Fraction:
    """``max |sigma_g(f, A)|`` over greedy ``A``, one pass over the levels."""
    if not f:
        return Fraction(0)
    xs, den = _integerize(f.values())
    levels: dict[int, list] = {}
    for x in xs:
        pair = levels.setdefault(abs(x), [0, 0])
        pair[x < 0] += x
    best = after = 0
    for m in sorted(levels):
        p, q = levels[m]
        best = max(best, abs(after + p), abs(after + q))
        after += p + q
    return Fraction(best, den)


def norm_A_oracle(f: FinSeq, cap: int = ORACLE_CAP) -> Fraction:
    if not f:
        return Fraction(0)
    x, greedy, den = _oracle_arrays(f, cap)
    rest = np.where(greedy, 0, x[None, :]).sum(axis=1)
    return Fraction(int(np.abs(rest).max()), den)


# --------------------------------------------------------------------------
# combined gauges


def norm_combined(f: FinSeq, space: SpaceSpec, which: str = "B") -> NormValue:
    """``max{||f||_X, ||f||_S}`` with ``X`` the B or A gauge."""
    return max(NormValue.exact(_base(f, which)), space.norm(f))


def gauge_eps(f: FinSeq, space: SpaceSpec, eps: ScalarLike, which: str = "B") -> NormValue:
    """``||f||_S + eps * ||f||_X``."""
    eps = scalar(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    return space.norm(f) + eps * _base(f, which)


def _base(f: FinSeq, which: str) -> Fraction:
    if which == "B":
        return norm_B(f)
    if which == "A":
        return norm_A(f)
    raise ValidationError(f"which must be 'B' or 'A', got {which!r}")


@dataclass(frozen=True)
class Gauge:
    """A named functional: ``l1``, ``linf``, ``lorentz``, ``B``, ``A``, ``B-comb`` or ``A-comb``."""

    kind: str
    space: Optional[SpaceSpec] = None

    KINDS = ("l1", "linf", "lorentz", "B", "A", "B-comb", "A-comb")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValidationError(f"unknown gauge {self.kind!r}")
        if self.kind in ("lorentz", "B-comb", "A-comb") and self.space is None:
            raise ValidationError(f"gauge {self.kind} needs a space")

    def __call__(self, f: FinSeq) -> NormValue:
        k = self.kind
        if k == "l1":
            return NormValue.exact(l1(f))
        if k == "linf":
            return NormValue.exact(linf(f))
        if k == "lorentz":
            return self.space.norm(f)
        if k in ("B", "A"):
            return NormValue.exact(_base(f, k))
        return norm_combined(f, self.space, k[0])

    def oracle(self, f: FinSeq, cap: int = ORACLE_CAP) -> NormValue:
        k = self.kind
        if k not in ("B", "A", "B-comb", "A-comb"):
            raise ValidationError(f"no oracle for gauge {k}")
        base = norm_B_oracle(f, cap) if k[0] == "B" else norm_A_oracle(f, cap)
        if k in ("B", "A"):
            return NormValue.exact(base)
        return max(NormValue.exact(base), self.space.norm(f))

    def constant_modulus(self, plus: int, minus: int) -> NormValue:
        """Value on a signed indicator with ``plus`` + signs and ``minus`` - signs."""
        m = plus + minus
        k = self.kind
        if k in ("l1",):
            return NormValue.exact(m)
        if k == "linf":
            return NormValue.exact(1 if m else 0)
        lor = self.space.norm(FinSeq((n, 1) for n in range(1, m + 1))) if self.space else None
        if k == "lorentz":
            return lor
        tga = NormValue.exact(max(plus, minus))
        if k in ("B", "A"):
            return tga
        return max(tga, lor)

    def __str__(self) -> str:
        if self.space is None:
            return self.kind
        return f"{self.kind}[{self.space}]"


@dataclass(frozen=True)
class DemocracyProfile:
    m_max: int
    lower: tuple  # phi_l(m), m = 1..m_max
    upper: tuple  # phi_u(m)
    witnesses: tuple  # ((A, eps) attaining lower, (A, eps) attaining upper) per m


def _witness(m: int, plus: int) -> tuple:
    A = frozenset(range(1, m + 1))
    eps = SignVector({n: 1 if n <= plus else -1 for n in A})
    return A, eps


def democracy_profile(gauge: Gauge, m_max: int, window: int) -> DemocracyProfile:
    """Fundamental functions over signed indicators supported in ``[1, window]``.

    Signed indicators have constant modulus, so every gauge depends only on the
    counts of + and - signs.
    """
    if window < m_max:
        raise ValidationError("window must be at least m_max")
    lower, upper, wit = [], [], []
    for m in range(1, m_max + 1):
        vals = [(gauge.constant_modulus(p, m - p), p) for p in range(m + 1)]
        lo, p_lo = min(vals, key=lambda t: t[0])
        hi, p_hi = max(vals, key=lambda t: t[0])
        lower.append(lo)
        upper.append(hi)
        wit.append((_witness(m, p_lo), _witness(m, p_hi)))
    return DemocracyProfile(m_max, tuple(lower), tuple(upper), tuple(wit))


def democracy_profile_oracle(gauge: Gauge, m_max: int, window: int) -> tuple:
    """(lower, upper) by evaluating every signed indicator in the window."""
    from itertools import combinations, product

    lower, upper = [], []
    for m in range(1, m_max + 1):
        vals = []
        for A in combinations(range(1, window + 1), m):
            for signs in product((1, -1), repeat=m):
                f = signed_indicator(SignVector(dict(zip(A, signs))), A)
                vals.append(gauge.oracle(f) if gauge.kind in ("B", "A", "B-comb", "A-comb") else gauge(f))
        lower.append(min(vals))
        upper.append(max(vals))
    return tuple(lower), tuple(upper)
