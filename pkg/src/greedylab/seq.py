"""Finitely supported exact-rational sequences and the coordinate operators on them.

Scalars are :class:`fractions.Fraction` throughout; integers and ``"p/q"``
strings are accepted wherever a scalar is expected.  Index sets are plain
``frozenset`` objects of positive integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]
IndexSet = frozenset


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def scalar(x: ScalarLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point scalars are not accepted; use Fraction or 'p/q'")
    return Fraction(x)


def index_set(indices: Iterable[int] = ()) -> frozenset:
    out = frozenset(int(n) for n in indices)
    if any(n < 1 for n in out):
        raise ValidationError("indices must be positive integers")
    return out


class FinSeq:
    """Immutable finitely supported sequence ``f = (a_n)`` with exact entries.

    Entries are stored on the support only, sorted by index.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, entries: Union[Mapping[int, ScalarLike], Iterable[tuple]] = ()):
        if isinstance(entries, Mapping):
            pairs = entries.items()
        else:
            pairs = entries
        data: dict[int, Fraction] = {}
        for n, v in pairs:
            n = int(n)
            if n < 1:
                raise ValidationError(f"index {n} is not a positive integer")
            if n in data:
                raise ValidationError(f"duplicate index {n}")
            v = scalar(v)
            if v:
                data[n] = v
        self._items = tuple(sorted(data.items()))
        self._map = dict(self._items)
        self._hash = None

    @classmethod
    def from_values(cls, values: Iterable[ScalarLike], start: int = 1) -> "FinSeq":
        """Sequence whose entries are ``values`` placed at ``start, start+1, ...``."""
        return cls((start + i, v) for i, v in enumerate(values))

    @classmethod
    def zero(cls) -> "FinSeq":
        return cls()

    def items(self) -> tuple:
        return self._items

    def indices(self) -> tuple:
        return tuple(n for n, _ in self._items)

    def values(self) -> tuple:
        return tuple(v for _, v in self._items)

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    def max_index(self) -> int:
        return self._items[-1][0] if self._items else 0

    def dense(self, length: int | None = None) -> list:
        """Entries at indices ``1..length`` (default: up to the last support index)."""
        if length is None:
            length = self.max_index()
        return [self._map.get(n, Fraction(0)) for n in range(1, length + 1)]

    def __getitem__(self, n: int) -> Fraction:
        return self._map.get(n, Fraction(0))

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[tuple]:
        return iter(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinSeq):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {v}" for n, v in self._items)
        return f"FinSeq({{{body}}})"

    def __add__(self, other: "FinSeq") -> "FinSeq":
        if not isinstance(other, FinSeq):
            return NotImplemented
        out = dict(self._map)
        for n, v in other._items:
            out[n] = out.get(n, 0) + v
        return FinSeq(out)

    def __neg__(self) -> "FinSeq":
        return FinSeq((n, -v) for n, v in self._items)

    def __sub__(self, other: "FinSeq") -> "FinSeq":
        if not isinstance(other, FinSeq):
            return NotImplemented
        return self + (-other)

    def __mul__(self, t: ScalarLike) -> "FinSeq":
        t = scalar(t)
        return FinSeq((n, t * v) for n, v in self._items)

    __rmul__ = __mul__

    def __abs__(self) -> "FinSeq":
        return FinSeq((n, abs(v)) for n, v in self._items)


@dataclass(frozen=True)
class IntInterval:
    """Integer interval ``[lo, hi]`` of positive integers."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 1 or self.hi < self.lo:
            raise ValidationError(f"invalid interval [{self.lo}, {self.hi}]")

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def indices(self) -> frozenset:
        return frozenset(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class SignVector:
    """Partial map of indices to signs ``+1``/``-1``; unspecified indices read as ``+1``."""

    signs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, s in dict(self.signs).items():
            if s not in (1, -1):
                raise ValidationError(f"sign at {n} must be +1 or -1, got {s}")
            clean[int(n)] = int(s)
        object.__setattr__(self, "signs", clean)

    def __call__(self, n: int) -> int:
        return self.signs.get(n, 1)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.signs.items())))

    @classmethod
    def from_list(cls, signs: Iterable[int], start: int = 1) -> "SignVector":
        return cls({start + i: s for i, s in enumerate(signs)})

    @classmethod
    def alternating(cls, indices: Iterable[int]) -> "SignVector":
        """``(-1)**(n-1)`` on the given indices."""
        return cls({n: 1 if n % 2 else -1 for n in indices})


def sgn(t: Fraction) -> int:
    # sgn(0) = 1
    return -1 if t < 0 else 1


def sign_vector_of(f: FinSeq) -> SignVector:
    return SignVector({n: sgn(v) for n, v in f})


def coeff(f: FinSeq, n: int) -> Fraction:
    return f[n]


def sum_over(f: FinSeq, A: Iterable[int]) -> Fraction:
    """Exact value of the indicator functional of ``A`` at ``f``."""
    return sum((f[n] for n in A), Fraction(0))


def project(f: FinSeq, A: Iterable[int]) -> FinSeq:
    A = A if isinstance(A, (set, frozenset, IntInterval)) else frozenset(A)
    return FinSeq((n, v) for n, v in f if n in A)


def multiply(f: FinSeq, tau: SignVector) -> FinSeq:
    return FinSeq((n, tau(n) * v) for n, v in f)


def check_injective(pi: Mapping[int, int]) -> None:
    images = list(pi.values())
    if len(set(images)) != len(images):
        raise ValidationError("permutation map is not injective")
    if any(int(k) < 1 or int(v) < 1 for k, v in pi.items()):
        raise ValidationError("permutation map must act on positive integers")


def permute(f: FinSeq, pi: Mapping[int, int]) -> FinSeq:
    """Move the entry at ``n`` to ``pi(n)``; ``pi`` is the identity off its stored domain.

    The extended map must remain injective on ``supp(f)``.
    """
    check_injective(pi)
    out: dict[int, Fraction] = {}
    for n, v in f:
        m = pi.get(n, n)
        if m in out:
            raise ValidationError(f"permutation sends two support indices to {m}")
        out[m] = v
    return FinSeq(out)


def dec_rearrangement(f: FinSeq) -> tuple:
    """Moduli of the support entries, sorted nonincreasing (the implicit tail is zero)."""
    return tuple(sorted((abs(v) for v in f.values()), reverse=True))


def dec_at(D: tuple, m: int) -> Fraction:
    """``D(f)(m)`` with 1-based ``m`` and zero beyond the support size."""
    return D[m - 1] if 1 <= m <= len(D) else Fraction(0)


def signed_indicator(eps: SignVector, A: Iterable[int]) -> FinSeq:
    return FinSeq((n, eps(n)) for n in A)


def indicator(A: Iterable[int]) -> FinSeq:
    return FinSeq((n, 1) for n in A)


def interval(lo: int, hi: int) -> frozenset:
    return IntInterval(lo, hi).indices()
