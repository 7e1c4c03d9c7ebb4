"""Deterministic generators for the explicit examples: Leibnizian data and their
alternating vectors, the three-block discontinuity witness, and the block
sequences ``f0``, ``g0``, ``h0`` and the doubled ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .norms import NormValue, SpaceSpec, norm_B, norm_combined
from .seq import FinSeq, IntInterval, ValidationError, project, sum_over


class ConstructionError(ValidationError):
    """A construction or its input failed validation; ``clause`` names the failed condition."""

    def __init__(self, clause: str, witness: tuple = (), detail: str = ""):
        self.clause = clause
        self.witness = tuple(witness)
        msg = clause if not detail else f"{clause}: {detail}"
        if witness:
            msg += f" (witness {self.witness})"
        super().__init__(msg)


# --------------------------------------------------------------------------
# Leibnizian data


@dataclass(frozen=True)
class LeibnizData:
    g: FinSeq
    blocks: tuple  # IntInterval, right-dominant
    alpha: Fraction
    omega_trunc: Fraction

    def block_sums(self) -> tuple:
        return tuple(sum_over(self.g, J.indices()) for J in self.blocks)


def _block_values(g: FinSeq, J: IntInterval) -> list:
    return [(n, v) for n, v in g if n in J]


def leibniz_check(g: FinSeq, blocks: Iterable) -> LeibnizData:
    """Validate ``(g, blocks)`` as Leibnizian data; raises :class:`ConstructionError`."""
    blocks = tuple(J if isinstance(J, IntInterval) else IntInterval(*J) for J in blocks)
    for n, v in g:
        if v < 0:
            raise ConstructionError("g must be nonnegative", (n,))
    for k in range(len(blocks) - 1):
        if blocks[k].hi >= blocks[k + 1].lo:
            raise ConstructionError("blocks not right-dominant", (k + 1, k + 2))
    for n, _ in g:
        if not any(n in J for J in blocks):
            raise ConstructionError("support not covered by blocks", (n,))
    sums = [sum_over(g, J.indices()) for J in blocks]
    for k in range(len(blocks) - 1):
        if sums[k] < sums[k + 1]:
            raise ConstructionError("block sums not nonincreasing", (k + 1, k + 2))
        here = _block_values(g, blocks[k])
        nxt = _block_values(g, blocks[k + 1])
        if here and nxt:
            lo = min(here, key=lambda p: (p[1], p[0]))
            hi = max(nxt, key=lambda p: (p[1], -p[0]))
            if lo[1] <= hi[1]:
                raise ConstructionError("block values not separated", (lo[0], hi[0]))
    alpha = sums[0] if sums else Fraction(0)
    omega = sums[-1] if sums else Fraction(0)
    return LeibnizData(g, blocks, alpha, omega)


def alternating_from_leibniz(data: LeibnizData) -> FinSeq:
    """``M_tau(g)`` with ``tau = (-1)**(k-1)`` on the ``k``-th block."""
    out = {}
    for k, J in enumerate(data.blocks):
        s = 1 if k % 2 == 0 else -1
        for n, v in _block_values(data.g, J):
            out[n] = s * v
    return FinSeq(out)


def leibniz_subfamily(data: LeibnizData, N: Iterable[int]) -> FinSeq:
    """Alternating vector on the selected blocks (1-based), signs alternating in ascending order."""
    N = sorted(set(N))
    if any(k < 1 or k > len(data.blocks) for k in N):
        raise ValidationError(f"block indices must lie in [1, {len(data.blocks)}]")
    out = {}
    for i, k in enumerate(N):
        s = 1 if i % 2 == 0 else -1
        for n, v in _block_values(data.g, data.blocks[k - 1]):
            out[n] = s * v
    return FinSeq(out)


def admissible_window(k: int, t: Fraction) -> tuple:
    """Target interval ``[t(1+2^-k), t(1+2^-k+2^-k-2)]`` for the ``k``-th block sum."""
    e = Fraction(1, 2**k)
    return t * (1 + e), t * (1 + e + e / 4)


def build_admissible(g: FinSeq, t, K: int) -> LeibnizData:
    """Pick ``K`` runs of consecutive support indices with sums in the nested target windows.

    ``g`` must be nonnegative and nonincreasing on its support.  Values tied with the
    last value of the previous run are skipped so the runs are strictly separated.
    """
    t = Fraction(t)
    if t <= 0:
        raise ValidationError("t must be positive")
    items = list(g)
    if any(v < 0 for _, v in items) or any(a[1] < b[1] for a, b in zip(items, items[1:])):
        raise ValidationError("g must be nonnegative and nonincreasing on its support")
    blocks, chosen = [], {}
    pos = 0
    for k in range(1, K + 1):
        lo, hi = admissible_window(k, t)
        if blocks:
            last = chosen[blocks[-1].hi]
            while pos < len(items) and items[pos][1] == last:
                pos += 1
        start, total, found = pos, Fraction(0), None
        for end in range(pos, len(items)):
            total += items[end][1]
            while total > hi and start <= end:
                total -= items[start][1]
                start += 1
            if start <= end and lo <= total <= hi:
                found = (start, end)
                break
        if found is None:
            raise ConstructionError("insufficient tail mass", (k,))
        s, e = found
        for n, v in items[s : e + 1]:
            chosen[n] = v
        blocks.append(IntInterval(items[s][0], items[e][0]))
        pos = e + 1
    return leibniz_check(FinSeq(chosen), blocks)


# --------------------------------------------------------------------------
# three-block discontinuity witness


def three_block(t, g: FinSeq) -> FinSeq:
    """``e_1 - t e_2 + g`` with ``g`` supported on indices ``>= 3``."""
    if any(n < 3 for n in g.indices()):
        raise ValidationError("g must vanish on indices 1 and 2")
    return FinSeq({1: 1, 2: -Fraction(t)}) + g


def three_block_predicted(t, g: FinSeq) -> Fraction:
    t = Fraction(t)
    a = sum(g.values(), Fraction(0))
    return 1 + a if t == 1 else 1 + a - t


def discontinuity_witness(N: int = 32, t=1) -> tuple:
    """``(G(t), predicted)`` with ``G(t) = e_1 - t e_2 + sum_{n=3}^N e_n / n``.

    The B norm must equal the prediction.  When the weak-Lorentz part does not
    exceed it, the combined norm must equal it as well.
    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValidationError("t must lie in [0, 1]")
    if N < 8:
        raise ValidationError("N must be at least 8")
    g = FinSeq((n, Fraction(1, n)) for n in range(3, N + 1))
    G = three_block(t, g)
    predicted = three_block_predicted(t, g)
    b = norm_B(G)
    if b != predicted:
        raise ConstructionError("B norm differs from prediction", (), f"{b} != {predicted}")
    space = SpaceSpec()
    if space.norm(G) <= NormValue.exact(predicted):
        got = norm_combined(G, space, "B")
        if got != predicted:
            raise ConstructionError("combined norm differs from prediction", (), f"{got} != {predicted}")
    return G, predicted


# --------------------------------------------------------------------------
# block sequences f0, g0, h0, h


@dataclass(frozen=True)
class H0Params:
    preset: str
    K: int
    b: Callable[[int], Fraction]
    m: Callable[[int], int]
    eps: Callable[[int], Fraction]

    def __post_init__(self):
        if self.K < 0:
            raise ValidationError("depth K must be nonnegative")
        for k in range(1, self.K + 1):
            if self.m(k) < 1:
                raise ConstructionError("m_k must be a positive integer", (k,))
            if not 0 < self.b(k) < self.b(k - 1):
                raise ConstructionError("b must be positive and decreasing", (k,))
            if not 0 < self.eps(k) < self.b(k - 1) - self.b(k):
                raise ConstructionError("eps_k < b_{k-1} - b_k", (k,))

    @classmethod
    def preset_a(cls, K: int = 6) -> "H0Params":
        return cls("A", K, lambda k: Fraction(1, 2**k), lambda k: 3**k, lambda k: Fraction(1, 4**k))

    @classmethod
    def preset_b(cls, K: int = 7) -> "H0Params":
        return cls("B", K, lambda k: Fraction(1, 2**k), lambda k: 2**k, lambda k: Fraction(1, 4**k))

    @classmethod
    def named(cls, name: str, K: Optional[int] = None) -> "H0Params":
        name = name.upper()
        if name == "A":
            return cls.preset_a(6 if K is None else K)
        if name == "B":
            return cls.preset_b(7 if K is None else K)
        raise ValidationError(f"unknown preset {name!r}")

    def n(self, k: int) -> int:
        return sum(self.m(j) for j in range(1, k + 1))


@dataclass(frozen=True)
class H0Blocks:
    n: tuple  # n_0 = 0, n_1, ..., n_K
    J: tuple
    J_plus: tuple
    J_minus: tuple
    I: tuple
    G: tuple
    f0: FinSeq = field(default_factory=FinSeq)
    g0: FinSeq = field(default_factory=FinSeq)
    H: tuple = ()
    H_plus: tuple = ()
    H_minus: tuple = ()
    phi_plus: dict = field(default_factory=dict, compare=False)
    phi_minus: dict = field(default_factory=dict, compare=False)


def build_c(params: H0Params, K: Optional[int] = None) -> tuple:
    """Strictly decreasing ``(c_0, ..., c_{2 n_K})`` with ``c_{2 n_k} = b_k``."""
    K = params.K if K is None else K
    c = [params.b(0)]
    for k in range(1, K + 1):
        b_prev, b_k, e_k, m_k = params.b(k - 1), params.b(k), params.eps(k), params.m(k)
        first = (b_prev - e_k + b_k) / 2
        steps = 2 * m_k - 2
        drop = min(e_k, first - b_k) / 2
        delta = drop / steps if steps else Fraction(0)
        c.extend(first - i * delta for i in range(2 * m_k - 1))
        c.append(b_k)
    _check_c(params, c, K)
    return tuple(c)


def _check_c(params: H0Params, c: Sequence, K: int) -> None:
    for i in range(len(c) - 1):
        if not c[i] > c[i + 1]:
            raise ConstructionError("c not strictly decreasing", (i, i + 1))
    for k in range(1, K + 1):
        n_prev, n_k, e_k = params.n(k - 1), params.n(k), params.eps(k)
        if c[2 * n_k] != params.b(k):
            raise ConstructionError("c_{2n_k} = b_k", (2 * n_k,))
        if not params.b(k - 1) - c[1 + 2 * n_prev] > e_k:
            raise ConstructionError("b_{k-1} - c_{1+2n_{k-1}} > eps_k", (1 + 2 * n_prev,))
        if params.m(k) > 1 and not c[2 + 2 * n_prev] - c[2 * n_k - 1] < e_k:
            raise ConstructionError("c_{2+2n_{k-1}} - c_{-1+2n_k} < eps_k", (2 + 2 * n_prev, 2 * n_k - 1))


def build_h0(params: H0Params, K: Optional[int] = None) -> tuple:
    """Truncation of ``h0 = f0 + g0`` to ``[1, 2 n_K]`` with its block metadata."""
    K = params.K if K is None else K
    c = build_c(params, K)
    ns = tuple(params.n(k) for k in range(K + 1))
    f0 = FinSeq((n, c[n] if n % 2 else -c[n]) for n in range(1, 2 * ns[K] + 1))
    d = {}
    J, Jp, Jm, I, G = [], [], [], [], []
    done: frozenset = frozenset()
    for k in range(1, K + 1):
        block = frozenset(range(1 + 2 * ns[k - 1], 2 * ns[k] + 1))
        plus = frozenset(n for n in block if n % 2)
        for n in plus:
            d[n] = params.eps(k)
        J.append(block)
        Jp.append(plus)
        Jm.append(block - plus)
        I.append(done)
        G.append(done | plus)
        done = done | block
    g0 = FinSeq(d)
    meta = H0Blocks(ns, tuple(J), tuple(Jp), tuple(Jm), tuple(I), tuple(G), f0, g0)
    return f0 + g0, meta


def build_h(params: H0Params, K: Optional[int] = None) -> tuple:
    """Doubled vector: ``h0`` on ``J_k`` copied to the left half of ``H_k`` and negated on the right half."""
    h0, meta = build_h0(params, K)
    ns = meta.n
    phi_p, phi_m = {}, {}
    H, Hp, Hm = [], [], []
    for k in range(1, len(ns)):
        lo = 1 + 4 * ns[k - 1]
        width = 2 * (ns[k] - ns[k - 1])
        for j in sorted(meta.J[k - 1]):
            phi_p[j] = lo + (j - 1 - 2 * ns[k - 1])
            phi_m[j] = phi_p[j] + width
        H.append(frozenset(range(lo, lo + 2 * width)))
        Hp.append(frozenset(range(lo, lo + width)))
        Hm.append(frozenset(range(lo + width, lo + 2 * width)))
    out = {}
    for n, v in h0:
        out[phi_p[n]] = v
        out[phi_m[n]] = -v
    meta = H0Blocks(
        meta.n, meta.J, meta.J_plus, meta.J_minus, meta.I, meta.G, meta.f0, meta.g0,
        tuple(H), tuple(Hp), tuple(Hm), phi_p, phi_m,
    )
    return FinSeq(out), meta


def max_subset_sum(f: FinSeq, D: Iterable[int]) -> Fraction:
    """``max |1*_E(f)|`` over ``E`` contained in ``D``."""
    part = project(f, D).values()
    pos = sum((v for v in part if v > 0), Fraction(0))
    neg = sum((-v for v in part if v < 0), Fraction(0))
    return max(pos, neg)
