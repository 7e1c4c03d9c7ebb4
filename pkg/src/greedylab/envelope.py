"""Certified two-sided bounds on the convexification (Banach envelope) norm.

Lower bounds come from linear functionals of norm at most one on the combined
space; upper bounds come from explicit convex decompositions of the target over
a dictionary of atoms, optimised by the exact simplex in :mod:`.simplex`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .norms import NormValue, SpaceSpec, norm_combined, sigma_g
from .seq import (
    FinSeq,
    IntInterval,
    SignVector,
    ValidationError,
    indicator,
    multiply,
    permute,
    signed_indicator,
)
from .simplex import LPInfeasible, LPIterationLimit, solve_lp

ROOT_BITS = 96


class DictionaryError(ValueError):
    pass


# --------------------------------------------------------------------------
# dual functionals


@dataclass(frozen=True)
class IntervalSum:
    interval: IntInterval

    def __call__(self, f: FinSeq) -> Fraction:
        return sum((v for n, v in f if n in self.interval), Fraction(0))

    def valid_for(self, which: str) -> bool:
        return which == "B"

    def __str__(self) -> str:
        return f"IntervalSum[{self.interval.lo},{self.interval.hi}]"


@dataclass(frozen=True)
class Coordinate:
    n: int

    def __call__(self, f: FinSeq) -> Fraction:
        return f[self.n]

    def valid_for(self, which: str) -> bool:
        return which in ("B", "A")

    def __str__(self) -> str:
        return f"Coordinate[{self.n}]"


@dataclass(frozen=True)
class GreedySum:
    def __call__(self, f: FinSeq) -> Fraction:
        return sigma_g(f)

    def valid_for(self, which: str) -> bool:
        return which == "A"

    def __str__(self) -> str:
        return "GreedySum"


DualFunctional = Union[IntervalSum, Coordinate, GreedySum]


def default_dual_family(f: FinSeq, which: str = "B") -> list:
    supp = f.indices()
    family: list = [Coordinate(n) for n in supp]
    if which == "B":
        family += [IntervalSum(IntInterval(a, b)) for i, a in enumerate(supp) for b in supp[i:]]
    elif which == "A":
        family.append(GreedySum())
    else:
        raise ValidationError(f"which must be 'B' or 'A', got {which!r}")
    return family


def lower_bound(f: FinSeq, which: str = "B", family: Optional[Sequence] = None) -> tuple:
    """Largest ``|phi(f)|`` over a family of certified norm-one functionals."""
    if family is None:
        family = default_dual_family(f, which)
    if not family:
        raise ValidationError("dual family is empty")
    for phi in family:
        if not phi.valid_for(which):
            raise ValidationError(f"{phi} is not certified for the {which} gauge")
    best_val, best_phi = None, None
    for phi in family:
        v = abs(phi(f))
        if best_val is None or v > best_val:
            best_val, best_phi = v, phi
    return best_val, best_phi


# --------------------------------------------------------------------------
# dictionaries


@dataclass(frozen=True)
class Atom:
    vector: FinSeq
    norm: NormValue

    @property
    def cost(self) -> Fraction:
        """Rational upper bound for the norm, exact when the norm is rational."""
        return self.norm.value if self.norm.is_exact else self.norm.upper_rational(ROOT_BITS)


@dataclass(frozen=True)
class Dictionary:
    atoms: tuple
    basis_hint: tuple = ()  # atom positions expected to form a feasible basis
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        vectors = {a.vector for a in self.atoms}
        for a in self.atoms:
            if not a.vector:
                raise DictionaryError("dictionary contains a zero atom")
            if -a.vector not in vectors:
                raise DictionaryError("dictionary is not closed under negation")

    def __len__(self) -> int:
        return len(self.atoms)

    def __add__(self, other: "Dictionary") -> "Dictionary":
        seen, atoms = set(), []
        for a in self.atoms + other.atoms:
            if a.vector not in seen:
                seen.add(a.vector)
                atoms.append(a)
        return Dictionary(tuple(atoms), meta={**self.meta, **other.meta})

    def max_norm(self) -> NormValue:
        return max(a.norm for a in self.atoms)


def atoms_from_vectors(vectors: Iterable[FinSeq], space: SpaceSpec, which: str = "B") -> Dictionary:
    """Dictionary made of ``±v`` for each nonzero ``v``, norms evaluated exactly."""
    atoms, seen = [], set()
    for v in vectors:
        for w in (v, -v):
            if w and w not in seen:
                seen.add(w)
                atoms.append(Atom(w, norm_combined(w, space, which)))
    return Dictionary(tuple(atoms))


def coordinate_dictionary(indices: Iterable[int], space: SpaceSpec, which: str = "B") -> Dictionary:
    return atoms_from_vectors((FinSeq({n: 1}) for n in sorted(indices)), space, which)


def piece_dictionary(f: FinSeq, space: SpaceSpec, which: str = "B", cap: int = 12) -> Dictionary:
    """``±S_I(f)`` for intervals with endpoints in ``supp(f)``; empty if the support exceeds ``cap``."""
    supp = f.indices()
    if len(supp) > cap:
        return Dictionary(())
    pieces = [
        FinSeq((n, v) for n, v in f if a <= n <= b) for i, a in enumerate(supp) for b in supp[i:]
    ]
    return atoms_from_vectors(pieces, space, which)


def harmonic_seed(m: int) -> FinSeq:
    return FinSeq.from_values(Fraction(1, n) for n in range(1, m + 1))


def cyclic_dictionary(
    m: int,
    seed: Optional[FinSeq] = None,
    space: SpaceSpec = SpaceSpec(),
    which: str = "B",
) -> Dictionary:
    """Atoms ``±M_tau(P_{pi^k}(seed))``, ``k = 0..m-1``, with ``pi`` the cycle on ``[1, m]``.

    ``tau`` alternates starting with ``+`` at index 1.  Summing the ``+`` atoms
    gives ``s_m`` times the alternating indicator of ``[1, m]``, where ``s_m`` is
    the seed mass; ``meta`` records ``s_m``.
    """
    if m < 1:
        raise ValidationError("m must be positive")
    seed = harmonic_seed(m) if seed is None else seed
    vals = [seed[n] for n in range(1, m + 1)]
    if any(v <= 0 for v in vals):
        raise ValidationError("cyclic seed must be positive on [1, m]")
    if any(a < b for a, b in zip(vals, vals[1:])):
        raise ValidationError("cyclic seed must be nonincreasing on [1, m]")
    base = FinSeq.from_values(vals)
    tau = SignVector.alternating(range(1, m + 1))
    positives = []
    for k in range(m):
        pi = {n: (n - 1 + k) % m + 1 for n in range(1, m + 1)}
        positives.append(multiply(permute(base, pi), tau))
    atoms = []
    for v in positives:
        atoms.append(Atom(v, norm_combined(v, space, which)))
    for v in positives:
        atoms.append(Atom(-v, norm_combined(-v, space, which)))
    s_m = sum(vals, Fraction(0))
    return Dictionary(tuple(atoms), basis_hint=tuple(range(m)), meta={"s_m": s_m, "m": m})


# --------------------------------------------------------------------------
# upper bounds and certified intervals


@dataclass(frozen=True)
class Decomposition:
    weights: tuple  # positive Fractions
    atoms: tuple  # Atom objects, aligned with weights
    optimal: bool = True

    def combination(self) -> FinSeq:
        total = FinSeq()
        for w, a in zip(self.weights, self.atoms):
            total = total + a.vector * w
        return total

    def value(self) -> NormValue:
        if all(a.norm.is_exact for a in self.atoms):
            return NormValue.exact(sum((w * a.norm.value for w, a in zip(self.weights, self.atoms)), Fraction(0)))
        return NormValue.exact(sum((w * a.cost for w, a in zip(self.weights, self.atoms)), Fraction(0)))


def upper_bound(f: FinSeq, dictionary: Dictionary, max_iter: int = 10**5) -> tuple:
    """Cheapest decomposition ``f = sum t_j g_j`` with ``t_j >= 0``; returns (value, Decomposition)."""
    atoms = dictionary.atoms
    if not f:
        return NormValue.exact(0), Decomposition((), ())
    rows = sorted(set(f.indices()).union(*(a.vector.support for a in atoms)))
    A = [[a.vector[n] for a in atoms] for n in rows]
    b = [f[n] for n in rows]
    c = [a.cost for a in atoms]
    try:
        res = solve_lp(
            A,
            b,
            c,
            basis_hint=dictionary.basis_hint or None,
            max_iter=max_iter,
            extra_hints=[_coordinate_hint(f, atoms, rows)],
        )
    except LPInfeasible:
        raise DictionaryError("dictionary does not span target") from None
    except LPIterationLimit as exc:
        if exc.x is None:
            raise
        dec = _decomposition(exc.x, atoms, optimal=False)
        exc.decomposition = dec
        exc.value = dec.value()
        raise
    dec = _decomposition(res.x, atoms, optimal=True)
    return dec.value(), dec


def _coordinate_hint(f: FinSeq, atoms, rows) -> tuple:
    """Positions of ``sgn(f_n) e_n`` for every row, or ``()`` if some are missing."""
    pos = {a.vector: i for i, a in enumerate(atoms)}
    hint = []
    for n in rows:
        j = pos.get(FinSeq({n: -1 if f[n] < 0 else 1}))
        if j is None:
            return ()
        hint.append(j)
    return tuple(hint)


def _decomposition(x, atoms, optimal) -> Decomposition:
    pairs = [(w, a) for w, a in zip(x, atoms) if w > 0]
    return Decomposition(tuple(w for w, _ in pairs), tuple(a for _, a in pairs), optimal)


@dataclass(frozen=True)
class EnvelopeConfig:
    duals: Optional[tuple] = None  # None = default family
    generators: tuple = ("coords", "pieces", "cyclic")
    seed: Optional[FinSeq] = None
    user_atoms: tuple = ()
    piece_cap: int = 12


@dataclass(frozen=True)
class EnvelopeBound:
    lower: Fraction
    lower_cert: DualFunctional
    upper: NormValue
    upper_cert: Decomposition

    def verify(self, target: FinSeq) -> bool:
        """Replay both certificates exactly."""
        if abs(self.lower_cert(target)) != self.lower:
            return False
        if self.upper_cert.combination() != target:
            return False
        if any(w <= 0 for w in self.upper_cert.weights):
            return False
        if self.upper_cert.value() != self.upper:
            return False
        return NormValue.exact(self.lower) <= self.upper


def build_dictionary(f: FinSeq, space: SpaceSpec, which: str, config: EnvelopeConfig) -> Dictionary:
    d = Dictionary(())
    for gen in config.generators:
        if gen == "coords":
            d = d + coordinate_dictionary(f.indices(), space, which)
        elif gen == "pieces":
            d = d + piece_dictionary(f, space, which, config.piece_cap)
        elif gen == "cyclic":
            m = f.max_index()
            if m:
                cyc = cyclic_dictionary(m, config.seed, space, which)
                d = d + cyc
                d = Dictionary(d.atoms, basis_hint=_hint_positions(d, cyc), meta=d.meta)
        else:
            raise ValidationError(f"unknown dictionary generator {gen!r}")
    if config.user_atoms:
        d = d + atoms_from_vectors(config.user_atoms, space, which)
    return d


def _hint_positions(d: Dictionary, cyc: Dictionary) -> tuple:
    pos = {a.vector: i for i, a in enumerate(d.atoms)}
    return tuple(pos[cyc.atoms[i].vector] for i in cyc.basis_hint)


def envelope_interval(
    f: FinSeq,
    space: SpaceSpec = SpaceSpec(),
    which: str = "B",
    config: EnvelopeConfig = EnvelopeConfig(),
    dictionary: Optional[Dictionary] = None,
) -> EnvelopeBound:
    lower, phi = lower_bound(f, which, config.duals)
    if dictionary is None:
        dictionary = build_dictionary(f, space, which, config)
    upper, dec = upper_bound(f, dictionary)
    return EnvelopeBound(lower, phi, upper, dec)


def alternating_indicator(m: int) -> FinSeq:
    return signed_indicator(SignVector.alternating(range(1, m + 1)), range(1, m + 1))


def ucc_witness(m: int, space: SpaceSpec = SpaceSpec(), which: str = "B") -> dict:
    """Certified quantities behind the failure of unconditionality for constant coefficients.

    The alternating indicator of ``[1, m]`` gets an upper bound from the cyclic
    harmonic dictionary, compared with ``D m / s_m`` (``D`` the largest atom
    norm); the indicator of the even indices up to ``m`` gets a lower bound.
    """
    cyc = cyclic_dictionary(m, None, space, which)
    alt = alternating_indicator(m)
    upper, dec = upper_bound(alt, cyc)
    lo_alt, phi_alt = lower_bound(alt, which)
    evens = indicator(range(2, m + 1, 2))
    lo_even, phi_even = lower_bound(evens, which) if evens else (Fraction(0), None)
    D = cyc.max_norm()
    s_m = cyc.meta["s_m"]
    return {
        "m": m,
        "s_m": s_m,
        "D": D,
        "bound": D.scale(Fraction(m) / s_m),
        "upper_alt": upper,
        "decomposition": dec,
        "lower_alt": lo_alt,
        "lower_even": lo_even,
        "lower_even_cert": phi_even,
    }
