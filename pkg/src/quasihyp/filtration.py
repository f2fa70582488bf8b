"""Weighted filtrations of section spaces and truncated exploration of nu.

For a subset ``I`` of divisors and positive weights ``a`` on ``I``,
``V_k`` is the sum of ``Γ(L - sum_{i in I} b_i D_i)`` over all ``b`` with
``sum a_i b_i >= k``. The normalized total ``sum_k dim V_k / (h0(L) sum a_i)``
minimized over subsets that meet and over weights is the invariant nu; here
the weights are truncated, which only ever gives an upper estimate.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Sequence

from .errors import MalformedInputError
from .exactalg import RationalMatrix, SubspaceChain, adapted_basis, subspace_sum
from .geometry import (MonomialModel, h0, nonempty_subsets, section_generators, section_space,
                       vanishing_order)

__all__ = [
    "FiltrationKey",
    "NuEstimate",
    "dim_V",
    "V_space",
    "filtration_total",
    "nu_ratio",
    "nu_truncated",
    "weighted_order_sum",
    "weighted_identity_check",
]


@dataclass(frozen=True)
class FiltrationKey:
    """A divisor subset ``I`` (0-based indices) with positive integer weights ``a``."""

    I: tuple
    a: tuple

    def __post_init__(self):
        I = tuple(int(i) for i in self.I)
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "a", a)
        if not I:
            raise MalformedInputError("empty divisor subset")
        if len(set(I)) != len(I):
            raise MalformedInputError(f"repeated index in {I}")
        if len(a) != len(I):
            raise MalformedInputError("one weight per index is required")
        if any(x < 1 for x in a):
            raise MalformedInputError("weights must be positive integers")

    @property
    def is_primitive(self) -> bool:
        return reduce(gcd, self.a) == 1

    def scaled(self, c: int) -> "FiltrationKey":
        return FiltrationKey(self.I, tuple(c * x for x in self.a))

    def sort_key(self):
        return (len(self.I), tuple(sorted(self.I)), self.a)


def _max_multiplicities(model: MonomialModel, L: tuple, I: tuple) -> tuple:
    """For each ``i`` in ``I`` the largest ``b_i`` leaving a nonnegative residual alone."""
    out = []
    for i in I:
        deg = model.degree(i)
        caps = [L[j] // deg[j] for j in range(len(L)) if deg[j] > 0]
        out.append(max(min(caps), -1))
    return tuple(out)


@lru_cache(maxsize=None)
def _contributing(model: MonomialModel, L: tuple, I: tuple) -> tuple:
    """All ``b`` in ``N^I`` whose section space is nonzero."""
    caps = _max_multiplicities(model, L, I)
    if any(c < 0 for c in caps):
        return ()
    out = []
    for b in itertools.product(*(range(c + 1) for c in caps)):
        full = [0] * model.r
        for i, bi in zip(I, b):
            full[i] = bi
        if all(x >= 0 for x in model.residual(L, full)):
            out.append(b)
    return tuple(out)


def _extend(model: MonomialModel, I: tuple, b: tuple) -> tuple:
    full = [0] * model.r
    for i, bi in zip(I, b):
        full[i] = bi
    return tuple(full)


def _minimal(bs: list) -> list:
    """Componentwise-minimal elements; their section spaces contain all others."""
    keep = []
    for b in bs:
        if not any(c != b and all(x <= y for x, y in zip(c, b)) for c in bs):
            keep.append(b)
    return keep


def V_space(model: MonomialModel, L: Sequence[int], key: FiltrationKey, k: int) -> RationalMatrix:
    """Canonical basis of ``V_{I,a,k}`` inside ``Γ(O(L))``."""
    L = tuple(L)
    n = h0(model, L)
    bs = [b for b in _contributing(model, L, key.I)
          if sum(x * y for x, y in zip(key.a, b)) >= k]
    if not bs or n == 0:
        return RationalMatrix.zero(n)
    parts = [section_space(model, L, _extend(model, key.I, b)).basis for b in _minimal(bs)]
    return subspace_sum(parts)


def dim_V(model: MonomialModel, L: Sequence[int], key: FiltrationKey, k: int) -> int:
    """``dim V_{I,a,k}``; zero once ``k`` exceeds every reachable weighted sum."""
    if k < 1:
        raise MalformedInputError("filtration index k starts at 1")
    return V_space(model, L, key, k).nrows


def filtration_cutoff(model: MonomialModel, L: Sequence[int], key: FiltrationKey) -> int:
    """Largest ``k`` with possibly nonzero ``V_k``."""
    bs = _contributing(model, tuple(L), key.I)
    return max((sum(x * y for x, y in zip(key.a, b)) for b in bs), default=0)


def filtration_total(model: MonomialModel, L: Sequence[int], key: FiltrationKey) -> int:
    """``sum_{k >= 1} dim V_{I,a,k}``."""
    return sum(dim_V(model, L, key, k) for k in range(1, filtration_cutoff(model, L, key) + 1))


def nu_ratio(model: MonomialModel, L: Sequence[int], key: FiltrationKey) -> Fraction:
    q = h0(model, tuple(L))
    if q < 1:
        raise MalformedInputError("h0(L) must be at least 1")
    return Fraction(filtration_total(model, L, key), q * sum(key.a))


@dataclass(frozen=True)
class NuEstimate:
    """Minimum of the nu ratio over a finite set of keys: an upper estimate of nu."""

    value: Fraction
    witness: FiltrationKey
    max_weight: int
    exactness: str = "upper-estimate"
    note: str = ""


def _primitive_weights(size: int, cap: int):
    for a in itertools.product(range(1, cap + 1), repeat=size):
        if reduce(gcd, a) == 1:
            yield a


def nu_truncated(model: MonomialModel, L: Sequence[int], max_weight: int = 4,
                 subsets: Sequence[Sequence[int]] | None = None) -> NuEstimate:
    """Minimize the nu ratio over meeting subsets and primitive weights ``<= max_weight``.

    Ties go to the lexicographically smallest ``(|I|, sorted I, a)``, so the
    witness does not depend on enumeration order.
    """
    L = tuple(L)
    if h0(model, L) < 1:
        raise MalformedInputError("h0(L) must be at least 1")
    if max_weight < 1:
        raise MalformedInputError("weight cap must be positive")
    note = ""
    P = [tuple(I) for I in subsets] if subsets is not None else nonempty_subsets(model)
    if not P:
        P = [(i,) for i in range(model.r)]
        note = "no subset of divisors meets; estimate taken over singletons"
    best = None
    for I in P:
        for a in _primitive_weights(len(I), max_weight):
            key = FiltrationKey(I, a)
            cand = (nu_ratio(model, L, key), key.sort_key(), key)
            if best is None or cand[:2] < best[:2]:
                best = cand
    return NuEstimate(best[0], best[2], max_weight, note=note)


def filtration_chain(model: MonomialModel, L: Sequence[int], key: FiltrationKey) -> SubspaceChain:
    """Chain ``F_k`` = union over ``b`` with ``sum a_i b_i >= k`` of generators of ``Γ(L - b·D)``.

    Each generator is ``f^b`` times a monomial, so it lies in a single stage
    space; the sets are nested because the index set of ``b`` shrinks with ``k``.
    """
    L = tuple(L)
    n = h0(model, L)
    gens = {}
    for b in _contributing(model, L, key.I):
        w = sum(x * y for x, y in zip(key.a, b))
        if w >= 1:
            gens[b] = (w, section_generators(model, L, _extend(model, key.I, b)))
    top = filtration_cutoff(model, L, key)
    stages = []
    for k in range(1, top + 2):
        seen, stage = set(), []
        for b in sorted(gens):
            w, vecs = gens[b]
            if w >= k:
                for v in vecs:
                    if v not in seen:
                        seen.add(v)
                        stage.append(v)
        stages.append(tuple(stage))
    return SubspaceChain(n, tuple(stages))


@dataclass(frozen=True)
class WeightedOrderSum:
    weighted_sum: int
    dim_sum: int
    basis: tuple

    @property
    def holds(self) -> bool:
        return self.weighted_sum >= self.dim_sum

    @property
    def equal(self) -> bool:
        return self.weighted_sum == self.dim_sum


def weighted_order_sum(model: MonomialModel, L: Sequence[int], key: FiltrationKey) -> WeightedOrderSum:
    """Both sides of ``sum_k sum_i a_i mu_i(s_k)`` vs ``sum_mu dim V_mu`` on an adapted basis."""
    L = tuple(L)
    basis = adapted_basis(filtration_chain(model, L, key))
    weighted = sum(a * vanishing_order(model, L, s, i)
                   for s in basis for i, a in zip(key.I, key.a))
    return WeightedOrderSum(weighted, filtration_total(model, L, key), tuple(basis))


def weighted_identity_check(model: MonomialModel, L: Sequence[int], key: FiltrationKey) -> bool:
    """True iff the weighted vanishing-order sum over an adapted basis dominates ``sum dim V``."""
    return weighted_order_sum(model, L, key).holds
