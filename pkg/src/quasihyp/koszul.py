"""Box filtrations over ``Δ = {0..m}^r`` and their inclusion-exclusion counts.

For ``b`` in the box, ``L_b = L - sum b_i D_i`` and ``C_b`` is the sum of
``Γ(L_b - D_j)`` over the indices ``j`` with ``b_j < m``. The checks here
work on global sections: the ideal inclusion for regular sequences is
verified through its section-level shadow, and the Koszul resolution only
through the dimension identity it implies.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bounds import ASSUMED, FAILED, VERIFIED, BoundValue, Hypothesis
from .errors import AcyclicityError, MalformedInputError, SizeLimitError
from .exactalg import RationalMatrix, is_subspace, subspace_intersection, subspace_sum
from .filtration import FiltrationKey, filtration_total
from .geometry import MonomialModel, SectionSubspace, h0, positivity_flags, proper_status, section_space

__all__ = [
    "BoxIndex",
    "c_space",
    "verify_lemma51_sections",
    "verify_all_boxes",
    "bound_lemma52",
    "bound_prop53",
    "koszul_nu_bound",
    "largest_acyclic_box",
    "inclusion_exclusion",
    "MAX_BOX",
]

MAX_BOX = 10 ** 6


@dataclass(frozen=True)
class BoxIndex:
    m: int
    b: tuple

    def __post_init__(self):
        b = tuple(int(x) for x in self.b)
        object.__setattr__(self, "b", b)
        if self.m < 0:
            raise MalformedInputError("box size must be nonnegative")
        if any(not 0 <= x <= self.m for x in b):
            raise MalformedInputError(f"{b} is outside {{0..{self.m}}}^{len(b)}")

    @property
    def J(self) -> tuple:
        """Indices with ``b_i < m``."""
        return tuple(i for i, x in enumerate(self.b) if x < self.m)


def _box(m: int, r: int):
    if (m + 1) ** r > MAX_BOX:
        raise SizeLimitError(f"box of size {(m + 1) ** r} exceeds {MAX_BOX}")
    return itertools.product(range(m + 1), repeat=r)


def _plus(b: tuple, j: int) -> tuple:
    return tuple(x + (1 if i == j else 0) for i, x in enumerate(b))


def c_space(model: MonomialModel, L: Sequence[int], box: BoxIndex) -> SectionSubspace:
    """``sum_{j in J_b} Γ(L - D_j - sum b_i D_i)``."""
    L = tuple(L)
    n = h0(model, L)
    parts = [section_space(model, L, _plus(box.b, j)).basis for j in box.J]
    if not parts:
        return SectionSubspace(L, RationalMatrix.zero(n))
    return SectionSubspace(L, subspace_sum(parts))


def _later_sum(model: MonomialModel, L: tuple, box: BoxIndex) -> RationalMatrix:
    n = h0(model, L)
    parts = [section_space(model, L, c).basis
             for c in _box(box.m, len(box.b)) if c > box.b]
    return subspace_sum(parts) if parts else RationalMatrix.zero(n)


def verify_lemma51_sections(model: MonomialModel, L: Sequence[int], box: BoxIndex) -> bool:
    """``Γ(L_b) ∩ sum_{c > b} Γ(L_c) ⊆ Γ(C_b)`` with ``c`` running lexicographically after ``b``."""
    L = tuple(L)
    if len(box.b) != model.r:
        raise MalformedInputError("box index length must equal the number of divisors")
    lhs = subspace_intersection(section_space(model, L, box.b).basis, _later_sum(model, L, box))
    return is_subspace(lhs, c_space(model, L, box).basis)


def verify_all_boxes(model: MonomialModel, L: Sequence[int], m: int) -> dict:
    """Run the section-level inclusion on every box, sweeping in decreasing lex order."""
    L = tuple(L)
    n = h0(model, L)
    running = RationalMatrix.zero(n)
    out = {}
    for b in sorted(_box(m, model.r), reverse=True):
        box = BoxIndex(m, b)
        own = section_space(model, L, b).basis
        lhs = subspace_intersection(own, running)
        out[b] = is_subspace(lhs, c_space(model, L, box).basis)
        running = subspace_sum([running, own])
    return out


def _box_sum_dims(model: MonomialModel, L: tuple, a: tuple, m: int) -> int:
    """``sum_k dim V'_k`` with ``V'_k`` the sum of ``Γ(L_b)`` over boxes with ``a·b >= k``."""
    boxes = list(_box(m, model.r))
    top = sum(x * m for x in a)
    total = 0
    for k in range(1, top + 1):
        parts = [section_space(model, L, b).basis for b in boxes
                 if sum(x * y for x, y in zip(a, b)) >= k]
        total += subspace_sum(parts).nrows if parts else 0
    return total


@dataclass(frozen=True)
class Lemma52Result:
    """Both sides of the box lower bound.

    ``direct`` sums ``dim V'_k`` over sums restricted to the box; ``unrestricted``
    is the full filtration total with ``I`` = all divisors. Both dominate ``bound``.
    """

    bound: int
    direct: int
    unrestricted: int

    @property
    def holds(self) -> bool:
        return self.direct >= self.bound and self.unrestricted >= self.direct


def bound_lemma52(model: MonomialModel, L: Sequence[int], a: Sequence[int], m: int) -> Lemma52Result:
    """``sum_i a_i sum_b [h0(L_b) - h0(C_b)] b_i`` next to the filtration totals it bounds."""
    L, a = tuple(L), tuple(int(x) for x in a)
    if len(a) != model.r:
        raise MalformedInputError("one weight per divisor is required")
    bound = 0
    for b in _box(m, model.r):
        box = BoxIndex(m, b)
        diff = section_space(model, L, b).dim - c_space(model, L, box).dim
        if diff:
            bound += diff * sum(x * y for x, y in zip(a, b))
    direct = _box_sum_dims(model, L, a, m) if m > 0 else 0
    key = FiltrationKey(tuple(range(model.r)), a)
    unrestricted = filtration_total(model, L, key)
    return Lemma52Result(bound, direct, unrestricted)


def inclusion_exclusion(model: MonomialModel, L: Sequence[int], box: BoxIndex) -> tuple:
    """``(h0(L_b) - h0(C_b), sum_{I ⊆ J_b} (-1)^|I| h0(L_b - sum_{j in I} D_j))``.

    The left side comes from section-space dimensions, the right from the
    closed-form ``h0`` count, so agreement is a genuine cross-check.
    """
    L = tuple(L)
    lhs = section_space(model, L, box.b).dim - c_space(model, L, box).dim
    rhs = 0
    J = box.J
    for size in range(len(J) + 1):
        for I in itertools.combinations(J, size):
            bb = list(box.b)
            for j in I:
                bb[j] += 1
            rhs += (-1) ** size * h0(model, model.residual(L, bb))
    return lhs, rhs


@dataclass(frozen=True)
class Prop53Result:
    bound: int
    identity: dict
    nu_bound: BoundValue

    @property
    def identity_holds(self) -> bool:
        return all(lhs == rhs for lhs, rhs in self.identity.values())


def first_nonacyclic_box(model: MonomialModel, L: Sequence[int], m: int):
    for b in _box(m, model.r):
        if not positivity_flags(model, model.residual(tuple(L), b)).acyclic:
            return b
    return None


def largest_acyclic_box(model: MonomialModel, L: Sequence[int], cap: int | None = None) -> int:
    """Largest ``m`` (possibly 0) such that every ``L_b`` on ``{0..m}^r`` is acyclic."""
    m = 0
    while True:
        nxt = m + 1
        if cap is not None and nxt > cap:
            return m
        if (nxt + 1) ** model.r > MAX_BOX:
            return m
        if first_nonacyclic_box(model, L, nxt) is not None:
            return m
        m = nxt


def koszul_nu_bound(model: MonomialModel, L: Sequence[int], m: int) -> BoundValue:
    """``(1/h0(L)) min_i sum_{k=1}^m h0(L - k D_i)``, valid when every ``L_b`` on the box is acyclic."""
    L = tuple(L)
    bad = first_nonacyclic_box(model, L, m)
    if bad is not None:
        raise AcyclicityError(f"L_b is not acyclic at b = {bad}", box=bad)
    sums = tuple(sum(h0(model, model.residual(L, [k if j == i else 0 for j in range(model.r)]))
                     for k in range(1, m + 1)) for i in range(model.r))
    q = h0(model, L)
    proper = proper_status(model, range(model.r))
    hyps = (
        Hypothesis("divisors intersect properly",
                   {"verified": VERIFIED, "assumed": ASSUMED}.get(proper, FAILED), proper),
        Hypothesis("L_b acyclic on the box", VERIFIED, f"m = {m}"),
        Hypothesis("h0(L) >= 1", VERIFIED if q >= 1 else FAILED, f"h0 = {q}"),
    )
    return BoundValue(Fraction(min(sums), q) if q else Fraction(0), "koszul-box", hyps,
                      details={"m": m, "sums": sums})


def bound_prop53(model: MonomialModel, L: Sequence[int], a: Sequence[int], m: int) -> Prop53Result:
    """``sum_i a_i sum_{k=1}^m h0(L - k D_i)`` when every ``L_b`` on the box is acyclic.

    Also evaluates the inclusion-exclusion identity at every box and returns
    the derived lower bound :func:`koszul_nu_bound` for nu.
    """
    L, a = tuple(L), tuple(int(x) for x in a)
    if len(a) != model.r:
        raise MalformedInputError("one weight per divisor is required")
    nu = koszul_nu_bound(model, L, m)
    bound = sum(x * s for x, s in zip(a, nu.details["sums"]))
    identity = {b: inclusion_exclusion(model, L, BoxIndex(m, b)) for b in _box(m, model.r)}
    return Prop53Result(bound, identity, nu)
