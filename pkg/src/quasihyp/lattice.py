"""Divisor classes, a symmetric multilinear intersection form, and nef cones.

Classes are rational coordinate vectors over a fixed list of basis labels.
The intersection form stores one value per multiset of ``d`` basis labels;
evaluating it on ``d`` classes is plain multilinear expansion.

A nef cone is modelled as the cone generated by finitely many classes.
Membership is decided exactly through the cone's facet description
(computed once by a double-description style pass over generator subsets),
so that ``L - theta * S`` being nef reduces to finitely many linear
inequalities in ``theta``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Sequence

from .errors import DegenerateError, DimensionMismatchError, MalformedInputError
from .exactalg import RationalMatrix, canonicalize, kernel, rank

__all__ = [
    "NSClass",
    "IntersectionForm",
    "NefCone",
    "ThetaResult",
    "intersection_number",
    "power_product",
    "is_nef",
    "max_theta",
    "product_lattice",
]


@dataclass(frozen=True)
class NSClass:
    coords: tuple
    labels: tuple

    def __post_init__(self):
        coords = tuple(Fraction(x) for x in self.coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(coords) != len(self.labels):
            raise DimensionMismatchError(
                f"{len(coords)} coordinates over {len(self.labels)} basis labels")

    def _check(self, other: "NSClass"):
        if self.labels != other.labels:
            raise DimensionMismatchError("classes live over different bases")

    def __add__(self, other: "NSClass") -> "NSClass":
        self._check(other)
        return NSClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.labels)

    def __sub__(self, other: "NSClass") -> "NSClass":
        self._check(other)
        return NSClass(tuple(a - b for a, b in zip(self.coords, other.coords)), self.labels)

    def __neg__(self) -> "NSClass":
        return NSClass(tuple(-a for a in self.coords), self.labels)

    def __mul__(self, scalar) -> "NSClass":
        s = Fraction(scalar)
        return NSClass(tuple(s * a for a in self.coords), self.labels)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    @classmethod
    def zero(cls, labels) -> "NSClass":
        return cls((0,) * len(labels), labels)


def class_sum(classes: Sequence[NSClass], weights: Sequence = None) -> NSClass:
    if not classes:
        raise MalformedInputError("empty class list")
    weights = weights if weights is not None else [1] * len(classes)
    out = NSClass.zero(classes[0].labels)
    for w, c in zip(weights, classes):
        out = out + Fraction(w) * c
    return out


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric ``d``-linear form on the span of ``labels``.

    ``values`` maps sorted index tuples (multisets of basis positions) to
    rationals; missing multisets are zero.
    """

    dimension: int
    labels: tuple
    values: tuple  # sorted ((index multiset, Fraction), ...)

    def __post_init__(self):
        if self.dimension < 1:
            raise MalformedInputError("dimension must be at least 1")
        object.__setattr__(self, "labels", tuple(self.labels))
        raw = dict(self.values) if not isinstance(self.values, dict) else self.values
        clean = {}
        for key, v in raw.items():
            key = tuple(sorted(self._index(k) for k in key))
            if len(key) != self.dimension:
                raise MalformedInputError(
                    f"intersection key {key} has {len(key)} entries, dimension is {self.dimension}")
            v = Fraction(v)
            if key in clean and clean[key] != v:
                raise MalformedInputError(f"conflicting values for {key}")
            if v:
                clean[key] = v
        object.__setattr__(self, "values", tuple(sorted(clean.items())))

    def _index(self, k) -> int:
        if isinstance(k, int):
            if not 0 <= k < len(self.labels):
                raise MalformedInputError(f"basis index {k} out of range")
            return k
        try:
            return self.labels.index(k)
        except ValueError:
            raise MalformedInputError(f"unknown basis label {k!r}") from None

    @cached_property
    def table(self) -> dict:
        return dict(self.values)

    def cls(self, coords) -> NSClass:
        return NSClass(tuple(coords), self.labels)

    def basis_class(self, label) -> NSClass:
        i = self._index(label)
        return NSClass(tuple(1 if j == i else 0 for j in range(len(self.labels))), self.labels)


def intersection_number(form: IntersectionForm, classes: Sequence[NSClass]) -> Fraction:
    """``<c_1 ... c_d>`` by multilinear expansion."""
    if len(classes) != form.dimension:
        raise MalformedInputError(
            f"intersection of {len(classes)} classes on a {form.dimension}-dimensional form")
    for c in classes:
        if c.labels != form.labels:
            raise DimensionMismatchError("class basis does not match the form")
    supports = [[(i, x) for i, x in enumerate(c.coords) if x] for c in classes]
    table = form.table
    total = Fraction(0)
    for combo in itertools.product(*supports):
        key = tuple(sorted(i for i, _ in combo))
        v = table.get(key)
        if v:
            prod = v
            for _, x in combo:
                prod *= x
            total += prod
    return total


def power_product(form: IntersectionForm, powers: Sequence[tuple]) -> Fraction:
    """``<A^a B^b ...>`` for ``powers = [(A, a), (B, b), ...]`` with exponents summing to d."""
    classes = []
    for c, k in powers:
        classes.extend([c] * k)
    return intersection_number(form, classes)


class NefCone:
    """Cone generated by finitely many nonzero classes."""

    def __init__(self, generators: Sequence[NSClass]):
        gens = tuple(generators)
        if not gens:
            raise MalformedInputError("a nef cone needs at least one generator")
        labels = gens[0].labels
        for g in gens:
            if g.labels != labels:
                raise DimensionMismatchError("cone generators over different bases")
            if g.is_zero():
                raise MalformedInputError("zero cone generator")
        self.generators = gens
        self.labels = labels

    def __repr__(self):
        return f"NefCone({[list(map(str, g.coords)) for g in self.generators]})"

    @cached_property
    def _hrep(self) -> tuple:
        """(equations, inequalities): c is in the cone iff e·c = 0 and h·c >= 0."""
        n = len(self.labels)
        G = RationalMatrix(tuple(g.coords for g in self.generators), n)
        eqs = kernel(G).rows
        k = rank(G)
        ineqs = []
        seen = set()
        for sub in itertools.combinations(self.generators, k - 1):
            if k > 1 and rank(RationalMatrix(tuple(g.coords for g in sub), n)) != k - 1:
                continue
            normals = kernel(RationalMatrix(tuple(g.coords for g in sub) + tuple(eqs), n)).rows
            if len(normals) != 1:
                continue
            h = normals[0]
            signs = {_sign(_dot(h, g.coords)) for g in self.generators}
            if signs <= {0, 1}:
                pass
            elif signs <= {0, -1}:
                h = tuple(-x for x in h)
            else:
                continue
            key = _primitive_key(h)
            if key not in seen:
                seen.add(key)
                ineqs.append(h)
        return tuple(eqs), tuple(ineqs)

    @property
    def equations(self) -> tuple:
        return self._hrep[0]

    @property
    def inequalities(self) -> tuple:
        return self._hrep[1]

    def contains(self, c: NSClass) -> bool:
        if c.labels != self.labels:
            raise DimensionMismatchError("class basis does not match the cone")
        eqs, ineqs = self._hrep
        return (all(_dot(e, c.coords) == 0 for e in eqs)
                and all(_dot(h, c.coords) >= 0 for h in ineqs))


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _primitive_key(h) -> tuple:
    lead = next(x for x in h if x)
    return tuple(x / abs(lead) for x in h)


def is_nef(cone: NefCone, c: NSClass) -> bool:
    """True iff ``c`` is a nonnegative rational combination of the cone generators."""
    return cone.contains(c)


def theta_interval(cone: NefCone, L: NSClass, S: NSClass):
    """Set of ``theta`` with ``L - theta S`` nef, as ``(lo, hi)``; ``None`` bounds are infinite.

    Returns ``None`` when no ``theta`` works.
    """
    lo, hi = None, None
    eqs, ineqs = cone._hrep

    def cap_hi(v):
        nonlocal hi
        hi = v if hi is None else min(hi, v)

    def cap_lo(v):
        nonlocal lo
        lo = v if lo is None else max(lo, v)

    for e in eqs:
        a, s = _dot(e, L.coords), _dot(e, S.coords)
        if s == 0:
            if a != 0:
                return None
        else:
            cap_hi(a / s)
            cap_lo(a / s)
    for h in ineqs:
        a, s = _dot(h, L.coords), _dot(h, S.coords)
        if s > 0:
            cap_hi(a / s)
        elif s < 0:
            cap_lo(a / s)
        elif a < 0:
            return None
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


@dataclass(frozen=True)
class ThetaResult:
    """Largest ``theta`` making every required class nef."""

    value: Fraction | None
    usable: bool
    degenerate: bool = False
    note: str = ""
    constraints: tuple = field(default=())


def max_theta(form: IntersectionForm, cone: NefCone, L: NSClass, divisors: Sequence[NSClass],
              mode: str = "d-times-single", subsets: Sequence[Sequence[int]] | None = None) -> ThetaResult:
    """Largest ``theta`` with ``L - theta * S`` nef for every required ``S``.

    ``mode='per-subset'``: ``S = sum_{i in I} D_i`` for every ``I`` in ``subsets``.
    ``mode='d-times-single'``: ``S = d * D_i`` for every ``i``.

    Each requirement is linear in ``theta``; the result is the minimum of
    the per-requirement maxima. The value is usable only when ``theta > 1``.
    """
    if mode == "per-subset":
        if subsets is None:
            raise MalformedInputError("per-subset mode needs the list of subsets")
        reqs = [(tuple(I), class_sum([divisors[i] for i in I])) for I in subsets]
    elif mode == "d-times-single":
        reqs = [((i,), form.dimension * D) for i, D in enumerate(divisors)]
    else:
        raise MalformedInputError(f"unknown theta mode {mode!r}")
    if all(S.is_zero() for _, S in reqs):
        return ThetaResult(None, False, True, "all divisor classes are zero; theta unbounded")
    best, floor = None, None
    constraints = []
    for I, S in reqs:
        iv = theta_interval(cone, L, S)
        if iv is None:
            return ThetaResult(None, False, False, f"no theta makes L - theta*S nef for {I}")
        lo, hi = iv
        constraints.append((I, hi))
        if hi is not None:
            best = hi if best is None else min(best, hi)
        if lo is not None:
            floor = lo if floor is None else max(floor, lo)
    if best is not None and floor is not None and floor > best:
        return ThetaResult(None, False, False, "requirements have no common theta")
    if best is None:
        return ThetaResult(None, False, True, "theta unbounded", tuple(constraints))
    usable = best > 1
    note = "" if usable else "hypothesis theta > 1 fails"
    return ThetaResult(best, usable, False, note, tuple(constraints))


def product_lattice(dims: Sequence[int]):
    """Form and nef cone of ``P^{d_1} x ... x P^{d_s}`` over the hyperplane classes.

    ``<H_1^{a_1} ... H_s^{a_s}> = 1`` exactly when ``a_j = d_j`` for all ``j``.
    """
    dims = tuple(dims)
    labels = tuple(f"H{j + 1}" for j in range(len(dims))) if len(dims) > 1 else ("H",)
    key = tuple(j for j, dj in enumerate(dims) for _ in range(dj))
    form = IntersectionForm(sum(dims), labels, ((key, Fraction(1)),))
    cone = NefCone([form.basis_class(lab) for lab in labels])
    return form, cone


def top_self_intersection_multinomial(dims: Sequence[int]) -> int:
    """``d! / (d_1! ... d_s!)``: degree of the product under the sum of hyperplane classes."""
    out = factorial(sum(dims))
    for dj in dims:
        out //= factorial(dj)
    return out
