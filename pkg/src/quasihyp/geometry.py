"""Monomial models: products of projective spaces with hypersurface divisors.

A line bundle on ``P^{d_1} x ... x P^{d_s}`` is named by its multidegree
``e = (e_1, ..., e_s)``; its global sections are the forms of that
multidegree, written as coordinate vectors over the monomial basis returned
by :func:`monomial_basis` (lexicographically decreasing exponent vectors,
factors in declaration order).

Exponent vectors are tuples of per-factor tuples, e.g. ``((2, 0, 1),)`` for
``x0^2 x2`` on ``P^2`` or ``((1, 0), (0, 1))`` for ``x0 y1`` on ``P^1 x P^1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .errors import MalformedInputError, UndefinedOrderError
from .exactalg import RationalMatrix, canonicalize, contains, is_subspace, rank, subspace_sum

__all__ = [
    "HomogeneousForm",
    "Hypersurface",
    "MonomialModel",
    "SectionSubspace",
    "PositivityFlags",
    "monomial_basis",
    "h0",
    "section_space",
    "vanishing_order",
    "intersects_properly",
    "intersection_empty",
    "positivity_flags",
    "polynomial_to_vector",
    "vector_to_polynomial",
]


def _compositions(total: int, parts: int):
    """Exponent tuples of length ``parts`` summing to ``total``, lex decreasing."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(dims: tuple, e: tuple) -> tuple:
    """Ordered monomials of multidegree ``e`` on the product with factor dims ``dims``."""
    if any(x < 0 for x in e):
        return ()
    per_factor = [tuple(_compositions(ej, dj + 1)) for dj, ej in zip(dims, e)]
    return tuple(itertools.product(*per_factor))


@lru_cache(maxsize=None)
def _monomial_index(dims: tuple, e: tuple) -> dict:
    return {mon: i for i, mon in enumerate(monomial_basis(dims, e))}


def _mul_exp(a: tuple, b: tuple) -> tuple:
    return tuple(tuple(x + y for x, y in zip(fa, fb)) for fa, fb in zip(a, b))


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            k = _mul_exp(ea, eb)
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


@dataclass(frozen=True)
class HomogeneousForm:
    """A nonzero multihomogeneous polynomial with rational coefficients."""

    multidegree: tuple
    terms: tuple  # sorted ((exponent, Fraction), ...)

    def __post_init__(self):
        deg = tuple(int(x) for x in self.multidegree)
        object.__setattr__(self, "multidegree", deg)
        if any(x < 0 for x in deg):
            raise MalformedInputError(f"negative multidegree {deg}")
        items = dict(self.terms) if not isinstance(self.terms, dict) else self.terms
        clean = {}
        for exp, coef in dict(items).items():
            exp = tuple(tuple(int(x) for x in f) for f in exp)
            if len(exp) != len(deg):
                raise MalformedInputError(f"exponent {exp} has {len(exp)} factors, expected {len(deg)}")
            for j, (f, dj) in enumerate(zip(exp, deg)):
                if any(x < 0 for x in f):
                    raise MalformedInputError(f"negative exponent in {exp}")
                if sum(f) != dj:
                    raise MalformedInputError(
                        f"exponent {exp} has factor-{j} degree {sum(f)}, form degree is {dj}")
            coef = Fraction(coef)
            if coef:
                clean[exp] = clean.get(exp, 0) + coef
        clean = {k: v for k, v in clean.items() if v}
        if not clean:
            raise MalformedInputError("zero form")
        object.__setattr__(self, "terms", tuple(sorted(clean.items(), reverse=True)))

    @classmethod
    def from_dict(cls, multidegree, terms: dict) -> "HomogeneousForm":
        return cls(tuple(multidegree), tuple(terms.items()))

    @property
    def poly(self) -> dict:
        return dict(self.terms)

    @property
    def total_degree(self) -> int:
        return sum(self.multidegree)

    def is_linear(self) -> bool:
        return self.total_degree == 1


@dataclass(frozen=True)
class Hypersurface:
    label: str
    form: HomogeneousForm

    def __post_init__(self):
        if not any(self.form.multidegree):
            raise MalformedInputError(f"divisor {self.label!r} has degree zero")

    @property
    def degree(self) -> tuple:
        return self.form.multidegree


@dataclass(frozen=True)
class MonomialModel:
    """``P^{d_1} x ... x P^{d_s}`` with an ordered list of hypersurface divisors.

    ``assert_proper`` and ``assert_empty`` hold index subsets (frozensets of
    0-based divisor indices) that the caller declares to intersect properly,
    resp. to have empty common zero locus; they are consulted only where the
    linear-form deciders return ``None``.
    """

    dims: tuple
    divisors: tuple
    assert_proper: frozenset = field(default_factory=frozenset)
    assert_empty: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "divisors", tuple(self.divisors))
        object.__setattr__(self, "assert_proper", frozenset(frozenset(s) for s in self.assert_proper))
        object.__setattr__(self, "assert_empty", frozenset(frozenset(s) for s in self.assert_empty))
        if not dims or any(x < 1 for x in dims):
            raise MalformedInputError(f"factor dimensions must be positive, got {dims}")
        if not self.divisors:
            raise MalformedInputError("a model needs at least one divisor")
        labels = [D.label for D in self.divisors]
        if len(set(labels)) != len(labels):
            raise MalformedInputError(f"duplicate divisor labels in {labels}")
        for D in self.divisors:
            if len(D.degree) != len(dims):
                raise MalformedInputError(f"divisor {D.label!r} has {len(D.degree)} factor degrees")
        for s in self.assert_proper | self.assert_empty:
            if not s or any(not 0 <= i < len(self.divisors) for i in s):
                raise MalformedInputError(f"assertion references unknown divisors {sorted(s)}")

    @property
    def d(self) -> int:
        return sum(self.dims)

    @property
    def r(self) -> int:
        return len(self.divisors)

    def degree(self, i: int) -> tuple:
        return self.divisors[i].degree

    def residual(self, L: Sequence[int], b: Sequence[int]) -> tuple:
        """Multidegree of ``L - sum_i b_i D_i`` (``b`` indexed over all divisors)."""
        out = list(L)
        for bi, D in zip(b, self.divisors):
            for j, x in enumerate(D.degree):
                out[j] -= bi * x
        return tuple(out)

    def sum_degree(self, weights: Sequence[int] | None = None) -> tuple:
        weights = weights or [1] * self.r
        return tuple(sum(w * D.degree[j] for w, D in zip(weights, self.divisors))
                     for j in range(len(self.dims)))

    def label_index(self, label: str) -> int:
        for i, D in enumerate(self.divisors):
            if D.label == label:
                return i
        raise KeyError(label)

    @classmethod
    def projective_space(cls, d: int, divisors, **kw) -> "MonomialModel":
        return cls((d,), tuple(divisors), **kw)


def linear_form(label: str, coeffs: Sequence, dims: Sequence[int] = None, factor: int = 0) -> Hypersurface:
    """Hypersurface cut by ``sum_k coeffs[k] x_k`` on factor ``factor``."""
    dims = tuple(dims) if dims is not None else (len(coeffs) - 1,)
    if len(coeffs) != dims[factor] + 1:
        raise MalformedInputError("coefficient count does not match factor dimension")
    deg = tuple(1 if j == factor else 0 for j in range(len(dims)))
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            exp = tuple(tuple((1 if (j == factor and t == k) else 0) for t in range(dj + 1))
                        for j, dj in enumerate(dims))
            terms[exp] = Fraction(c)
    return Hypersurface(label, HomogeneousForm.from_dict(deg, terms))


def h0(model_or_dims, e: Sequence[int]) -> int:
    """``prod_j C(e_j + d_j, d_j)`` if every ``e_j >= 0``, else 0."""
    dims = model_or_dims.dims if isinstance(model_or_dims, MonomialModel) else tuple(model_or_dims)
    if len(e) != len(dims):
        raise MalformedInputError(f"multidegree {tuple(e)} does not match {len(dims)} factors")
    if any(x < 0 for x in e):
        return 0
    out = 1
    for ej, dj in zip(e, dims):
        out *= comb(ej + dj, dj)
    return out


@dataclass(frozen=True)
class SectionSubspace:
    """Subspace of ``Γ(O(multidegree))`` in canonical form over the monomial basis."""

    multidegree: tuple
    basis: RationalMatrix

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def __le__(self, other: "SectionSubspace") -> bool:
        return is_subspace(self.basis, other.basis)

    def __contains__(self, vec) -> bool:
        return contains(self.basis, vec)

    def __add__(self, other: "SectionSubspace") -> "SectionSubspace":
        return SectionSubspace(self.multidegree, subspace_sum([self.basis, other.basis]))


def polynomial_to_vector(dims: tuple, e: tuple, poly: dict) -> tuple:
    idx = _monomial_index(tuple(dims), tuple(e))
    out = [Fraction(0)] * len(idx)
    for exp, c in poly.items():
        try:
            out[idx[exp]] += Fraction(c)
        except KeyError:
            raise MalformedInputError(f"monomial {exp} is not of multidegree {e}") from None
    return tuple(out)


def vector_to_polynomial(dims: tuple, e: tuple, vec: Sequence) -> dict:
    return {mon: Fraction(c) for mon, c in zip(monomial_basis(tuple(dims), tuple(e)), vec) if c}


@lru_cache(maxsize=4096)
def _product_form(model: MonomialModel, b: tuple) -> dict:
    """``prod_i f_i^{b_i}`` as a polynomial dict."""
    zero = tuple((0,) * (dj + 1) for dj in model.dims)
    out = {zero: Fraction(1)}
    for bi, D in zip(b, model.divisors):
        for _ in range(bi):
            out = _poly_mul(out, D.form.poly)
    return out


def _full_b(model: MonomialModel, b) -> tuple:
    if isinstance(b, dict):
        return tuple(b.get(i, 0) for i in range(model.r))
    b = tuple(int(x) for x in b)
    if len(b) != model.r:
        raise MalformedInputError(f"multiplicity vector of length {len(b)} for {model.r} divisors")
    return b


@lru_cache(maxsize=65536)
def _section_space_cached(model: MonomialModel, L: tuple, b: tuple) -> SectionSubspace:
    n = len(monomial_basis(model.dims, L))
    res = model.residual(L, b)
    if any(x < 0 for x in res) or n == 0:
        return SectionSubspace(L, RationalMatrix.zero(n))
    prod = _product_form(model, b)
    rows = []
    idx = _monomial_index(model.dims, L)
    for mon in monomial_basis(model.dims, res):
        row = [Fraction(0)] * n
        for exp, c in prod.items():
            row[idx[_mul_exp(exp, mon)]] += c
        rows.append(tuple(row))
    return SectionSubspace(L, canonicalize(RationalMatrix(tuple(rows), n)))


def section_space(model: MonomialModel, L: Sequence[int], b) -> SectionSubspace:
    """``(prod_i f_i^{b_i}) · Γ(O(L - sum b_i deg D_i))`` inside ``Γ(O(L))``.

    ``b`` is a length-``r`` sequence or a ``{index: multiplicity}`` dict.
    """
    b = _full_b(model, b)
    if any(x < 0 for x in b):
        raise MalformedInputError("multiplicities must be nonnegative")
    return _section_space_cached(model, tuple(L), b)


def section_generators(model: MonomialModel, L: Sequence[int], b) -> list:
    """Spanning vectors ``f^b · monomial`` of :func:`section_space` (not reduced)."""
    b = _full_b(model, b)
    L = tuple(L)
    res = model.residual(L, b)
    if any(x < 0 for x in res):
        return []
    prod = _product_form(model, b)
    return [polynomial_to_vector(model.dims, L, _poly_mul(prod, {mon: Fraction(1)}))
            for mon in monomial_basis(model.dims, res)]


def vanishing_order(model: MonomialModel, L: Sequence[int], s: Sequence, i: int) -> int:
    """Largest ``mu`` with ``s`` in ``f_i^mu · Γ(O(L - mu deg D_i))``."""
    if not any(s):
        raise UndefinedOrderError("vanishing order of the zero section is undefined")
    L = tuple(L)
    mu = 0
    while True:
        b = [0] * model.r
        b[i] = mu + 1
        res = model.residual(L, b)
        if any(x < 0 for x in res):
            return mu
        if s not in section_space(model, L, b):
            return mu
        mu += 1


# -- proper intersection and emptiness --------------------------------------

def _linear_coefficient_rows(model: MonomialModel, idx: Iterable[int]):
    """Per-factor coefficient matrices of linear divisors, or None if any is nonlinear."""
    rows = {j: [] for j in range(len(model.dims))}
    for i in idx:
        D = model.divisors[i]
        if not D.form.is_linear():
            return None
        j = D.degree.index(1)
        vec = [Fraction(0)] * (model.dims[j] + 1)
        for exp, c in D.form.terms:
            vec[exp[j].index(1)] = c
        rows[j].append(tuple(vec))
    return rows


def _linear_locus(model: MonomialModel, J) -> tuple:
    """(is_empty, codimension) of the common zero locus of linear divisors ``J``."""
    rows = _linear_coefficient_rows(model, J)
    codim = 0
    for j, rj in rows.items():
        if not rj:
            continue
        rk = rank(RationalMatrix(tuple(rj), model.dims[j] + 1))
        if rk == model.dims[j] + 1:
            return True, None
        codim += rk
    return False, codim


def _check_subset(model: MonomialModel, I) -> frozenset:
    I = frozenset(I)
    if not I:
        raise MalformedInputError("empty divisor subset")
    if any(not 0 <= i < model.r for i in I):
        raise MalformedInputError(f"unknown divisor index in {sorted(I)}")
    return I


def _asserted(assertions: frozenset, I: frozenset) -> bool:
    return any(I <= s for s in assertions)


def intersects_properly(model: MonomialModel, I) -> bool | None:
    """Decide whether the divisors indexed by ``I`` intersect properly.

    Complete for linear forms: every subset ``J`` must cut a locus that is
    empty or of codimension exactly ``|J|``. Returns ``None`` (undecided)
    when some form in ``I`` is nonlinear; see :func:`proper_status` for the
    assertion-aware variant.
    """
    I = _check_subset(model, I)
    if _linear_coefficient_rows(model, I) is None:
        return None
    idx = sorted(I)
    for size in range(1, len(idx) + 1):
        for J in itertools.combinations(idx, size):
            empty, codim = _linear_locus(model, J)
            if not empty and codim != size:
                return False
    return True


def intersection_empty(model: MonomialModel, I) -> bool | None:
    """Whether the common zero locus of ``I`` is empty; ``None`` if nonlinear."""
    I = _check_subset(model, I)
    if _linear_coefficient_rows(model, I) is None:
        return None
    return _linear_locus(model, sorted(I))[0]


def proper_status(model: MonomialModel, I) -> str:
    """'verified', 'assumed' (declared in the model) or 'failed'/'undecided'."""
    decided = intersects_properly(model, I)
    if decided is True:
        return "verified"
    if decided is False:
        return "failed"
    return "assumed" if _asserted(model.assert_proper, frozenset(I)) else "undecided"


def empty_status(model: MonomialModel, I) -> str:
    decided = intersection_empty(model, I)
    if decided is True:
        return "verified"
    if decided is False:
        return "failed"
    return "assumed" if frozenset(I) in model.assert_empty or any(
        s <= frozenset(I) for s in model.assert_empty) else "undecided"


def nonempty_subsets(model: MonomialModel) -> list:
    """The collection of nonempty index subsets whose divisors share a point.

    Undecided subsets count as meeting unless declared empty.
    """
    out = []
    for size in range(1, model.r + 1):
        for I in itertools.combinations(range(model.r), size):
            if empty_status(model, I) in ("verified", "assumed"):
                continue
            out.append(I)
    return out


# -- positivity ---------------------------------------------------------------

@dataclass(frozen=True)
class PositivityFlags:
    free: bool
    big: bool
    nef: bool
    almost_ample: bool
    acyclic: bool
    ample: bool


def positivity_flags(model_or_dims, e: Sequence[int]) -> PositivityFlags:
    """Positivity of ``O(e)`` on a product of projective spaces.

    Acyclicity uses the Künneth rule: every factor degree nonnegative, or some
    factor degree in ``[-d_j, -1]`` (which kills every cohomology group).
    """
    dims = model_or_dims.dims if isinstance(model_or_dims, MonomialModel) else tuple(model_or_dims)
    e = tuple(e)
    nonneg = all(x >= 0 for x in e)
    positive = all(x > 0 for x in e)
    acyclic = nonneg or any(-dj <= ej <= -1 for ej, dj in zip(e, dims))
    return PositivityFlags(free=nonneg, big=positive, nef=nonneg, almost_ample=positive,
                           acyclic=acyclic, ample=positive)
