"""Exact rational linear algebra on row spaces.

Subspaces of ``Q^n`` are carried as :class:`RationalMatrix` values whose rows
span them. :func:`canonicalize` brings any spanning set to reduced row-echelon
form, which is unique per subspace, so subspace equality is plain ``==`` on
canonical matrices. Sums, intersections and kernels are all built on that one
primitive.

Elimination runs on sparse rows (``dict`` column -> ``Fraction``); section
spaces of monomial models are spanned by very sparse vectors, and this keeps
ambient dimensions in the low thousands workable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, InvalidChainError, MalformedInputError

__all__ = [
    "RationalMatrix",
    "SubspaceChain",
    "canonicalize",
    "subspace_sum",
    "subspace_intersection",
    "kernel",
    "rank",
    "contains",
    "is_subspace",
    "adapted_basis",
]

Vector = tuple  # tuple of Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise MalformedInputError(f"floating point entry {x!r}; use exact rationals")
    return Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    """Rows of rational numbers, all of length ``ncols``.

    ``ncols`` is stored explicitly so the empty matrix still knows its
    ambient dimension.
    """

    rows: tuple
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise MalformedInputError("negative column count")
        for r in self.rows:
            if len(r) != self.ncols:
                raise MalformedInputError(
                    f"ragged rows: expected length {self.ncols}, got {len(r)}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> "RationalMatrix":
        rows = [tuple(_as_fraction(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise MalformedInputError("cannot infer width of an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise MalformedInputError(
                    f"ragged rows: expected length {ncols}, got {len(r)}")
        return cls(tuple(rows), ncols)

    @classmethod
    def zero(cls, ncols: int) -> "RationalMatrix":
        return cls((), ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(_unit(n, i) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def to_lists(self) -> list:
        return [list(r) for r in self.rows]


def _unit(n: int, i: int) -> tuple:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def _sparse(row: Sequence[Fraction]) -> dict:
    return {j: v for j, v in enumerate(row) if v}


def _dense(row: dict, n: int) -> tuple:
    out = [Fraction(0)] * n
    for j, v in row.items():
        out[j] = v
    return tuple(out)


class _Echelon:
    """Incrementally maintained reduced echelon basis (sparse rows keyed by pivot)."""

    __slots__ = ("n", "basis")

    def __init__(self, n: int):
        self.n = n
        self.basis: dict = {}

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        for p in [c for c in row if c in self.basis]:
            coef = row.get(p)
            if not coef:
                continue
            for j, v in self.basis[p].items():
                nv = row.get(j, 0) - coef * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; return True if it enlarged the span."""
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        lead = row[p]
        if lead != 1:
            row = {j: v / lead for j, v in row.items()}
        for q, other in self.basis.items():
            coef = other.get(p)
            if coef:
                for j, v in row.items():
                    nv = other.get(j, 0) - coef * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        self.basis[p] = row
        return True

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(tuple(_dense(self.basis[p], self.n) for p in sorted(self.basis)),
                              self.n)


def canonicalize(m: RationalMatrix) -> RationalMatrix:
    """Reduced row-echelon form of ``m`` with zero rows dropped.

    Two matrices span the same row space iff their canonical forms are equal.
    """
    if not isinstance(m, RationalMatrix):
        m = RationalMatrix.from_rows(m)
    ech = _Echelon(m.ncols)
    for r in m.rows:
        ech.add(_sparse(r))
    return ech.matrix()


def rank(m: RationalMatrix) -> int:
    return canonicalize(m).nrows


def _check_same_width(parts: Sequence[RationalMatrix]):
    widths = {p.ncols for p in parts}
    if len(widths) > 1:
        raise DimensionMismatchError(f"ambient dimensions differ: {sorted(widths)}")


def subspace_sum(parts: Sequence[RationalMatrix]) -> RationalMatrix:
    """Canonical form of the span of all rows of all ``parts``."""
    parts = list(parts)
    if not parts:
        raise MalformedInputError("sum of no subspaces has no ambient dimension")
    _check_same_width(parts)
    ech = _Echelon(parts[0].ncols)
    for p in parts:
        for r in p.rows:
            ech.add(_sparse(r))
    return ech.matrix()


def kernel(m: RationalMatrix) -> RationalMatrix:
    """Canonical basis of ``{x : m x = 0}``."""
    c = canonicalize(m)
    n = c.ncols
    pivots = []
    for r in c.rows:
        pivots.append(next(j for j, v in enumerate(r) if v))
    pivset = set(pivots)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for p, r in zip(pivots, c.rows):
            if r[f]:
                v[p] = -r[f]
        vecs.append(_dense(v, n))
    return canonicalize(RationalMatrix(tuple(vecs), n))


def subspace_intersection(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Canonical form of ``row(a) ∩ row(b)``.

    Dual method: the intersection is the annihilator of the sum of the two
    annihilators.
    """
    _check_same_width([a, b])
    n = a.ncols
    ka, kb = kernel(a), kernel(b)
    if not ka.rows:
        return canonicalize(b)
    if not kb.rows:
        return canonicalize(a)
    return kernel(RationalMatrix(ka.rows + kb.rows, n))


def contains(space: RationalMatrix, vec: Sequence) -> bool:
    """True iff ``vec`` lies in the row space of ``space``."""
    if len(vec) != space.ncols:
        raise DimensionMismatchError("vector length does not match ambient dimension")
    ech = _Echelon(space.ncols)
    for r in space.rows:
        ech.add(_sparse(r))
    return not ech.reduce(_sparse([_as_fraction(x) for x in vec]))


def is_subspace(a: RationalMatrix, b: RationalMatrix) -> bool:
    """True iff ``row(a) ⊆ row(b)``."""
    _check_same_width([a, b])
    ech = _Echelon(b.ncols)
    for r in b.rows:
        ech.add(_sparse(r))
    return all(not ech.reduce(_sparse(r)) for r in a.rows)


@dataclass(frozen=True)
class SubspaceChain:
    """Decreasing sequence of finite vector sets ``F_1 ⊇ F_2 ⊇ ... ⊇ F_m = ∅``."""

    ambient_dim: int
    stages: tuple

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise InvalidChainError("ambient dimension must be positive")
        stages = tuple(tuple(tuple(_as_fraction(x) for x in v) for v in st)
                       for st in self.stages)
        object.__setattr__(self, "stages", stages)
        for k, st in enumerate(stages):
            for v in st:
                if len(v) != self.ambient_dim:
                    raise DimensionMismatchError(
                        f"stage {k + 1}: vector of length {len(v)} in dimension {self.ambient_dim}")
        for k in range(len(stages) - 1):
            if not set(stages[k + 1]) <= set(stages[k]):
                raise InvalidChainError(f"stage {k + 2} is not contained in stage {k + 1}")
        if stages and any(any(x for x in v) for v in stages[-1]):
            raise InvalidChainError("final stage must be empty")

    def span(self, k: int) -> RationalMatrix:
        """Canonical span of stage ``k`` (1-based)."""
        return canonicalize(RationalMatrix(self.stages[k - 1], self.ambient_dim))


def adapted_basis(chain: SubspaceChain) -> list:
    """Basis ``B`` of the ambient space with ``B ∩ F_k`` a basis of ``span(F_k)``.

    Works backward from the last stage, extending the current free family by
    vectors of ``F_k`` until it spans ``F_k``, then completes with unit vectors.
    """
    n = chain.ambient_dim
    ech = _Echelon(n)
    basis: list = []
    for stage in reversed(chain.stages):
        for v in stage:
            if ech.add(_sparse(v)):
                basis.append(v)
    for i in range(n):
        e = _unit(n, i)
        if ech.add(_sparse(e)):
            basis.append(e)
    return basis
