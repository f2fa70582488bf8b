"""Choosing integer multiplicities through a fixed point of a simplex self-map.

For weights ``t`` on the simplex put ``L_t = sum t_j D_j`` and
``p_i(t) = <L_t^{d-1} D_i>``. The map ``f(t)_i = phi(t) / p_i(t)`` with
``phi = (sum_i 1/p_i)^{-1}`` sends the simplex to itself. At a fixed point
``x`` every ``p_i(x) x_i`` equals ``phi(x)``, so ``r phi(x) = <L_x^d>`` and the
alpha-slope bound for ``(L_x, x_i D_i)`` clears ``r/(2d)`` for every ``i``.

Existence is topological; here the fixed point is approached by damped
iteration on exact rationals, rounded to a point ``(m_1/m, ..., m_r/m)``, and
the required strict inequality is re-checked exactly at the rounded point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .bounds import alpha_slope_bound
from .errors import DegenerateError, MalformedInputError
from .lattice import IntersectionForm, NSClass, class_sum, power_product

__all__ = [
    "SimplexPoint",
    "FixedPointResult",
    "phi",
    "f_map",
    "residual",
    "thm44_margins",
    "verify_thm44_inequality",
    "find_fixed_point",
]

SNAPSHOT_DENOMINATOR = 10 ** 12
GRID_DENOMINATOR = 24


@dataclass(frozen=True)
class SimplexPoint:
    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(x) for x in self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise MalformedInputError("empty simplex point")
        if any(x < 0 for x in coords):
            raise MalformedInputError(f"negative simplex coordinate in {coords}")
        if sum(coords) != 1:
            raise MalformedInputError(f"coordinates sum to {sum(coords)}, not 1")

    @classmethod
    def barycenter(cls, r: int) -> "SimplexPoint":
        return cls((Fraction(1, r),) * r)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def _pairings(form: IntersectionForm, divisors: Sequence[NSClass], t: SimplexPoint) -> list:
    if len(t) != len(divisors):
        raise MalformedInputError("one weight per divisor is required")
    d = form.dimension
    Lt = class_sum(list(divisors), t.coords)
    vals = [power_product(form, [(Lt, d - 1), (D, 1)]) for D in divisors]
    for i, v in enumerate(vals):
        if v <= 0:
            raise DegenerateError(
                f"<L_t^(d-1) D_{i + 1}> = {v} <= 0 at t = {[str(x) for x in t]}")
    return vals


def phi(form: IntersectionForm, divisors: Sequence[NSClass], t: SimplexPoint) -> Fraction:
    """``(sum_i 1/<L_t^{d-1} D_i>)^{-1}``."""
    return 1 / sum(Fraction(1) / v for v in _pairings(form, divisors, t))


def f_map(form: IntersectionForm, divisors: Sequence[NSClass], t: SimplexPoint) -> SimplexPoint:
    vals = _pairings(form, divisors, t)
    p = 1 / sum(Fraction(1) / v for v in vals)
    return SimplexPoint(tuple(p / v for v in vals))


def residual(form: IntersectionForm, divisors: Sequence[NSClass], t: SimplexPoint) -> Fraction:
    """``max_i |f(t)_i - t_i|``."""
    ft = f_map(form, divisors, t)
    return max(abs(a - b) for a, b in zip(ft, t))


def thm44_margins(form: IntersectionForm, divisors: Sequence[NSClass], y: SimplexPoint) -> list:
    """Alpha-slope bound of ``(L_y, y_i D_i)`` for each ``i``; each must exceed ``r/(2d)``."""
    if any(x <= 0 for x in y):
        raise MalformedInputError("the rounded point must be strictly positive")
    Ly = class_sum(list(divisors), y.coords)
    return [alpha_slope_bound(form, Ly, yi * D) for yi, D in zip(y, divisors)]


def verify_thm44_inequality(form: IntersectionForm, divisors: Sequence[NSClass],
                            y: SimplexPoint) -> bool:
    """Exact check of the strict inequality ``slope_i(y) > r/(2d)`` for all ``i``."""
    threshold = Fraction(len(divisors), 2 * form.dimension)
    try:
        return all(v > threshold for v in thm44_margins(form, divisors, y))
    except DegenerateError:
        return False


@dataclass(frozen=True)
class FixedPointResult:
    """Outcome of the fixed-point search.

    ``point`` is the best approximation of the fixed point (exact when
    ``residual`` is 0); ``rounded`` is ``(m_1/m, ..., m_r/m)``, where the
    inequality was checked.
    """

    point: SimplexPoint
    residual: Fraction
    multiplicities: tuple
    denominator: int
    verified: bool
    rounded: SimplexPoint | None = None
    iterations: int = 0
    method: str = "iteration"
    converged: bool = True
    note: str = ""


def _snapshot(coords: Sequence[Fraction], cap: int) -> SimplexPoint:
    approx = [x.limit_denominator(cap) for x in coords[:-1]]
    last = 1 - sum(approx)
    if last < 0 or any(x < 0 for x in approx):
        return SimplexPoint(tuple(coords))
    return SimplexPoint(tuple(approx) + (last,))


def _as_multiplicities(y: SimplexPoint) -> tuple:
    m = lcm(*(x.denominator for x in y))
    return tuple(int(x * m) for x in y), m


def _rounding_candidates(t: SimplexPoint, cap: int):
    """Continued-fraction roundings of ``t`` with common denominator ``<= cap``, coarsest first."""
    seen = set()
    k = 1
    while k <= cap:
        approx = [x.limit_denominator(k) for x in t]
        s = sum(approx)
        if s > 0 and all(a > 0 for a in approx):
            y = tuple(a / s for a in approx)
            if y not in seen:
                seen.add(y)
                point = SimplexPoint(y)
                if _as_multiplicities(point)[1] <= cap:
                    yield point
        k *= 2
    exact = tuple(t.coords)
    if all(x > 0 for x in exact) and exact not in seen and _as_multiplicities(t)[1] <= cap:
        yield t


def _grid_points(r: int, max_den: int):
    for m in range(r, max_den + 1):
        for cut in itertools.combinations(range(1, m), r - 1):
            parts = [b - a for a, b in zip((0,) + cut, cut + (m,))]
            yield SimplexPoint(tuple(Fraction(p, m) for p in parts))


def find_fixed_point(form: IntersectionForm, divisors: Sequence[NSClass], damping=Fraction(1, 2),
                     max_iters: int = 200, tolerance=Fraction(1, 10 ** 9),
                     denominator_cap: int = 10 ** 4, max_denominator_cap: int = 10 ** 6,
                     grid_denominator: int = GRID_DENOMINATOR) -> FixedPointResult:
    """Damped iteration ``t <- (1-g) t + g f(t)`` from the barycenter, then exact rounding.

    After each step the undamped image ``f(t)`` is also tested, so a map that
    is constant (or already at its fixed point) finishes immediately. Falls
    back to a grid search over points with denominator ``<= grid_denominator``
    when iteration stalls or no rounding verifies. The first verified point
    is returned; other fixed points, if any, are not searched for.
    """
    damping = Fraction(damping)
    tolerance = Fraction(tolerance)
    if not 0 < damping <= 1:
        raise MalformedInputError("damping must lie in (0, 1]")
    r = len(divisors)
    if r < 1:
        raise MalformedInputError("need at least one divisor")

    t = SimplexPoint.barycenter(r)
    res = residual(form, divisors, t)
    best, best_res = t, res
    iters = 0
    while res > tolerance and iters < max_iters:
        ft = f_map(form, divisors, t)
        iters += 1
        res_ft = residual(form, divisors, ft)
        if res_ft <= tolerance:
            t, res = ft, res_ft
            break
        t = _snapshot([(1 - damping) * a + damping * b for a, b in zip(t, ft)], SNAPSHOT_DENOMINATOR)
        res = residual(form, divisors, t)
        if res < best_res:
            best, best_res = t, res
    converged = res <= tolerance
    if converged:
        best, best_res = t, res

    if converged:
        # a nearby exact fixed point is preferred over the raw iterate
        for y in _rounding_candidates(best, denominator_cap):
            if residual(form, divisors, y) == 0:
                best, best_res = y, Fraction(0)
                break
        cap = denominator_cap
        while cap <= max_denominator_cap:
            for y in _rounding_candidates(best, cap):
                if verify_thm44_inequality(form, divisors, y):
                    mults, m = _as_multiplicities(y)
                    return FixedPointResult(best, best_res, mults, m, True, y, iters, "iteration", True)
            cap *= 2

    for y in _grid_points(r, grid_denominator):
        if verify_thm44_inequality(form, divisors, y):
            mults, m = _as_multiplicities(y)
            return FixedPointResult(best, best_res, mults, m, True, y, iters, "grid", converged,
                                    "" if converged else "iteration did not converge")
    note = "no rounded point satisfies the strict inequality"
    if not converged:
        note = "iteration did not converge; " + note
    return FixedPointResult(best, best_res, (), 0, False, None, iters, "none", converged, note)


def fixed_point_identity(form: IntersectionForm, divisors: Sequence[NSClass], x: SimplexPoint) -> tuple:
    """``(r * phi(x), <L_x^d>)``; equal at an exact fixed point."""
    Lx = class_sum(list(divisors), x.coords)
    return len(divisors) * phi(form, divisors, x), power_product(form, [(Lx, form.dimension)])
