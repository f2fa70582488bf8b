"""Closed-form quantities and lower bounds for nu and for alpha slopes.

Every value is an exact ``Fraction``. Bounds come back as :class:`BoundValue`
records carrying the hypotheses they depend on; a bound whose hypotheses are
not all verified is *conditional*, never silently dropped.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import DegenerateError, MalformedInputError
from .geometry import (MonomialModel, empty_status, h0, proper_status)
from .lattice import IntersectionForm, NefCone, NSClass, class_sum, intersection_number, is_nef, power_product

__all__ = [
    "Hypothesis",
    "BoundValue",
    "alpha",
    "g_beta",
    "lambda_d",
    "morse_lower_bound",
    "bound_cor43",
    "bound_prop41",
    "bound_thm54",
    "bound_cor55",
    "status_of",
]

VERIFIED, ASSUMED, FAILED = "verified", "assumed", "failed"


@dataclass(frozen=True)
class Hypothesis:
    name: str
    status: str
    evidence: str = ""


def status_of(flag) -> str:
    """Map ``True``/``None``/``False`` (decided, declared, refuted) onto a status."""
    if flag is True:
        return VERIFIED
    if flag is None:
        return ASSUMED
    return FAILED


def _fold(statuses: Sequence[str]) -> str:
    if any(s not in (VERIFIED, ASSUMED) for s in statuses):
        return FAILED
    return ASSUMED if ASSUMED in statuses else VERIFIED


@dataclass(frozen=True)
class BoundValue:
    """A rational bound, the rule that produced it, and its hypothesis checklist."""

    value: Fraction
    source: str
    hypotheses: tuple = ()
    asymptotic: bool = False
    details: dict = field(default_factory=dict, compare=False)

    @property
    def conditional(self) -> bool:
        return any(h.status != VERIFIED for h in self.hypotheses)

    @property
    def failed(self) -> tuple:
        return tuple(h for h in self.hypotheses if h.status == FAILED)


# -- scalar functions ---------------------------------------------------------

def alpha(model: MonomialModel, L: Sequence[int], E: int) -> Fraction:
    """``(1/h0(L)) sum_{k>=1} h0(L - k E)`` for divisor index ``E``."""
    L = tuple(L)
    q = h0(model, L)
    if q == 0:
        raise DegenerateError("alpha needs h0(L) >= 1")
    deg = model.degree(E)
    total, k = 0, 1
    while True:
        term = h0(model, tuple(x - k * y for x, y in zip(L, deg)))
        if term == 0:
            break
        total += term
        k += 1
    return Fraction(total, q)


def g_beta(beta) -> Fraction:
    """``beta^3/3`` below 1 and ``beta - 2/3`` above; continuous at 1."""
    beta = Fraction(beta)
    if beta < 0:
        raise MalformedInputError("g is defined on nonnegative reals")
    if beta <= 1:
        return beta ** 3 / 3
    return beta - Fraction(2, 3)


def lambda_d(d: int) -> Fraction:
    """``[1 - (1 - 1/d)^(d+1)] d/(d+1)``."""
    if d < 1:
        raise MalformedInputError("lambda_d needs d >= 1")
    return (1 - (1 - Fraction(1, d)) ** (d + 1)) * Fraction(d, d + 1)


def lambda_limit() -> float:
    return 1 - math.exp(-1)


# -- asymptotic section counts ------------------------------------------------

def morse_lower_bound(form: IntersectionForm, L: NSClass, E: NSClass, n: int, k: int, *,
                      cone: NefCone | None = None, e_free_big: bool | None = None) -> BoundValue:
    """Main polynomial of the lower bound for ``h0(nL - kE)``.

    ``<L^d>/d! n^d - <L^{d-1}E>/(d-1)! n^{d-1} k + (d-1)/d! <L^{d-2}E^2> n^{d-2} min(k^2, n^2)``.
    The unspecified ``O(n^{d-1})`` error term is not subtracted, so the result
    is tagged asymptotic.
    """
    d = form.dimension
    if n < 1 or k < 0:
        raise MalformedInputError("need n >= 1 and k >= 0")
    Ld = power_product(form, [(L, d)])
    LE = power_product(form, [(L, d - 1), (E, 1)])
    value = Fraction(Ld, factorial(d)) * n ** d - Fraction(LE, factorial(d - 1)) * n ** (d - 1) * k
    if d >= 2:
        LEE = power_product(form, [(L, d - 2), (E, 2)])
        value += Fraction(d - 1, factorial(d)) * LEE * Fraction(n) ** (d - 2) * min(k * k, n * n)
    hyps = (
        Hypothesis("E free and big", status_of(e_free_big), "declared" if e_free_big is None else "flag"),
        Hypothesis("L - E nef",
                   ASSUMED if cone is None else status_of(is_nef(cone, L - E)),
                   "no cone supplied" if cone is None else "cone membership"),
    )
    return BoundValue(value, "morse-main-term", hyps, asymptotic=True)


def cor43_terms(form: IntersectionForm, L: NSClass, E: NSClass) -> tuple:
    """``(beta, M, <L^d>)`` with ``beta = <L^d>/(d <L^{d-1}E>)`` and ``M = (d-1)<L^{d-2}E^2>``."""
    d = form.dimension
    Ld = power_product(form, [(L, d)])
    LE = power_product(form, [(L, d - 1), (E, 1)])
    if LE == 0:
        raise DegenerateError("<L^{d-1} E> = 0: degenerate divisor")
    beta = Fraction(Ld) / (d * LE)
    M = (d - 1) * power_product(form, [(L, d - 2), (E, 2)]) if d >= 2 else Fraction(0)
    return beta, M, Ld


def alpha_slope_bound(form: IntersectionForm, L: NSClass, E: NSClass) -> Fraction:
    """``beta/2 + M/<L^d> g(beta)``: lower bound for ``liminf alpha(nL; E)/n``."""
    beta, M, Ld = cor43_terms(form, L, E)
    if Ld == 0:
        raise DegenerateError("<L^d> = 0")
    if beta < 0:
        raise DegenerateError("negative beta; L or E is not positive")
    return beta / 2 + Fraction(M) / Ld * g_beta(beta)


def bound_cor43(form: IntersectionForm, L: NSClass, E: NSClass, *, cone: NefCone | None = None,
                e_free_big: bool | None = None) -> BoundValue:
    """Slope bound for ``alpha(nL; E)`` given ``E`` free and big and ``L - E`` nef."""
    value = alpha_slope_bound(form, L, E)
    hyps = (
        Hypothesis("E free and big", status_of(e_free_big), "declared" if e_free_big is None else "flag"),
        Hypothesis("L - E nef",
                   ASSUMED if cone is None else status_of(is_nef(cone, L - E)),
                   "no cone supplied" if cone is None else "cone membership"),
    )
    beta, M, _ = cor43_terms(form, L, E)
    return BoundValue(value, "alpha-slope", hyps, asymptotic=True,
                      details={"beta": beta, "M": Fraction(M)})


# -- lower bounds for nu ------------------------------------------------------

def bound_prop41(model: MonomialModel, L: Sequence[int], delta: int,
                 divisors: Sequence[int] | None = None) -> BoundValue:
    """``(2/delta) min_i alpha(L; D_i)`` for pairwise-proper divisors with empty (delta+1)-fold meets."""
    L = tuple(L)
    idx = list(range(model.r)) if divisors is None else list(divisors)
    r = len(idx)
    hyps = [Hypothesis("h0(L) >= 1", status_of(h0(model, L) >= 1), f"h0 = {h0(model, L)}"),
            Hypothesis("2 <= delta <= r", status_of(2 <= delta <= r), f"delta = {delta}, r = {r}")]
    pair = [proper_status(model, P) for P in itertools.combinations(idx, 2)]
    hyps.append(Hypothesis("pairwise proper intersection", _fold_undecided(pair),
                           f"{len(pair)} pairs checked"))
    if delta + 1 <= r:
        empt = [empty_status(model, S) for S in itertools.combinations(idx, delta + 1)]
        hyps.append(Hypothesis(f"every {delta + 1}-fold intersection empty", _fold_undecided(empt),
                               f"{len(empt)} subsets checked"))
    else:
        hyps.append(Hypothesis(f"every {delta + 1}-fold intersection empty", VERIFIED,
                               "fewer divisors than the fold"))
    if h0(model, L) < 1 or delta < 1:
        return BoundValue(Fraction(0), "pairwise-alpha", tuple(hyps))
    alphas = {i: alpha(model, L, i) for i in idx}
    value = Fraction(2, delta) * min(alphas.values())
    return BoundValue(value, "pairwise-alpha", tuple(hyps),
                      details={"alpha": alphas, "delta": delta})


def _fold_undecided(statuses: Sequence[str]) -> str:
    return _fold([FAILED if s == "undecided" else s for s in statuses])


def theta_sum(form: IntersectionForm, L: NSClass, D: NSClass, theta) -> Fraction:
    """``sum_{j=0}^d <L^{d-j} (L - theta D)^j>``."""
    d = form.dimension
    R = L - Fraction(theta) * D
    return sum((power_product(form, [(L, d - j), (R, j)]) for j in range(d + 1)), Fraction(0))


def bound_thm54(form: IntersectionForm, L: NSClass, divisors: Sequence[NSClass], theta, *,
                cone: NefCone | None = None, subsets: Sequence[Sequence[int]] | None = None,
                ample: bool | None = None) -> BoundValue:
    """``theta/((d+1)<L^d>) min_i sum_j <L^{d-j}(L - theta D_i)^j>``.

    Hypotheses: ``L`` ample, each ``D_i`` nef, ``theta > 1``, and
    ``L - theta sum_{i in I} D_i`` nef for every ``I`` in ``subsets``.
    """
    theta = Fraction(theta)
    d = form.dimension
    Ld = power_product(form, [(L, d)])
    if Ld == 0:
        raise DegenerateError("<L^d> = 0")
    value = theta / ((d + 1) * Ld) * min(theta_sum(form, L, D, theta) for D in divisors)
    hyps = [Hypothesis("L ample", status_of(ample), "declared" if ample is None else "flag"),
            Hypothesis("theta > 1", status_of(theta > 1), f"theta = {theta}")]
    if cone is None:
        hyps.append(Hypothesis("divisors nef", ASSUMED, "no cone supplied"))
        hyps.append(Hypothesis("L - theta*sum_I D_i nef on meeting subsets", ASSUMED, "no cone supplied"))
    else:
        hyps.append(Hypothesis("divisors nef", status_of(all(is_nef(cone, D) for D in divisors)),
                               "cone membership"))
        if subsets is None:
            hyps.append(Hypothesis("L - theta*sum_I D_i nef on meeting subsets", ASSUMED,
                                   "meeting subsets not supplied"))
        else:
            ok = all(is_nef(cone, L - theta * class_sum([divisors[i] for i in I])) for I in subsets)
            hyps.append(Hypothesis("L - theta*sum_I D_i nef on meeting subsets", status_of(ok),
                                   f"{len(subsets)} subsets, cone membership"))
    return BoundValue(value, "theta-nef", tuple(hyps), asymptotic=True, details={"theta": theta})


def bound_cor55(d: int, theta) -> BoundValue:
    """``lambda_d * theta``; the theta > 1 requirement is recorded, not enforced."""
    theta = Fraction(theta)
    hyps = (Hypothesis("theta > 1", status_of(theta > 1), f"theta = {theta}"),)
    return BoundValue(lambda_d(d) * theta, "lambda-theta", hyps, asymptotic=True,
                      details={"theta": theta, "lambda": lambda_d(d)})
