"""Independent reference computations used only by the tests.

These go through sympy polynomials and matrices or plain enumeration, never
through the package's own linear algebra, so agreement is evidence rather
than tautology.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import sympy


def brute_h0(dims, e) -> int:
    """Count monomials of multidegree ``e`` by enumeration."""
    if any(x < 0 for x in e):
        return 0
    total = 1
    for dj, ej in zip(dims, e):
        total *= sum(1 for v in itertools.product(range(ej + 1), repeat=dj + 1) if sum(v) == ej)
    return total


def symbols_for(dims):
    return [sympy.symbols(f"x{j}_0:{dj + 1}") for j, dj in enumerate(dims)]


def form_to_sympy(form, syms):
    expr = 0
    for exp, c in form.terms:
        term = sympy.Rational(c.numerator, c.denominator)
        for block, xs in zip(exp, syms):
            for p, x in zip(block, xs):
                term *= x ** p
        expr += term
    return sympy.expand(expr)


def monomials(dims, e, syms):
    blocks = []
    for dj, ej, xs in zip(dims, e, syms):
        ms = []
        for v in itertools.product(range(ej + 1), repeat=dj + 1):
            if sum(v) == ej:
                m = 1
                for p, x in zip(v, xs):
                    m *= x ** p
                ms.append(m)
        blocks.append(ms)
    return [sympy.Mul(*combo) for combo in itertools.product(*blocks)]


def span_rank(polys, dims, L, syms) -> int:
    """Rank of a list of polynomials of multidegree ``L``, via a sympy coefficient matrix."""
    if not polys:
        return 0
    basis = monomials(dims, L, syms)
    flat = [x for xs in syms for x in xs]
    rows = []
    for p in polys:
        P = sympy.Poly(p, *flat)
        rows.append([P.coeff_monomial(m) for m in basis])
    return sympy.Matrix(rows).rank()


def product_generators(model, L, b, syms):
    """``prod f_i^{b_i}`` times every monomial of the residual degree."""
    res = tuple(L[j] - sum(bi * D.degree[j] for bi, D in zip(b, model.divisors)) for j in range(len(L)))
    if any(x < 0 for x in res):
        return []
    f = 1
    for bi, D in zip(b, model.divisors):
        f *= form_to_sympy(D.form, syms) ** bi
    return [sympy.expand(f * m) for m in monomials(model.dims, res, syms)]


def section_dim(model, L, b) -> int:
    syms = symbols_for(model.dims)
    return span_rank(product_generators(model, L, b, syms), model.dims, L, syms)


def filtration_dims(model, L, I, a, kmax):
    """``dim V_k`` for ``k = 1..kmax`` from every contributing ``b`` (no minimality shortcut)."""
    syms = symbols_for(model.dims)
    caps = [max(L) + 1] * len(I)
    bs = []
    for bI in itertools.product(*(range(c + 1) for c in caps)):
        full = [0] * model.r
        for i, x in zip(I, bI):
            full[i] = x
        gens = product_generators(model, L, full, syms)
        if gens:
            bs.append((sum(x * y for x, y in zip(a, bI)), gens))
    out = []
    for k in range(1, kmax + 1):
        polys = [g for w, gens in bs if w >= k for g in gens]
        out.append(span_rank(polys, model.dims, L, syms))
    return out


def product_intersection(dims, classes) -> Fraction:
    """Coefficient of ``prod h_j^{d_j}`` in ``prod_k (sum_j c_kj h_j)``."""
    hs = sympy.symbols(f"h0:{len(dims)}")
    expr = 1
    for c in classes:
        expr *= sum(sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) * h for x, h in zip(c, hs))
    mono = sympy.Mul(*(h ** dj for h, dj in zip(hs, dims)))
    coeff = sympy.Poly(sympy.expand(expr), *hs).coeff_monomial(mono)
    return Fraction(int(coeff.p), int(coeff.q))


def alpha_closed_form_p2(n: int) -> Fraction:
    """``alpha(O(2n); line)`` on the plane: ``C(2n+2,3)/C(2n+2,2)``."""
    return Fraction(comb(2 * n + 2, 3), comb(2 * n + 2, 2))


def cone_member_lp(generators, c) -> bool:
    """Cone membership by a floating LP feasibility check (integer test data only)."""
    import numpy as np
    from scipy.optimize import linprog

    A = np.array([[float(x) for x in g] for g in generators]).T
    rhs = np.array([float(x) for x in c])
    res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=rhs, bounds=[(0, None)] * A.shape[1], method="highs")
    return res.status == 0


def rref_sympy(rows):
    M = sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows])
    R, _ = M.rref()
    out = []
    for i in range(R.rows):
        row = [Fraction(int(R[i, j].p), int(R[i, j].q)) for j in range(R.cols)]
        if any(row):
            out.append(tuple(row))
    return tuple(out)
