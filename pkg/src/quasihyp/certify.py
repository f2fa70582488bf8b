"""Hypothesis checklists and inequality chains assembled into certificates.

A certificate records every hypothesis with a status and every step of the
inequality chain with the raw inputs it was computed from. The verdict is
``certified`` only when all hypotheses are verified and every exact chain
step survives an independent recomputation (:func:`reverify_step`), which
uses different formulas from the ones that produced the step: section-space
dimensions instead of binomial counts, a brute-force intersection expansion,
the integral form of the theta bound, and a geometric series for lambda_d.

Theorem identifiers (``"3.3"``, ``"2.1"``, ...) are interface names; see
:data:`THEOREMS` for what each one certifies.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .bounds import (ASSUMED, FAILED, VERIFIED, Hypothesis, alpha_slope_bound, bound_prop41,
                     bound_thm54, lambda_d)
from .errors import AcyclicityError, DegenerateError, MalformedInputError
from .exactalg import RationalMatrix, kernel, rank
from .geometry import MonomialModel, empty_status, h0, nonempty_subsets, positivity_flags, proper_status, section_space
from .koszul import koszul_nu_bound, largest_acyclic_box
from .lattice import IntersectionForm, NefCone, NSClass, class_sum, is_nef, max_theta, product_lattice
from .multiplicity import find_fixed_point

__all__ = [
    "THEOREMS",
    "Configuration",
    "ChainStep",
    "Certificate",
    "certify_criterion",
    "certify_thm21_pipeline",
    "certify_thm12",
    "certify_theta",
    "certify",
    "reverify_step",
    "verify_certificate",
]

CERTIFIED = "certified"
WITH_ASSUMPTIONS = "certified-with-assumptions"
NOT_CERTIFIED = "not-certified"

ARITHMETIC, ANALYTIC = "arithmetic", "analytic"

# id -> (template, flavor)
THEOREMS = {
    "3.3": ("criterion", ARITHMETIC),
    "3.5": ("criterion", ANALYTIC),
    "2.1": ("multiplicities", None),
    "1.1": ("multiplicities-criterion", ARITHMETIC),
    "1.3": ("multiplicities-criterion", ANALYTIC),
    "1.2": ("nef-2d", ARITHMETIC),
    "1.4": ("nef-2d", ANALYTIC),
    "2.2": ("theta", ARITHMETIC),
}

CONCLUSIONS = {
    ARITHMETIC: "the complement of the divisors is arithmetically quasi-hyperbolic",
    ANALYTIC: "the complement of the divisors is Brody quasi-hyperbolic",
}

RELATIONS = {">": lambda a, b: a > b, ">=": lambda a, b: a >= b, "=": lambda a, b: a == b}


# -- configuration --------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    """Divisors as classes in an intersection lattice, plus how to decide their geometry.

    With a ``model`` the geometric hypotheses are decided from the equations;
    without one they come only from the declarations (status ``assumed``) and
    anything undeclared counts as failed.
    """

    form: IntersectionForm
    cone: NefCone
    divisors: tuple
    labels: tuple
    model: MonomialModel | None = None
    declared_ample: frozenset = frozenset()
    declared_almost_ample: frozenset = frozenset()
    declared_proper: frozenset = frozenset()
    declared_empty: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "divisors", tuple(self.divisors))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.divisors) != len(self.labels):
            raise MalformedInputError("one label per divisor is required")
        if not self.divisors:
            raise MalformedInputError("a configuration needs at least one divisor")
        for name in ("declared_proper", "declared_empty"):
            object.__setattr__(self, name, frozenset(frozenset(s) for s in getattr(self, name)))
        for name in ("declared_ample", "declared_almost_ample"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @classmethod
    def from_model(cls, model: MonomialModel) -> "Configuration":
        form, cone = product_lattice(model.dims)
        divisors = tuple(form.cls(D.degree) for D in model.divisors)
        return cls(form, cone, divisors, tuple(D.label for D in model.divisors), model)

    @property
    def d(self) -> int:
        return self.form.dimension

    @property
    def r(self) -> int:
        return len(self.divisors)

    def proper(self, I) -> tuple:
        """(status, evidence) for proper intersection of the divisors in ``I``."""
        I = frozenset(I)
        if self.model is not None:
            s = proper_status(self.model, I)
            return (FAILED, "undecided and not declared") if s == "undecided" else (s, "equations")
        if any(I <= s for s in self.declared_proper):
            return ASSUMED, "declared"
        return FAILED, "not declared"

    def empty(self, I) -> tuple:
        I = frozenset(I)
        if self.model is not None:
            s = empty_status(self.model, I)
            return (FAILED, "undecided and not declared") if s == "undecided" else (s, "equations")
        if any(s <= I for s in self.declared_empty):
            return ASSUMED, "declared"
        return FAILED, "not declared"

    def ample(self, i: int) -> tuple:
        if self.model is not None:
            ok = positivity_flags(self.model, self.model.degree(i)).ample
            return (VERIFIED if ok else FAILED), "multidegree"
        if i in self.declared_ample:
            return ASSUMED, "declared"
        return FAILED, "not declared"

    def almost_ample(self, i: int) -> tuple:
        if self.model is not None:
            ok = positivity_flags(self.model, self.model.degree(i)).almost_ample
            return (VERIFIED if ok else FAILED), "multidegree"
        if i in self.declared_almost_ample or i in self.declared_ample:
            return ASSUMED, "declared"
        return FAILED, "not declared"

    def meeting_subsets(self) -> list:
        if self.model is not None:
            return nonempty_subsets(self.model)
        return [I for size in range(1, self.r + 1) for I in itertools.combinations(range(self.r), size)
                if not any(s <= frozenset(I) for s in self.declared_empty)]


def _as_config(obj) -> Configuration:
    if isinstance(obj, Configuration):
        return obj
    if isinstance(obj, MonomialModel):
        return Configuration.from_model(obj)
    raise MalformedInputError(f"expected a model or configuration, got {type(obj).__name__}")


def _fold(name: str, records: Sequence[tuple]) -> Hypothesis:
    """One hypothesis from many (status, evidence) records; the worst status wins."""
    statuses = [s for s, _ in records]
    if not records:
        return Hypothesis(name, VERIFIED, "vacuous")
    if FAILED in statuses:
        bad = next(e for s, e in records if s == FAILED)
        return Hypothesis(name, FAILED, f"{statuses.count(FAILED)} of {len(records)} fail ({bad})")
    if ASSUMED in statuses:
        return Hypothesis(name, ASSUMED, f"{statuses.count(ASSUMED)} of {len(records)} declared")
    return Hypothesis(name, VERIFIED, f"{len(records)} checked")


def _gate(name: str, ok: bool, evidence: str = "") -> Hypothesis:
    return Hypothesis(name, VERIFIED if ok else FAILED, evidence)


# -- records ----------------------------------------------------------------------

@dataclass(frozen=True)
class ChainStep:
    """``value relation bound`` where ``value`` was computed by rule ``source`` from ``inputs``."""

    quantity: str
    value: Fraction
    relation: str
    bound: Fraction
    source: str
    asymptotic: bool = False
    inputs: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise MalformedInputError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "bound", Fraction(self.bound))

    def holds(self) -> bool:
        return RELATIONS[self.relation](self.value, self.bound)

    def render(self) -> str:
        return f"{self.value} {self.relation} {self.bound}"

    def to_dict(self) -> dict:
        return {"quantity": self.quantity, "value": str(self.value), "relation": self.relation,
                "bound": str(self.bound), "rendered": self.render(), "source": self.source,
                "asymptotic": self.asymptotic, "inputs": self.inputs}

    @classmethod
    def from_dict(cls, data: dict) -> "ChainStep":
        return cls(data["quantity"], Fraction(data["value"]), data["relation"], Fraction(data["bound"]),
                   data["source"], bool(data.get("asymptotic", False)), dict(data.get("inputs", {})))


@dataclass(frozen=True)
class Certificate:
    theorem: str
    flavor: str | None
    hypotheses: tuple
    chain: tuple
    verdict: str
    conclusion: str = ""
    notes: tuple = ()

    def recorded_verdict_consistent(self) -> bool:
        return self.verdict == verdict_from_records(self.hypotheses, self.chain)

    def self_check(self, config=None) -> bool:
        """Verdict matches the records and, given the configuration, every exact step re-verifies."""
        if not self.recorded_verdict_consistent():
            return False
        if config is None:
            return True
        return not verify_certificate(self, config)

    @property
    def rendered_chain(self) -> tuple:
        return tuple(s.render() for s in self.chain)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "flavor": self.flavor,
            "verdict": self.verdict,
            "conclusion": self.conclusion,
            "hypotheses": [{"name": h.name, "status": h.status, "evidence": h.evidence}
                           for h in self.hypotheses],
            "chain": [s.to_dict() for s in self.chain],
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        hyps = tuple(Hypothesis(h["name"], h["status"], h.get("evidence", "")) for h in data["hypotheses"])
        chain = tuple(ChainStep.from_dict(s) for s in data["chain"])
        return cls(data["theorem"], data.get("flavor"), hyps, chain, data["verdict"],
                   data.get("conclusion", ""), tuple(data.get("notes", ())))


def verdict_from_records(hypotheses: Sequence[Hypothesis], chain: Sequence[ChainStep]) -> str:
    if not chain or any(h.status not in (VERIFIED, ASSUMED) for h in hypotheses):
        return NOT_CERTIFIED
    if not all(s.holds() for s in chain):
        return NOT_CERTIFIED
    if any(h.status == ASSUMED for h in hypotheses):
        return WITH_ASSUMPTIONS
    return CERTIFIED


def _finish(theorem: str, flavor, hyps: list, chain: list, config: Configuration,
            conclusion: str, notes: list) -> Certificate:
    chain = tuple(chain)
    failures = _reverify_all(chain, config)
    if failures:
        hyps = hyps + [Hypothesis("chain re-verification", FAILED, "; ".join(failures))]
    verdict = verdict_from_records(hyps, chain)
    return Certificate(theorem, flavor, tuple(hyps), chain, verdict,
                       conclusion if verdict != NOT_CERTIFIED else "", tuple(notes))


# -- independent re-verification --------------------------------------------------

def _coords(raw) -> tuple:
    return tuple(Fraction(x) for x in raw)


def _brute_intersection(form: IntersectionForm, coords: Sequence[tuple]) -> Fraction:
    """Full expansion over every index tuple; no support pruning, no shared code with the lattice."""
    table = dict(form.values)
    n = len(form.labels)
    total = Fraction(0)
    for idx in itertools.product(range(n), repeat=len(coords)):
        v = table.get(tuple(sorted(idx)))
        if v:
            term = v
            for c, i in zip(coords, idx):
                term *= c[i]
            total += term
    return total


def _brute_powers(form: IntersectionForm, powers) -> Fraction:
    coords = []
    for c, k in powers:
        coords.extend([c] * k)
    return _brute_intersection(form, coords)


def _slope_by_expansion(form: IntersectionForm, L: tuple, E: tuple) -> Fraction:
    d = form.dimension
    Ld = _brute_powers(form, [(L, d)])
    LE = _brute_powers(form, [(L, d - 1), (E, 1)])
    beta = Ld / (d * LE)
    M = (d - 1) * _brute_powers(form, [(L, d - 2), (E, 2)]) if d >= 2 else 0
    g = beta ** 3 / 3 if beta <= 1 else beta - Fraction(2, 3)
    return beta / 2 + M / Ld * g


def _alpha_by_sections(model: MonomialModel, L: tuple, i: int) -> Fraction:
    q = section_space(model, L, [0] * model.r).dim
    total, k = 0, 1
    while True:
        b = [k if j == i else 0 for j in range(model.r)]
        if any(x < 0 for x in model.residual(L, b)):
            break
        total += section_space(model, L, b).dim
        k += 1
    return Fraction(total, q)


def _in_cone_by_subsets(cone: NefCone, c: tuple) -> bool:
    """Carathéodory: ``c`` is in the cone iff it is a nonnegative combination of independent generators."""
    gens = [g.coords for g in cone.generators]
    n = len(c)
    if not any(c):
        return True
    k = rank(RationalMatrix(tuple(gens), n))
    for size in range(1, k + 1):
        for sub in itertools.combinations(gens, size):
            if rank(RationalMatrix(tuple(sub), n)) != size:
                continue
            # solve sum_j x_j sub_j = c through the kernel of [sub; -c]
            ker = kernel(RationalMatrix(tuple(zip(*sub, tuple(-x for x in c))), size + 1)).rows
            for v in ker:
                if v[-1] != 0:
                    x = [t / v[-1] for t in v[:-1]]
                    if all(t >= 0 for t in x):
                        return True
    return False


def _recompute(step: ChainStep, config: Configuration) -> Fraction:
    src, inp = step.source, step.inputs
    form = config.form
    d = form.dimension
    if src == "alpha-slope":
        return _slope_by_expansion(form, _coords(inp["L"]), _coords(inp["E"]))
    if src in ("pairwise-slope", "criterion"):
        L = _coords(inp["L"])
        slopes = [_slope_by_expansion(form, L, _coords(E)) for E in inp["E"]]
        return Fraction(2, int(inp["delta"])) * min(slopes)
    if src == "pairwise-alpha":
        model = config.model
        L = tuple(int(x) for x in inp["L"])
        return Fraction(2, int(inp["delta"])) * min(_alpha_by_sections(model, L, i) for i in range(model.r))
    if src == "koszul-box":
        model = config.model
        L = tuple(int(x) for x in inp["L"])
        q = section_space(model, L, [0] * model.r).dim
        m = int(inp["m"])
        sums = [sum(section_space(model, L, [k if j == i else 0 for j in range(model.r)]).dim
                    for k in range(1, m + 1)) for i in range(model.r)]
        return Fraction(min(sums), q)
    if src in ("lambda-theta", "criterion-lambda"):
        dd, theta = int(inp["d"]), Fraction(inp["theta"])
        ratio = 1 - Fraction(1, dd)
        return theta / (dd + 1) * sum(ratio ** j for j in range(dd + 1))
    if src == "theta-nef":
        L = _coords(inp["L"])
        theta = Fraction(inp["theta"])
        Ld = _brute_powers(form, [(L, d)])
        vals = []
        for D in inp["divisors"]:
            D = _coords(D)
            vals.append(sum(comb(d, j) * (-1) ** j * theta ** (j + 1) / (j + 1)
                            * _brute_powers(form, [(L, d - j), (D, j)]) for j in range(d + 1)))
        return min(vals) / Ld
    if src == "theta-max":
        L = _coords(inp["L"])
        theta = Fraction(inp["theta"])
        for D in inp["divisors"]:
            rest = tuple(a - theta * d * b for a, b in zip(L, _coords(D)))
            if not _in_cone_by_subsets(config.cone, rest):
                raise DegenerateError(f"L - {theta}*{d}*D is not in the cone")
        return theta
    raise MalformedInputError(f"no re-verification rule for source {src!r}")


def reverify_step(step: ChainStep, config) -> str | None:
    """``None`` if the step's value re-derives from its inputs, else a description of the mismatch.

    Whether the relation holds is judged separately by the verdict; a false
    relation with a correct value is an honest negative result, not a mismatch.
    """
    config = _as_config(config)
    try:
        value = _recompute(step, config)
    except (ArithmeticError, KeyError, TypeError, ValueError, AttributeError) as exc:
        return f"{step.quantity}: recomputation failed ({exc})"
    if value != step.value:
        return f"{step.quantity}: recorded {step.value}, recomputed {value}"
    return None


def _reverify_all(chain: Sequence[ChainStep], config: Configuration) -> list:
    return [msg for msg in (reverify_step(s, config) for s in chain) if msg]


def verify_certificate(cert: Certificate, config) -> list:
    """Mismatches found by re-deriving every chain step; empty when the certificate checks out."""
    return _reverify_all(cert.chain, _as_config(config))


def _jsonable(cls_or_tuple) -> list:
    coords = cls_or_tuple.coords if isinstance(cls_or_tuple, NSClass) else cls_or_tuple
    return [str(Fraction(x)) for x in coords]


# -- criterion --------------------------------------------------------------------

def _nu_lower_bound(model: MonomialModel, L: tuple) -> tuple:
    """Best certified lower bound for nu: ``(BoundValue, inputs)`` or ``(None, reason)``."""
    r = model.r
    candidates = []
    for delta in range(2, r + 1):
        bv = bound_prop41(model, L, delta)
        if not bv.failed:
            candidates.append((bv, {"L": list(L), "delta": delta}))
            break
    fallback = None
    if r >= 2 and not candidates:
        fallback = (bound_prop41(model, L, 2), {"L": list(L), "delta": 2})
    kmax = 0
    for i in range(r):
        k = 0
        while h0(model, model.residual(L, [k + 1 if j == i else 0 for j in range(r)])) > 0:
            k += 1
        kmax = max(kmax, k)
    mk = largest_acyclic_box(model, L, cap=kmax) if kmax >= 1 else 0
    if mk >= 1:
        try:
            bv = koszul_nu_bound(model, L, mk)
        except AcyclicityError:
            bv = None
        if bv is not None:
            if not bv.failed:
                candidates.append((bv, {"L": list(L), "m": mk}))
            elif fallback is None:
                fallback = (bv, {"L": list(L), "m": mk})
    if candidates:
        def rank_key(c):
            bv = c[0]
            return (bv.value, not bv.conditional)
        return max(candidates, key=rank_key)
    return fallback if fallback is not None else (None, "no applicable lower bound for nu")


def certify_criterion(model: MonomialModel, m: int, flavor: str = ARITHMETIC) -> Certificate:
    """Criterion for ``L = m * sum D_i``: pairwise proper, ``L`` free and big, ``nu(L; D) > m``.

    The nu inequality is certified only through proven lower bounds (the
    pairwise alpha bound or the Koszul box bound), whichever is larger.
    """
    if flavor not in CONCLUSIONS:
        raise MalformedInputError(f"unknown flavor {flavor!r}")
    if m < 1:
        raise MalformedInputError("m must be a positive integer")
    config = Configuration.from_model(model)
    theorem = "3.3" if flavor == ARITHMETIC else "3.5"
    L = model.sum_degree([m] * model.r)
    flags = positivity_flags(model, L)
    hyps = [
        _fold("divisors pairwise intersect properly",
              [config.proper(P) for P in itertools.combinations(range(model.r), 2)]),
        _gate("L free", flags.free, f"L = O{L}"),
        _gate("L big", flags.big, f"L = O{L}"),
    ]
    notes = []
    chain = []
    if flags.free and flags.big:
        bv, extra = _nu_lower_bound(model, L)
        if bv is None:
            hyps.append(Hypothesis("certified lower bound for nu", FAILED, extra))
        else:
            for h in bv.hypotheses:
                hyps.append(Hypothesis(f"{bv.source}: {h.name}", h.status, h.evidence))
            chain.append(ChainStep(f"lower bound for nu(L; D) via {bv.source}", bv.value, ">", m,
                                   bv.source, False, extra))
            notes.append(f"nu bound source: {bv.source}")
    return _finish(theorem, flavor, hyps, chain, config, CONCLUSIONS[flavor], notes)


# -- multiplicity pipeline --------------------------------------------------------

def certify_thm21_pipeline(config, delta: int, theorem: str = "2.1", damping=Fraction(1, 2)) -> Certificate:
    """Multiplicities from the simplex fixed point, then the alpha-slope and pairwise chain.

    ``theorem='2.1'`` certifies ``liminf nu(nL; m_i D_i)/n > r/(d delta)``;
    ``'1.1'``/``'1.3'`` additionally need ``r = d delta`` and feed the
    criterion, flagged asymptotic.
    """
    if theorem not in ("2.1", "1.1", "1.3"):
        raise MalformedInputError(f"the multiplicity pipeline does not certify {theorem!r}")
    config = _as_config(config)
    flavor = THEOREMS[theorem][1]
    d, r = config.d, config.r
    hyps = [
        _gate("d >= 2", d >= 2, f"d = {d}"),
        _gate("delta >= 2", delta >= 2, f"delta = {delta}"),
        _fold("divisors almost ample", [config.almost_ample(i) for i in range(r)]),
        _fold("divisors pairwise intersect properly",
              [config.proper(P) for P in itertools.combinations(range(r), 2)]),
        _fold(f"every {delta + 1}-fold intersection empty",
              [config.empty(S) for S in itertools.combinations(range(r), delta + 1)]),
    ]
    if theorem != "2.1":
        hyps.append(_gate("r = d * delta", r == d * delta, f"r = {r}, d * delta = {d * delta}"))
    notes, chain = [], []
    if d < 2:
        return _finish(theorem, flavor, hyps, chain, config, "", ["dimension too small"])
    try:
        fp = find_fixed_point(config.form, config.divisors, damping=damping)
    except DegenerateError as exc:
        hyps.append(Hypothesis("fixed-point inequality at rounded point", FAILED, str(exc)))
        return _finish(theorem, flavor, hyps, chain, config, "", notes)
    hyps.append(_gate("fixed-point inequality at rounded point", fp.verified,
                      f"method {fp.method}, residual {fp.residual}" if fp.verified else fp.note))
    if not fp.verified:
        return _finish(theorem, flavor, hyps, chain, config, "", notes)
    mults = fp.multiplicities
    notes.append("multiplicities " + ", ".join(f"{lab}: {k}" for lab, k in zip(config.labels, mults)))
    L = class_sum(list(config.divisors), mults)
    Es = [k * D for k, D in zip(mults, config.divisors)]
    hyps.append(_fold("L - m_i D_i nef", [(VERIFIED if is_nef(config.cone, L - E) else FAILED, "cone")
                                          for E in Es]))
    hyps.append(_fold("m_i D_i free and big (up to a multiple)", [config.almost_ample(i) for i in range(r)]))
    half = Fraction(r, 2 * d)
    slopes = []
    for lab, k, E in zip(config.labels, mults, Es):
        s = alpha_slope_bound(config.form, L, E)
        slopes.append(s)
        chain.append(ChainStep(f"slope bound for alpha(nL; {k}*{lab})/n", s, ">", half, "alpha-slope",
                               False, {"L": _jsonable(L), "E": _jsonable(E)}))
    agg = Fraction(2, delta) * min(slopes) if delta >= 1 else Fraction(0)
    inputs = {"L": _jsonable(L), "E": [_jsonable(E) for E in Es], "delta": delta}
    chain.append(ChainStep("(2/delta) min_i slope bound, lower bound for liminf nu(nL; m_i D_i)/n",
                           agg, ">", Fraction(r, d * delta), "pairwise-slope", False, inputs))
    conclusion = f"liminf nu(nL; m_1 D_1, ..., m_r D_r)/n > {Fraction(r, d * delta)}"
    if theorem != "2.1":
        chain.append(ChainStep("liminf nu(nL; m_i D_i)/n against the criterion threshold, n large",
                               agg, ">", 1, "criterion", True, inputs))
        conclusion = CONCLUSIONS[flavor]
    return _finish(theorem, flavor, hyps, chain, config, conclusion, notes)


# -- nef routes -------------------------------------------------------------------

def certify_thm12(config, theorem: str = "1.2") -> Certificate:
    """``r >= 2d`` ample, properly intersecting divisors with ``L - 2d D_i`` nef; bound ``2 lambda_d > 1``."""
    if theorem not in ("1.2", "1.4"):
        raise MalformedInputError(f"certify_thm12 does not certify {theorem!r}")
    config = _as_config(config)
    flavor = THEOREMS[theorem][1]
    d, r = config.d, config.r
    L = class_sum(list(config.divisors))
    nef_ok = all(is_nef(config.cone, L - 2 * d * D) for D in config.divisors)
    hyps = [
        _gate("d >= 2", d >= 2, f"d = {d}"),
        _gate("r >= 2d", r >= 2 * d, f"r = {r}, 2d = {2 * d}"),
        _fold("divisors ample", [config.ample(i) for i in range(r)]),
        Hypothesis("divisors intersect properly", *config.proper(range(r))),
        _gate("L - 2d D_i nef for all i", nef_ok, "cone membership"),
    ]
    chain, notes = [], []
    if d >= 2:
        lam2 = 2 * lambda_d(d)
        chain.append(ChainStep("2 lambda_d, lower bound for liminf nu(nL; D)/n", lam2, ">", 1,
                               "lambda-theta", False, {"d": d, "theta": "2"}))
        if nef_ok:
            divs = [_jsonable(D) for D in config.divisors]
            t54 = bound_thm54(config.form, L, config.divisors, 2)
            chain.append(ChainStep("theta-nef bound at theta = 2", t54.value, ">=", lam2, "theta-nef",
                                   False, {"L": _jsonable(L), "divisors": divs, "theta": "2"}))
        chain.append(ChainStep("liminf nu(nL; D)/n against the criterion threshold, n large", lam2, ">", 1,
                               "criterion-lambda", True, {"d": d, "theta": "2"}))
    return _finish(theorem, flavor, hyps, chain, config, CONCLUSIONS[flavor], notes)


def certify_theta(config, flavor: str = ARITHMETIC) -> Certificate:
    """Largest ``theta`` with ``L - d theta D_i`` nef; certified when ``lambda_d theta > 1``."""
    config = _as_config(config)
    d, r = config.d, config.r
    L = class_sum(list(config.divisors))
    th = max_theta(config.form, config.cone, L, list(config.divisors), mode="d-times-single")
    hyps = [
        _gate("divisors nef", all(is_nef(config.cone, D) for D in config.divisors), "cone membership"),
        _fold("L ample", [config.ample(i) for i in range(r)]),
        Hypothesis("divisors intersect properly", *config.proper(range(r))),
        _gate("theta > 1", th.usable, th.note or f"theta = {th.value}"),
    ]
    chain = []
    if th.value is not None:
        divs = [_jsonable(D) for D in config.divisors]
        chain.append(ChainStep("largest theta with L - d theta D_i nef", th.value, ">", 1, "theta-max",
                               False, {"L": _jsonable(L), "divisors": divs, "theta": str(th.value)}))
        bound = lambda_d(d) * th.value
        chain.append(ChainStep("lambda_d theta, lower bound for liminf nu(nL; D)/n", bound, ">", 1,
                               "lambda-theta", False, {"d": d, "theta": str(th.value)}))
        chain.append(ChainStep("liminf nu(nL; D)/n against the criterion threshold, n large", bound, ">", 1,
                               "criterion-lambda", True, {"d": d, "theta": str(th.value)}))
    return _finish("2.2", flavor, hyps, chain, config, CONCLUSIONS[flavor], [])


def certify(theorem: str, config, *, m: int = 1, delta: int | None = None,
            damping=Fraction(1, 2)) -> Certificate:
    """Dispatch on a theorem identifier from :data:`THEOREMS`."""
    if theorem not in THEOREMS:
        raise MalformedInputError(f"unknown theorem id {theorem!r}; choose from {sorted(THEOREMS)}")
    template, flavor = THEOREMS[theorem]
    if template == "criterion":
        model = config.model if isinstance(config, Configuration) else config
        if model is None:
            raise MalformedInputError("the criterion needs an explicit model with equations")
        return certify_criterion(model, m, flavor)
    if template.startswith("multiplicities"):
        if delta is None:
            raise MalformedInputError(f"theorem {theorem} needs delta")
        return certify_thm21_pipeline(config, delta, theorem, damping)
    if template == "nef-2d":
        return certify_thm12(config, theorem)
    return certify_theta(config, flavor)
