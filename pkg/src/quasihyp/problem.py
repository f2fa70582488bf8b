"""JSON problem files: parsing with positioned diagnostics, and a canonical digest.

A problem holds a model and task parameters::

    {"model": {"kind": "projective_space", "dims": [2],
               "divisors": [{"label": "x0", "linear": ["1", "0", "0"]}, ...],
               "assertions": {"assert_proper": [["C", "x0"]]}},
     "task": {"L": [4], "m": 1, "delta": 2, "theta": "2", "max_weight": 4}}

Divisors are given by ``linear`` coefficients (degree one on ``factor``) or
by ``degree`` plus ``terms``, a list of ``[exponent, coefficient]`` pairs
whose exponent is one vector per factor (a flat vector is accepted when
there is a single factor). ``kind: ns_lattice`` replaces equations with
classes in an abstract lattice::

    {"model": {"kind": "ns_lattice", "dimension": 2, "basis": ["H"],
               "intersections": [[["H", "H"], "1"]], "nef_cone": [["1"]],
               "divisors": [{"label": "D1", "class": ["1"]}],
               "assertions": {"ample": ["D1"], "assert_proper": [["D1"]]}}}

Coefficients are integers or ``"p/q"`` strings; floats are rejected.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .certify import Configuration
from .errors import ProblemFileError, QuasihypError
from .geometry import HomogeneousForm, Hypersurface, MonomialModel
from .lattice import IntersectionForm, NefCone

__all__ = ["Problem", "parse_problem", "load_problem", "TASK_KEYS"]

TASK_KEYS = ("L", "m", "delta", "theta", "max_weight", "box_size", "weights", "damping")
KINDS = ("projective_space", "product", "ns_lattice")


@dataclass(frozen=True)
class Problem:
    kind: str
    config: Configuration
    task: dict = field(default_factory=dict)
    canonical: dict = field(default_factory=dict, compare=False)

    @property
    def model(self) -> MonomialModel | None:
        return self.config.model

    @property
    def digest(self) -> str:
        blob = json.dumps(self.canonical, sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()

    def default_L(self) -> tuple:
        if "L" in self.task:
            return self.task["L"]
        if self.model is not None:
            return self.model.sum_degree([self.task.get("m", 1)] * self.model.r)
        raise ProblemFileError("lattice problems have no line bundle multidegree", "$.task.L")


def _fail(msg: str, where: str):
    raise ProblemFileError(msg, where)


def _rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        _fail(f"expected an integer or a 'p/q' string, got {x!r}", where)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            if any(c in x for c in ".eE"):
                raise ValueError
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            _fail(f"cannot read {x!r} as an exact rational", where)
    _fail(f"expected an integer or a 'p/q' string, got {type(x).__name__}", where)


def _int(x, where: str, minimum: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        _fail(f"expected an integer, got {x!r}", where)
    if minimum is not None and x < minimum:
        _fail(f"must be at least {minimum}, got {x}", where)
    return x


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        _fail(f"expected a list, got {type(x).__name__}", where)
    return x


def _obj(x, where: str) -> dict:
    if not isinstance(x, dict):
        _fail(f"expected an object, got {type(x).__name__}", where)
    return x


def _exponent(raw, dims: tuple, where: str) -> tuple:
    raw = _list(raw, where)
    if len(dims) == 1 and raw and all(isinstance(v, int) for v in raw):
        raw = [raw]
    if len(raw) != len(dims):
        _fail(f"exponent has {len(raw)} factor blocks, model has {len(dims)}", where)
    out = []
    for j, (block, dj) in enumerate(zip(raw, dims)):
        block = _list(block, f"{where}[{j}]")
        if len(block) != dj + 1:
            _fail(f"factor {j} needs {dj + 1} exponents, got {len(block)}", f"{where}[{j}]")
        out.append(tuple(_int(v, f"{where}[{j}][{t}]", 0) for t, v in enumerate(block)))
    return tuple(out)


def _divisor(raw, dims: tuple, where: str) -> Hypersurface:
    raw = _obj(raw, where)
    label = raw.get("label")
    if not isinstance(label, str) or not label:
        _fail("divisor needs a nonempty string label", f"{where}.label")
    if "linear" in raw:
        factor = _int(raw.get("factor", 0), f"{where}.factor", 0)
        if factor >= len(dims):
            _fail(f"factor {factor} out of range", f"{where}.factor")
        coeffs = _list(raw["linear"], f"{where}.linear")
        if len(coeffs) != dims[factor] + 1:
            _fail(f"need {dims[factor] + 1} coefficients, got {len(coeffs)}", f"{where}.linear")
        deg = tuple(1 if j == factor else 0 for j in range(len(dims)))
        terms = {}
        for k, c in enumerate(coeffs):
            c = _rational(c, f"{where}.linear[{k}]")
            if c:
                exp = tuple(tuple(1 if (j == factor and t == k) else 0 for t in range(dj + 1))
                            for j, dj in enumerate(dims))
                terms[exp] = c
    else:
        deg_raw = _list(raw.get("degree"), f"{where}.degree")
        if len(deg_raw) != len(dims):
            _fail(f"degree has {len(deg_raw)} entries, model has {len(dims)} factors", f"{where}.degree")
        deg = tuple(_int(v, f"{where}.degree[{j}]", 0) for j, v in enumerate(deg_raw))
        terms = {}
        for t, pair in enumerate(_list(raw.get("terms"), f"{where}.terms")):
            pw = f"{where}.terms[{t}]"
            pair = _list(pair, pw)
            if len(pair) != 2:
                _fail("each term is [exponent, coefficient]", pw)
            exp = _exponent(pair[0], dims, f"{pw}[0]")
            c = _rational(pair[1], f"{pw}[1]")
            if exp in terms:
                _fail("repeated exponent", pw)
            if c:
                terms[exp] = c
    if not terms:
        _fail("divisor form is identically zero", where)
    try:
        return Hypersurface(label, HomogeneousForm.from_dict(deg, terms))
    except QuasihypError as exc:
        _fail(str(exc), where)


def _label_sets(raw, labels: list, where: str) -> list:
    out = []
    for k, group in enumerate(_list(raw, where)):
        gw = f"{where}[{k}]"
        idx = []
        for t, lab in enumerate(_list(group, gw)):
            if lab not in labels:
                _fail(f"unknown divisor label {lab!r}", f"{gw}[{t}]")
            idx.append(labels.index(lab))
        if not idx:
            _fail("empty divisor subset", gw)
        out.append(frozenset(idx))
    return out


def _labels(raw, labels: list, where: str) -> list:
    out = []
    for t, lab in enumerate(_list(raw, where)):
        if lab not in labels:
            _fail(f"unknown divisor label {lab!r}", f"{where}[{t}]")
        out.append(labels.index(lab))
    return out


def _task(raw, n_div: int, n_fac: int | None, where: str) -> tuple:
    raw = _obj(raw, where)
    task, canon = {}, {}
    for key in raw:
        if key not in TASK_KEYS:
            _fail(f"unknown task key {key!r}; expected one of {list(TASK_KEYS)}", f"{where}.{key}")
    if "L" in raw:
        if n_fac is None:
            _fail("lattice problems take L as the sum of the divisors", f"{where}.L")
        L = _list(raw["L"], f"{where}.L")
        if len(L) != n_fac:
            _fail(f"L has {len(L)} entries, model has {n_fac} factors", f"{where}.L")
        task["L"] = tuple(_int(v, f"{where}.L[{j}]") for j, v in enumerate(L))
        canon["L"] = list(task["L"])
    for key, minimum in (("m", 1), ("delta", 1), ("max_weight", 1), ("box_size", 0)):
        if key in raw:
            task[key] = _int(raw[key], f"{where}.{key}", minimum)
            canon[key] = task[key]
    for key in ("theta", "damping"):
        if key in raw:
            task[key] = _rational(raw[key], f"{where}.{key}")
            canon[key] = str(task[key])
    if "weights" in raw:
        w = _list(raw["weights"], f"{where}.weights")
        if len(w) != n_div:
            _fail(f"need {n_div} weights, got {len(w)}", f"{where}.weights")
        task["weights"] = tuple(_int(v, f"{where}.weights[{j}]", 1) for j, v in enumerate(w))
        canon["weights"] = list(task["weights"])
    return task, canon


def _canon_sets(sets, labels) -> list:
    return sorted(sorted(labels[i] for i in s) for s in sets)


def _parse_model_space(m: dict, kind: str) -> tuple:
    if kind == "projective_space" and "dims" not in m and "dim" in m:
        dims = (_int(m["dim"], "$.model.dim", 1),)
    else:
        dims_raw = _list(m.get("dims"), "$.model.dims")
        dims = tuple(_int(v, f"$.model.dims[{j}]", 1) for j, v in enumerate(dims_raw))
        if not dims:
            _fail("need at least one factor", "$.model.dims")
        if kind == "projective_space" and len(dims) != 1:
            _fail("projective_space takes exactly one factor", "$.model.dims")
    divs_raw = _list(m.get("divisors"), "$.model.divisors")
    if not divs_raw:
        _fail("need at least one divisor", "$.model.divisors")
    divs = [_divisor(D, dims, f"$.model.divisors[{k}]") for k, D in enumerate(divs_raw)]
    labels = [D.label for D in divs]
    if len(set(labels)) != len(labels):
        _fail("duplicate divisor labels", "$.model.divisors")
    a = _obj(m.get("assertions", {}), "$.model.assertions")
    proper = _label_sets(a.get("assert_proper", []), labels, "$.model.assertions.assert_proper")
    empty = _label_sets(a.get("assert_empty", []), labels, "$.model.assertions.assert_empty")
    model = MonomialModel(dims, tuple(divs), frozenset(proper), frozenset(empty))
    canon = {
        "kind": kind, "dims": list(dims),
        "divisors": [{"label": D.label, "degree": list(D.degree),
                      "terms": [[[list(b) for b in e], str(c)] for e, c in D.form.terms]} for D in divs],
        "assert_proper": _canon_sets(proper, labels), "assert_empty": _canon_sets(empty, labels),
    }
    return Configuration.from_model(model), canon, len(dims)


def _parse_lattice(m: dict) -> tuple:
    d = _int(m.get("dimension"), "$.model.dimension", 1)
    basis = _list(m.get("basis"), "$.model.basis")
    if not basis or not all(isinstance(b, str) for b in basis) or len(set(basis)) != len(basis):
        _fail("basis must be a list of distinct strings", "$.model.basis")
    values = {}
    for k, pair in enumerate(_list(m.get("intersections"), "$.model.intersections")):
        pw = f"$.model.intersections[{k}]"
        pair = _list(pair, pw)
        if len(pair) != 2:
            _fail("each entry is [[labels...], value]", pw)
        key = _list(pair[0], f"{pw}[0]")
        if len(key) != d:
            _fail(f"need {d} labels, got {len(key)}", f"{pw}[0]")
        for t, lab in enumerate(key):
            if lab not in basis:
                _fail(f"unknown basis label {lab!r}", f"{pw}[0][{t}]")
        skey = tuple(sorted(basis.index(lab) for lab in key))
        v = _rational(pair[1], f"{pw}[1]")
        if skey in values and values[skey] != v:
            _fail("conflicting value for the same multiset", pw)
        values[skey] = v
    form = IntersectionForm(d, tuple(basis), values)

    def vec(raw, where):
        raw = _list(raw, where)
        if len(raw) != len(basis):
            _fail(f"need {len(basis)} coordinates, got {len(raw)}", where)
        return tuple(_rational(x, f"{where}[{j}]") for j, x in enumerate(raw))

    gens = [vec(g, f"$.model.nef_cone[{k}]") for k, g in enumerate(_list(m.get("nef_cone"), "$.model.nef_cone"))]
    if not gens or any(not any(g) for g in gens):
        _fail("nef cone needs nonzero generators", "$.model.nef_cone")
    cone = NefCone([form.cls(g) for g in gens])
    divs_raw = _list(m.get("divisors"), "$.model.divisors")
    if not divs_raw:
        _fail("need at least one divisor", "$.model.divisors")
    labels, classes = [], []
    for k, D in enumerate(divs_raw):
        D = _obj(D, f"$.model.divisors[{k}]")
        lab = D.get("label")
        if not isinstance(lab, str) or not lab or lab in labels:
            _fail("divisor needs a unique nonempty label", f"$.model.divisors[{k}].label")
        labels.append(lab)
        classes.append(form.cls(vec(D.get("class"), f"$.model.divisors[{k}].class")))
    a = _obj(m.get("assertions", {}), "$.model.assertions")
    ample = _labels(a.get("ample", []), labels, "$.model.assertions.ample")
    almost = _labels(a.get("almost_ample", []), labels, "$.model.assertions.almost_ample")
    proper = _label_sets(a.get("assert_proper", []), labels, "$.model.assertions.assert_proper")
    empty = _label_sets(a.get("assert_empty", []), labels, "$.model.assertions.assert_empty")
    config = Configuration(form, cone, tuple(classes), tuple(labels), None,
                           frozenset(ample), frozenset(almost), frozenset(proper), frozenset(empty))
    canon = {
        "kind": "ns_lattice", "dimension": d, "basis": list(basis),
        "intersections": sorted([[list(k), str(v)] for k, v in form.values]),
        "nef_cone": [[str(x) for x in g] for g in gens],
        "divisors": [{"label": lab, "class": [str(x) for x in c.coords]} for lab, c in zip(labels, classes)],
        "ample": sorted(labels[i] for i in ample), "almost_ample": sorted(labels[i] for i in almost),
        "assert_proper": _canon_sets(proper, labels), "assert_empty": _canon_sets(empty, labels),
    }
    return config, canon


def parse_problem(data) -> Problem:
    """Validate a decoded JSON document and build the problem it describes."""
    data = _obj(data, "$")
    for key in data:
        if key not in ("model", "task", "description"):
            _fail(f"unknown top-level key {key!r}", f"$.{key}")
    m = _obj(data.get("model"), "$.model")
    kind = m.get("kind")
    if kind not in KINDS:
        _fail(f"kind must be one of {list(KINDS)}, got {kind!r}", "$.model.kind")
    try:
        if kind == "ns_lattice":
            config, canon = _parse_lattice(m)
            n_fac = None
        else:
            config, canon, n_fac = _parse_model_space(m, kind)
    except ProblemFileError:
        raise
    except QuasihypError as exc:
        _fail(str(exc), "$.model")
    task, tcanon = _task(data.get("task", {}), len(config.divisors), n_fac, "$.task")
    return Problem(kind, config, task, {"model": canon, "task": tcanon})


def load_problem(path) -> Problem:
    """Read and parse a problem file; JSON syntax errors carry line and column."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(exc.msg, f"{path}: line {exc.lineno}, column {exc.colno}") from None
    return parse_problem(data)
