"""Command-line front end: ``quasihyp COMMAND PROBLEM.json [flags]``.

Exit status: 0 on success (or a certified verdict), 2 when a check or
certificate fails, 1 on malformed input or an internal error. Every rational
in a JSON report is a ``"p/q"`` string.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .bounds import (BoundValue, alpha, bound_cor43, bound_cor55, bound_prop41, bound_thm54, lambda_d)
from .certify import NOT_CERTIFIED, THEOREMS, Certificate, certify, verify_certificate
from .errors import AcyclicityError, DegenerateError, ProblemFileError, QuasihypError
from .exactalg import RationalMatrix, rank, subspace_intersection, subspace_sum
from .filtration import FiltrationKey, filtration_total, nu_truncated
from .geometry import positivity_flags
from .koszul import bound_lemma52, bound_prop53, largest_acyclic_box, verify_all_boxes
from .lattice import class_sum, max_theta
from .multiplicity import find_fixed_point, fixed_point_identity
from .problem import Problem, load_problem

COMMANDS = ("nu", "bounds", "multiplicities", "koszul-verify", "certify", "verify-report", "fuzz")
EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


# -- rendering ----------------------------------------------------------------------

def _q(x) -> str:
    return str(Fraction(x))


def _bound(bv: BoundValue) -> dict:
    out = {"value": _q(bv.value), "source": bv.source, "asymptotic": bv.asymptotic,
           "conditional": bv.conditional,
           "hypotheses": [{"name": h.name, "status": h.status, "evidence": h.evidence} for h in bv.hypotheses]}
    if "theta" in bv.details:
        out["theta"] = _q(bv.details["theta"])
    return out


def _subset(problem: Problem, I) -> list:
    return [problem.config.labels[i] for i in I]


# -- commands -----------------------------------------------------------------------

def _need_model(problem: Problem, command: str):
    if problem.model is None:
        raise ProblemFileError(f"command {command!r} needs a model with equations", "$.model.kind")
    return problem.model


def cmd_nu(problem: Problem, args) -> tuple:
    model = _need_model(problem, "nu")
    L = problem.default_L()
    A = args.max_weight or problem.task.get("max_weight", 4)
    est = nu_truncated(model, L, A)
    res = {"L": list(L), "value": _q(est.value), "exactness": est.exactness, "max_weight": A,
           "witness": {"I": _subset(problem, est.witness.I), "a": list(est.witness.a)}}
    if est.note:
        res["note"] = est.note
    return res, EXIT_OK


def cmd_bounds(problem: Problem, args) -> tuple:
    cfg = problem.config
    d = cfg.d
    res = {"d": d, "lambda_d": _q(lambda_d(d))}
    Lcls = class_sum(list(cfg.divisors))
    if problem.model is not None:
        model = problem.model
        L = problem.default_L()
        Lcls = cfg.form.cls(L)
        res["L"] = list(L)
        res["alpha"] = {lab: _q(alpha(model, L, i)) for i, lab in enumerate(cfg.labels)}
        delta = problem.task.get("delta", 2)
        res["pairwise_alpha"] = {"delta": delta, **_bound(bound_prop41(model, L, delta))}
        e_flags = [positivity_flags(model, model.degree(i)) for i in range(model.r)]
    else:
        e_flags = [None] * cfg.r
    cor = {}
    for i, (lab, D) in enumerate(zip(cfg.labels, cfg.divisors)):
        fb = None if e_flags[i] is None else (e_flags[i].free and e_flags[i].big)
        try:
            cor[lab] = _bound(bound_cor43(cfg.form, Lcls, D, cone=cfg.cone, e_free_big=fb))
        except DegenerateError as exc:
            cor[lab] = {"error": str(exc)}
    res["alpha_slope"] = cor
    theta = problem.task.get("theta")
    if theta is None:
        th = max_theta(cfg.form, cfg.cone, Lcls, list(cfg.divisors), mode="d-times-single")
        theta = th.value
        res["theta_max"] = None if th.value is None else _q(th.value)
    if theta is not None:
        subsets = cfg.meeting_subsets()
        try:
            res["theta_nef"] = _bound(bound_thm54(cfg.form, Lcls, cfg.divisors, theta, cone=cfg.cone,
                                                  subsets=subsets, ample=_all_ample(cfg)))
        except DegenerateError as exc:
            res["theta_nef"] = {"error": str(exc)}
        res["lambda_theta"] = _bound(bound_cor55(d, theta))
    return res, EXIT_OK


def _all_ample(cfg):
    statuses = [cfg.ample(i)[0] for i in range(cfg.r)]
    if all(s == "verified" for s in statuses):
        return True
    return None if all(s in ("verified", "assumed") for s in statuses) else False


def cmd_multiplicities(problem: Problem, args) -> tuple:
    cfg = problem.config
    damping = args.damping if args.damping is not None else problem.task.get("damping", Fraction(1, 2))
    fp = find_fixed_point(cfg.form, cfg.divisors, damping=damping)
    res = {"point": [_q(x) for x in fp.point], "residual": _q(fp.residual), "verified": fp.verified,
           "multiplicities": dict(zip(cfg.labels, fp.multiplicities)), "denominator": fp.denominator,
           "rounded": None if fp.rounded is None else [_q(x) for x in fp.rounded],
           "method": fp.method, "iterations": fp.iterations, "damping": _q(damping)}
    if fp.residual == 0:
        lhs, rhs = fixed_point_identity(cfg.form, cfg.divisors, fp.point)
        res["identity"] = {"r_phi": _q(lhs), "top_power": _q(rhs), "holds": lhs == rhs}
    if fp.note:
        res["note"] = fp.note
    return res, EXIT_OK if fp.verified else EXIT_FAILED


def cmd_koszul(problem: Problem, args) -> tuple:
    model = _need_model(problem, "koszul-verify")
    L = problem.default_L()
    m = args.box_size if args.box_size is not None else problem.task.get("box_size", 1)
    a = problem.task.get("weights", (1,) * model.r)
    boxes = verify_all_boxes(model, L, m)
    bad = [list(b) for b, ok in boxes.items() if not ok]
    lem = bound_lemma52(model, L, a, m)
    res = {"L": list(L), "m": m, "weights": list(a),
           "inclusion": {"boxes": len(boxes), "failures": bad},
           "box_bound": {"bound": lem.bound, "direct": lem.direct, "unrestricted": lem.unrestricted,
                         "holds": lem.holds}}
    ok = not bad and lem.holds
    try:
        p = bound_prop53(model, L, a, m)
        res["acyclic_bound"] = {"bound": p.bound, "identity_holds": p.identity_holds,
                                "identity": {",".join(map(str, b)): list(v) for b, v in sorted(p.identity.items())},
                                "nu_bound": _bound(p.nu_bound)}
        ok = ok and p.identity_holds
    except AcyclicityError as exc:
        res["acyclic_bound"] = {"error": str(exc), "box": list(exc.box),
                                "largest_acyclic_box": largest_acyclic_box(model, L)}
    return res, EXIT_OK if ok else EXIT_FAILED


def cmd_certify(problem: Problem, args) -> tuple:
    theorem = args.theorem
    if theorem is None:
        raise ProblemFileError("certify needs --theorem", "--theorem")
    damping = args.damping if args.damping is not None else problem.task.get("damping", Fraction(1, 2))
    cert = certify(theorem, problem.config, m=problem.task.get("m", 1),
                   delta=problem.task.get("delta"), damping=damping)
    res = cert.to_dict()
    res["self_check"] = cert.self_check(problem.config)
    return res, EXIT_FAILED if cert.verdict == NOT_CERTIFIED else EXIT_OK


def cmd_verify_report(problem: Problem, args) -> tuple:
    """Re-derive every certificate step in a saved report against the problem."""
    if args.report is None:
        raise ProblemFileError("verify-report needs --report", "--report")
    data = json.loads(Path(args.report).read_text())
    cert = Certificate.from_dict(data["results"])
    problems = verify_certificate(cert, problem.config)
    ok = cert.recorded_verdict_consistent() and not problems
    res = {"theorem": cert.theorem, "verdict": cert.verdict, "consistent": ok, "mismatches": problems}
    return res, EXIT_OK if ok else EXIT_FAILED


def _random_span(rng, n=4) -> RationalMatrix:
    return RationalMatrix(tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(n))
                                for _ in range(rng.randint(0, 3))), n)


def cmd_fuzz(problem: Problem, args) -> tuple:
    """Seeded spot checks of the exact identities on the problem's model."""
    model = _need_model(problem, "fuzz")
    rng = random.Random(args.seed)
    L = problem.default_L()
    failures = []
    cases = args.cases
    for case in range(cases):
        size = rng.randint(1, model.r)
        I = tuple(sorted(rng.sample(range(model.r), size)))
        a = tuple(rng.randint(1, 3) for _ in I)
        c = rng.randint(2, 3)
        key = FiltrationKey(I, a)
        if filtration_total(model, L, key.scaled(c)) != c * filtration_total(model, L, key):
            failures.append({"case": case, "check": "scale invariance", "I": list(I), "a": list(a)})
        A, B = _random_span(rng), _random_span(rng)
        if rank(subspace_sum([A, B])) + rank(subspace_intersection(A, B)) != rank(A) + rank(B):
            failures.append({"case": case, "check": "grassmann"})
    return {"seed": args.seed, "cases": cases, "failures": failures}, EXIT_OK if not failures else EXIT_FAILED


HANDLERS = {
    "nu": cmd_nu,
    "bounds": cmd_bounds,
    "multiplicities": cmd_multiplicities,
    "koszul-verify": cmd_koszul,
    "certify": cmd_certify,
    "verify-report": cmd_verify_report,
    "fuzz": cmd_fuzz,
}


# -- plumbing -----------------------------------------------------------------------

def _rational_arg(text: str) -> Fraction:
    try:
        if any(c in text for c in ".eE"):
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected P/Q, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasihyp",
                                description="Exact computations and certificates for divisor configurations.")
    p.add_argument("--version", action="version", version=f"quasihyp {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("problem", help="problem file (JSON) or builtin:NAME")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--box-size", type=int, default=None)
    p.add_argument("--theorem", choices=sorted(THEOREMS), default=None)
    p.add_argument("--damping", type=_rational_arg, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--report", default=None, help="saved JSON report for verify-report")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    return p


def builtin_problems() -> list:
    return sorted(f.name[:-5] for f in resources.files("quasihyp").joinpath("problems").iterdir()
                  if f.name.endswith(".json"))


def _load(source: str) -> Problem:
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in builtin_problems():
            raise ProblemFileError(f"no builtin problem {name!r}; available: {builtin_problems()}", source)
        with resources.as_file(resources.files("quasihyp").joinpath("problems", name + ".json")) as path:
            return load_problem(path)
    return load_problem(source)


def _text(report: dict) -> str:
    lines = [f"{report['tool']} {report['version']}  {report['command']}  {report['input_digest']}"]

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, dict):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {v}")

    walk(report["results"], 1)
    lines.append(f"  elapsed_ms: {report['elapsed_ms']}")
    return "\n".join(lines)


def run(argv=None) -> tuple:
    """Parse ``argv``, execute, and return ``(exit_code, report_or_None, rendered_output)``."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        problem = _load(args.problem)
        results, code = HANDLERS[args.command](problem, args)
    except ProblemFileError as exc:
        return EXIT_ERROR, None, f"error: {exc}"
    except (QuasihypError, OSError, json.JSONDecodeError, KeyError) as exc:
        return EXIT_ERROR, None, f"error: {type(exc).__name__}: {exc}"
    report = {
        "tool": "quasihyp",
        "version": __version__,
        "input_digest": problem.digest,
        "command": args.command if args.theorem is None else f"{args.command} --theorem {args.theorem}",
        "results": results,
        "elapsed_ms": str(round((time.perf_counter() - start) * 1000)),
    }
    rendered = json.dumps(report, indent=2) if args.format == "json" else _text(report)
    return code, report, rendered


def main(argv=None) -> int:
    code, report, rendered = run(argv)
    args_out = None
    if report is not None:
        args_out = build_parser().parse_args(argv).out
    if args_out:
        Path(args_out).write_text(json.dumps(report, indent=2) + "\n")
    else:
        stream = sys.stdout if report is not None else sys.stderr
        print(rendered, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
