import os
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

from quasihyp.geometry import MonomialModel, linear_form
from quasihyp.lattice import product_lattice

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("repo", max_examples=100, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def coordinate_model(d: int, count: int | None = None) -> MonomialModel:
    count = d + 1 if count is None else count
    return MonomialModel.projective_space(
        d, [linear_form(f"x{i}", [int(i == j) for j in range(d + 1)]) for i in range(count)])


def four_lines() -> MonomialModel:
    return MonomialModel.projective_space(2, [
        linear_form("x", [1, 0, 0]), linear_form("y", [0, 1, 0]),
        linear_form("z", [0, 0, 1]), linear_form("w", [1, 1, 1])])


@pytest.fixture
def p2_coord():
    return coordinate_model(2)


@pytest.fixture
def p2_four():
    return four_lines()


@pytest.fixture
def p2_lattice():
    form, cone = product_lattice((2,))
    return form, cone, form.basis_class("H")


SUITE_BUDGET_S = 120
_started = {}


def pytest_sessionstart(session):
    _started["t"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    elapsed = time.perf_counter() - _started.get("t", time.perf_counter())
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in range(1, 11):
        if n not in mod.RESULTS:
            tr.write_line(f"criterion {n:>2}: NOT RUN")
            continue
        ok, detail = mod.RESULTS[n]
        if n == 10:
            within = elapsed < SUITE_BUDGET_S
            ok = ok and within
            detail = f"{detail}; suite wall time {elapsed:.1f} s (budget {SUITE_BUDGET_S} s)"
        tr.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_sessionfinish(session, exitstatus):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and 10 in mod.RESULTS and "t" in _started:
        if time.perf_counter() - _started["t"] >= SUITE_BUDGET_S and session.exitstatus == 0:
            session.exitstatus = 1
