import dataclasses
import json
from fractions import Fraction
from importlib import resources

import pytest

import quasihyp.filtration
from conftest import coordinate_model
from quasihyp.certify import (THEOREMS, Certificate, ChainStep, Configuration, certify, certify_criterion,
                              certify_theta, certify_thm12, certify_thm21_pipeline, reverify_step,
                              verify_certificate)
from quasihyp.errors import MalformedInputError
from quasihyp.geometry import MonomialModel, linear_form
from quasihyp.problem import load_problem

F = Fraction


def builtin(name):
    return load_problem(resources.files("quasihyp") / "problems" / f"{name}.json").config


def triple_point():
    return MonomialModel.projective_space(2, [
        linear_form("x", [1, 0, 0]), linear_form("y", [0, 1, 0]),
        linear_form("u", [1, 1, 0]), linear_form("z", [0, 0, 1])])


def statuses(cert):
    return {h.name: h.status for h in cert.hypotheses}


class TestCriterion:
    def test_four_lines(self, p2_four):
        cert = certify_criterion(p2_four, 1)
        assert cert.verdict == "certified"
        assert cert.theorem == "3.3"
        assert cert.rendered_chain == ("4/3 > 1",)
        assert "arithmetically" in cert.conclusion

    def test_analytic_flavor(self, p2_four):
        cert = certify_criterion(p2_four, 1, "analytic")
        assert cert.theorem == "3.5" and "Brody" in cert.conclusion

    def test_two_lines(self):
        cert = certify_criterion(coordinate_model(2, 2), 1)
        assert cert.verdict == "not-certified"
        assert cert.rendered_chain == ("2/3 > 1",)
        assert cert.conclusion == ""

    def test_l_not_big(self):
        # two points on a product factor pull back to a class that is not big
        model = MonomialModel((1, 1), (linear_form("a", [1, 0], (1, 1), 0), linear_form("b", [0, 1], (1, 1), 0)))
        cert = certify_criterion(model, 1)
        assert statuses(cert)["L big"] == "failed"
        assert cert.verdict == "not-certified" and not cert.chain

    def test_never_uses_upper_estimate(self, p2_four, monkeypatch):
        def boom(*args, **kwargs):
            raise AssertionError("upper estimate consumed by a certificate")
        monkeypatch.setattr(quasihyp.filtration, "nu_truncated", boom)
        assert certify_criterion(p2_four, 1).verdict == "certified"

    def test_bad_m(self, p2_four):
        with pytest.raises(MalformedInputError):
            certify_criterion(p2_four, 0)


class TestPipeline:
    def test_four_lines_multiplicities(self, p2_four):
        cert = certify_thm21_pipeline(p2_four, 2)
        assert cert.verdict == "certified"
        assert "multiplicities x: 1, y: 1, z: 1, w: 1" in cert.notes
        assert cert.chain[-1].render() == "13/12 > 1"

    def test_four_lines_with_criterion(self, p2_four):
        cert = certify_thm21_pipeline(p2_four, 2, "1.1")
        assert cert.verdict == "certified"
        assert cert.chain[-1].asymptotic and cert.chain[-1].source == "criterion"

    def test_triple_point(self):
        cert = certify_thm21_pipeline(triple_point(), 2)
        assert statuses(cert)["every 3-fold intersection empty"] == "failed"
        assert cert.verdict == "not-certified"

    def test_line_and_conic(self):
        config = builtin("p2_line_conic")
        cert21 = certify_thm21_pipeline(config, 2)
        assert cert21.verdict == "certified-with-assumptions"
        assert cert21.chain[-1].render() == "7/12 > 1/2"
        assert "multiplicities line: 2, conic: 1" in cert21.notes
        cert11 = certify_thm21_pipeline(config, 2, "1.1")
        assert statuses(cert11)["r = d * delta"] == "failed"
        assert cert11.verdict == "not-certified"

    def test_lattice_only(self):
        cert = certify_thm21_pipeline(builtin("p1p1_four_diagonals"), 2, "1.1")
        assert cert.verdict == "certified-with-assumptions"

    def test_wrong_theorem(self, p2_four):
        with pytest.raises(MalformedInputError):
            certify_thm21_pipeline(p2_four, 2, "1.2")


class TestNefRoutes:
    def test_nef_route_four_lines(self, p2_four):
        cert = certify_thm12(p2_four)
        assert cert.verdict == "certified"
        assert cert.rendered_chain == ("7/6 > 1", "7/6 >= 7/6", "7/6 > 1")

    def test_nef_route_three_lines(self):
        cert = certify_thm12(coordinate_model(2))
        assert statuses(cert)["r >= 2d"] == "failed"
        assert cert.verdict == "not-certified"

    def test_theta(self, p2_four):
        cert = certify_theta(p2_four)
        assert cert.verdict == "certified"
        assert cert.chain[0].value == 2 and cert.chain[1].value == F(7, 6)

    def test_theta_lattice_only(self):
        assert certify_theta(builtin("p1p1_four_diagonals")).verdict == "certified-with-assumptions"

    def test_theta_too_small(self):
        cert = certify_theta(coordinate_model(2))
        assert cert.chain[0].value == F(3, 2)
        assert cert.chain[1].render() == "7/8 > 1"
        assert cert.verdict == "not-certified"


class TestDispatch:
    @pytest.mark.parametrize("theorem", sorted(THEOREMS))
    def test_all_ids_on_four_lines(self, p2_four, theorem):
        cert = certify(theorem, p2_four, m=1, delta=2)
        assert cert.theorem == theorem
        assert cert.verdict == "certified"
        assert cert.self_check(p2_four)

    def test_unknown_id(self, p2_four):
        with pytest.raises(MalformedInputError):
            certify("9.9", p2_four)

    def test_criterion_needs_model(self):
        with pytest.raises(MalformedInputError):
            certify("3.3", builtin("p1p1_four_diagonals"))

    def test_delta_required(self, p2_four):
        with pytest.raises(MalformedInputError):
            certify("2.1", p2_four)


class TestIntegrity:
    def test_round_trip(self, p2_four):
        cert = certify("1.1", p2_four, delta=2)
        again = Certificate.from_dict(json.loads(json.dumps(cert.to_dict())))
        assert again.to_dict() == cert.to_dict()
        assert again.self_check(p2_four)

    @pytest.mark.parametrize("theorem", ["3.3", "2.1", "1.2", "2.2"])
    def test_tampered_value_detected(self, p2_four, theorem):
        cert = certify(theorem, p2_four, delta=2)
        step = cert.chain[0]
        forged = dataclasses.replace(step, value=step.value + F(1, 7))
        bad = dataclasses.replace(cert, chain=(forged,) + cert.chain[1:])
        assert bad.recorded_verdict_consistent()
        assert verify_certificate(bad, p2_four)
        assert not bad.self_check(p2_four)

    def test_tampered_verdict_detected(self):
        cert = certify_criterion(coordinate_model(2, 2), 1)
        assert not dataclasses.replace(cert, verdict="certified").self_check()

    def test_false_relation_is_not_a_mismatch(self):
        model = coordinate_model(2, 2)
        cert = certify_criterion(model, 1)
        assert not cert.chain[0].holds()
        assert reverify_step(cert.chain[0], model) is None

    def test_unknown_source(self, p2_four):
        step = ChainStep("mystery", 1, ">", 0, "oracle")
        assert "no re-verification rule" in reverify_step(step, p2_four)

    def test_removing_a_divisor_loses_certification(self, p2_four):
        three = MonomialModel.projective_space(2, list(p2_four.divisors[:3]))
        assert certify("1.2", three).verdict == "not-certified"
        assert certify("1.1", three, delta=2).verdict == "not-certified"

    def test_undeclared_lattice_hypotheses_fail(self):
        cfg = builtin("p1p1_four_diagonals")
        bare = Configuration(cfg.form, cfg.cone, cfg.divisors, cfg.labels)
        cert = certify("2.2", bare)
        assert statuses(cert)["L ample"] == "failed"
        assert cert.verdict == "not-certified"
