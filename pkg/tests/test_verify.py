"""Verification harness tests: report semantics, checkers, determinism."""
import math

import pytest

import wqlab.verify as verify
from wqlab.errors import DomainError
from wqlab.instances import default_suite
from wqlab.quantize import resolution
from wqlab.verify import (
    EXACT,
    BoundReport,
    KNOWN_BOUNDS,
    Provenance,
    check_bound,
    run_suite,
    scaling_study,
    separated_uniform,
)

CHEAP_BOUNDS = {"basicbound", "mutmu", "transbound1", "dollar2", "mixlemma"}


class TestBoundReport:
    def make(self, lhs, rhs, lse=0.0, rse=0.0):
        return BoundReport(
            "demo", "inst", lhs, rhs,
            Provenance("exact", 0.0) if lse == 0.0 else Provenance("monte_carlo", lse),
            Provenance("exact", 0.0) if rse == 0.0 else Provenance("monte_carlo", rse),
            {},
        )

    def test_exact_pass_and_fail(self):
        assert self.make(1.0, 1.0).passed
        assert self.make(1.0, 2.0).passed
        r = self.make(2.0, 1.0)
        assert not r.passed and r.hard_failure

    def test_sigma_slack_allows_noise(self):
        # lhs exceeds rhs by less than 4 combined sigma: pass, flagged
        # marginal because the pass needed more than 2 sigma of slack.
        r = self.make(1.05, 1.0, lse=0.02)
        assert r.passed and r.marginal and not r.hard_failure

    def test_monte_carlo_failure_is_not_hard(self):
        r = self.make(2.0, 1.0, lse=0.01)
        assert not r.passed and not r.hard_failure

    def test_combined_sigma(self):
        r = self.make(0.0, 1.0, lse=0.3, rse=0.4)
        assert r.combined_sigma == pytest.approx(0.5)

    def test_to_dict_round(self):
        d = self.make(1.0, 2.0).to_dict()
        assert d["bound_id"] == "demo"
        assert d["pass"] is True
        assert d["lhs_provenance"]["kind"] == "exact"


class TestCheckBound:
    def test_unknown_bound_rejected(self, two_point_uniform):
        with pytest.raises(DomainError, match="unknown bound"):
            check_bound("nope", two_point_uniform, {})

    def test_known_bounds_inventory(self):
        expected = {
            "remark_compare", "main1", "main2", "main3", "main4",
            "supmu", "supmu_lower", "w1decayrule", "basicstability",
            "w1lb", "chainingwp", "mutmu", "mixlemma", "2samples",
            "easybound", "dollar2", "transbound1", "basicbound",
        }
        assert set(KNOWN_BOUNDS) == expected

    @pytest.mark.parametrize("bound_id", sorted(CHEAP_BOUNDS))
    def test_cheap_checkers_pass_on_random6(self, random6, bound_id):
        reports = check_bound(
            bound_id, random6, {"p": 2.0}, instance_id="random6_1",
            seed=3, trials=60,
        )
        assert reports
        for r in reports:
            assert r.passed, r.to_dict()


class TestSeparatedUniform:
    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_pairwise_separation(self, random6, r):
        space = random6.space
        nu = separated_uniform(space, r)
        sup = nu.support()
        assert len(sup) == max(r, 2)
        h = resolution(space, r)
        for i in sup:
            for j in sup:
                if i < j:
                    assert space.dist[i, j] >= h - 1e-12


class TestRunSuite:
    def test_restricted_suite_green_and_sorted(self):
        reports = run_suite(bound_ids={"basicbound", "mutmu"}, seed=7, trials=20)
        assert reports and all(r.passed for r in reports)
        keys = [
            (r.bound_id, r.instance_id, sorted(r.parameters.items()))
            for r in reports
        ]
        assert keys == sorted(keys)

    def test_deterministic(self):
        a = run_suite(bound_ids={"basicbound"}, seed=7, trials=15)
        b = run_suite(bound_ids={"basicbound"}, seed=7, trials=15)
        assert [r.to_dict() for r in a] == [r.to_dict() for r in b]


class TestMain1Ratio:
    def test_term_count_cap_holds_exactly(self, eq8_uniform):
        reports = check_bound(
            "main1", eq8_uniform, {"n": 4}, instance_id="equidistant_8",
            seed=0, trials=50,
        )
        ratio = next(r for r in reports if r.parameters["part"] == "ratio")
        k0 = 2
        assert ratio.rhs == pytest.approx(
            110.0 * math.sqrt(math.log(8)) * (k0 + 1)
        )
        assert ratio.passed and not ratio.marginal

    def test_smaller_factor_would_fail(self, eq8_uniform):
        """The bounds-ratio genuinely exceeds 110 sqrt(ln 2n) k0 here, so
        the cap must count all k0+1 summands; this pins the
        counterexample that forced that choice."""
        reports = check_bound(
            "main1", eq8_uniform, {"n": 4}, instance_id="equidistant_8",
            seed=0, trials=50,
        )
        ratio = next(r for r in reports if r.parameters["part"] == "ratio")
        smaller_cap = 110.0 * math.sqrt(math.log(8)) * 2
        assert ratio.lhs > smaller_cap


class TestScalingStudy:
    def test_two_point_family_shape(self):
        study = scaling_study("two_point", {"ns": [2, 4, 8, 16]})
        assert study.family == "two_point"
        values = {r["n"]: r["value"] for r in study.rows}
        assert values[2] == pytest.approx(0.25, abs=1e-12)
        assert study.slopes["expected_w1"] < 0

    def test_unknown_family_rejected(self):
        with pytest.raises(DomainError):
            scaling_study("nope")

    def test_mixture_family_small_grid(self):
        study = scaling_study(
            "mixture_example",
            {"g": 2, "ns": [16, 32, 64], "trials": 16},
            seed=3,
        )
        w1_rows = [r for r in study.rows if r["series"] == "expected_w1"]
        assert len(w1_rows) == 3
        assert all(r["std_error"] > 0 for r in w1_rows)
        assert study.params["discretization"]
