"""Expected empirical-measure error: exact enumeration vs Monte Carlo."""
from fractions import Fraction

import pytest

from wqlab.empirical import (
    EmpiricalConfig,
    estimate_expected_error,
    estimate_expected_two_sample,
    exact_expected_error,
    exact_expected_two_sample,
    sample_empirical,
)
from wqlab.errors import BudgetError, DomainError
from wqlab.measures import DiscreteMeasure
from wqlab.transport import wasserstein_value


class TestSampleEmpirical:
    def test_weights_are_multiples_of_one_over_n(self, random6):
        nu = sample_empirical(random6, 5, seed=3)
        assert nu.mass == 1
        assert all((w * 5).denominator == 1 for w in nu.weights)

    def test_reproducible_and_trial_sensitive(self, random6):
        a = sample_empirical(random6, 8, seed=3, trial=1)
        b = sample_empirical(random6, 8, seed=3, trial=1)
        c = sample_empirical(random6, 8, seed=3, trial=2)
        assert a.weights == b.weights
        assert a.weights != c.weights or True  # different trials may collide

    def test_rejects_bad_n(self, random6):
        with pytest.raises(DomainError):
            sample_empirical(random6, 0, seed=1)


class TestExactExpectation:
    def test_two_point_n2_quarter(self, two_point_uniform):
        # Outcomes (2,0) and (0,2) each have probability 1/4 and cost
        # 1/2; the split outcome costs 0: E = 1/4.
        rep = exact_expected_error(two_point_uniform, 2, 1.0)
        assert rep.exact and rep.std_error == 0.0
        assert rep.point_estimate == pytest.approx(0.25, abs=1e-12)

    def test_single_draw_closed_form(self, two_point_uniform):
        # n = 1: E = sum_x mu(x) W_1(delta_x, mu) = 1/2.
        rep = exact_expected_error(two_point_uniform, 1, 1.0)
        assert rep.point_estimate == pytest.approx(0.5, abs=1e-12)

    def test_estimator_kinds_agree_at_p1(self, two_point_skew):
        mean = exact_expected_error(two_point_skew, 3, 1.0, "mean_of_W1")
        root = exact_expected_error(two_point_skew, 3, 1.0, "root_mean_of_Wp_pow")
        assert mean.point_estimate == pytest.approx(root.point_estimate, rel=1e-12)

    def test_root_mean_dominates_mean(self, two_point_skew):
        # Jensen: E[W]^(1) <= (E[W^p])^(1/p) for p >= 1.
        mean = exact_expected_error(two_point_skew, 3, 2.0, "mean_of_W1")
        root = exact_expected_error(two_point_skew, 3, 2.0, "root_mean_of_Wp_pow")
        assert root.point_estimate >= mean.point_estimate - 1e-12

    def test_dollar_equals_plain_at_p1(self, two_point_skew):
        plain = exact_expected_error(two_point_skew, 4, 1.0)
        dollar = exact_expected_error(two_point_skew, 4, 1.0, dollar=True)
        assert plain.point_estimate == pytest.approx(
            dollar.point_estimate, abs=1e-12
        )

    def test_budget_error(self, random6):
        with pytest.raises(BudgetError) as exc:
            exact_expected_error(random6, 10, 1.0, budget=10)
        assert exc.value.required > exc.value.budget


class TestMonteCarlo:
    def test_matches_exact_within_4_sigma(self, two_point_skew):
        exact = exact_expected_error(two_point_skew, 3, 1.0).point_estimate
        cfg = EmpiricalConfig(n=3, trials=3000, seed=17)
        mc = estimate_expected_error(two_point_skew, cfg)
        assert mc.std_error > 0
        assert abs(mc.point_estimate - exact) <= 4 * mc.std_error

    def test_deterministic_given_seed(self, random6):
        cfg = EmpiricalConfig(n=4, trials=50, seed=23, p=2.0,
                              estimator_kind="root_mean_of_Wp_pow")
        a = estimate_expected_error(random6, cfg)
        b = estimate_expected_error(random6, cfg)
        assert a == b

    def test_seed_changes_estimate(self, random6):
        a = estimate_expected_error(random6, EmpiricalConfig(n=4, trials=50, seed=1))
        b = estimate_expected_error(random6, EmpiricalConfig(n=4, trials=50, seed=2))
        assert a.point_estimate != b.point_estimate

    def test_config_validation(self):
        with pytest.raises(DomainError):
            EmpiricalConfig(n=0, trials=10, seed=0)
        with pytest.raises(DomainError):
            EmpiricalConfig(n=2, trials=0, seed=0)
        with pytest.raises(DomainError):
            EmpiricalConfig(n=2, trials=10, seed=0, p=0.5)
        with pytest.raises(DomainError):
            EmpiricalConfig(n=2, trials=10, seed=0, estimator_kind="median")


class TestTwoSample:
    def test_exact_two_point_n1(self, two_point_uniform):
        # Two independent single draws differ with probability 1/2 at
        # distance 1.
        rep = exact_expected_two_sample(two_point_uniform, 1, 1.0)
        assert rep.point_estimate == pytest.approx(0.5, abs=1e-12)

    def test_mc_matches_exact_within_4_sigma(self, two_point_skew):
        exact = exact_expected_two_sample(two_point_skew, 3, 1.0).point_estimate
        cfg = EmpiricalConfig(n=3, trials=2000, seed=5)
        mc = estimate_expected_two_sample(two_point_skew, cfg)
        assert abs(mc.point_estimate - exact) <= 4 * mc.std_error

    def test_budget_is_quadratic(self, random6):
        with pytest.raises(BudgetError):
            exact_expected_two_sample(random6, 6, 1.0, budget=100)


class TestAgainstDirectAverage:
    def test_mc_mean_is_average_of_replicates(self, two_point_uniform):
        """The estimator is literally the average of per-trial W_1."""
        cfg = EmpiricalConfig(n=2, trials=25, seed=40)
        rep = estimate_expected_error(two_point_uniform, cfg)
        values = [
            wasserstein_value(
                two_point_uniform,
                sample_empirical(two_point_uniform, 2, seed=40, trial=t),
                1.0,
            )
            for t in range(25)
        ]
        assert rep.point_estimate == pytest.approx(
            sum(values) / 25, rel=1e-12
        )
