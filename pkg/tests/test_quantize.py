"""Quantization error tests.

Frozen oracle values (computed by hand from the definitions on tiny
spaces) plus cross-checks between the integer-program solver and the
independent multiset-enumeration path.
"""
from fractions import Fraction

import pytest

from wqlab.errors import BudgetError, DomainError
from wqlab.instances import equidistant_space, line_space
from wqlab.measures import DiscreteMeasure
from wqlab.quantize import (
    covering_number,
    optimal_quantization_error,
    resolution,
    uniform_error_by_enumeration,
    uniform_quantization_error,
)


class TestOptimalError:
    def test_two_point_n1(self, two_point_uniform):
        # Best single site serves half the mass across distance 1.
        res = optimal_quantization_error(two_point_uniform, 1, 1.0)
        assert res.error == pytest.approx(0.5, abs=1e-12)
        assert res.measure.mass == 1

    def test_eq4_n2(self, eq4_uniform):
        # Two of four equidistant atoms must travel distance 1.
        res = optimal_quantization_error(eq4_uniform, 2, 1.0)
        assert res.error == pytest.approx(0.5, abs=1e-12)

    def test_line5_n2_p1(self, line5_uniform):
        # Any two sites covering three atoms at distance 1 cost 3/5;
        # ties resolve to the lexicographically first subset.
        res = optimal_quantization_error(line5_uniform, 2, 1.0)
        assert res.error == pytest.approx(0.6, abs=1e-12)
        assert res.support == (0, 3)

    def test_enough_sites_give_zero(self, random6):
        res = optimal_quantization_error(random6, 6, 2.0)
        assert res.error == 0.0
        assert res.measure.weights == random6.weights

    def test_monotone_in_n(self, random6):
        errs = [
            optimal_quantization_error(random6, n, 1.0).error
            for n in range(1, 7)
        ]
        assert all(a >= b - 1e-12 for a, b in zip(errs, errs[1:]))
        assert errs[-1] == 0.0

    def test_heuristic_upper_bounds_exact(self, suite):
        for iid, mu in suite.items():
            for n in (1, 2, 3):
                exact = optimal_quantization_error(mu, n, 2.0).error
                heur = optimal_quantization_error(mu, n, 2.0, mode="heuristic").error
                assert heur >= exact - 1e-9, (iid, n)

    def test_budget_error(self, eq8_uniform):
        with pytest.raises(BudgetError) as exc:
            optimal_quantization_error(eq8_uniform, 2, 1.0, budget=1)
        assert exc.value.required == 28

    def test_rejects_bad_args(self, two_point_uniform):
        with pytest.raises(DomainError):
            optimal_quantization_error(two_point_uniform, 0, 1.0)
        with pytest.raises(DomainError):
            optimal_quantization_error(two_point_uniform, 1, 0.5)
        with pytest.raises(DomainError):
            optimal_quantization_error(two_point_uniform, 1, 1.0, mode="magic")


class TestUniformError:
    def test_two_point_values(self, two_point_uniform):
        # One site: all mass on a point, error 1/2.  Two sites: exact.
        # Three sites: best counts (2,1) leave 1/6 mass displaced.
        vals = {
            n: uniform_quantization_error(two_point_uniform, n, 1.0).error
            for n in (1, 2, 3)
        }
        assert vals[1] == pytest.approx(0.5, abs=1e-12)
        assert vals[2] == pytest.approx(0.0, abs=1e-12)
        assert vals[3] == pytest.approx(1 / 6, abs=1e-12)

    def test_equidistant_halving(self):
        # 2n equidistant atoms: n equal sites miss half the mass; 2n
        # sites reproduce the measure.
        for n in (2, 4):
            mu = DiscreteMeasure.uniform(equidistant_space(2 * n))
            assert uniform_quantization_error(mu, n, 1.0).error == pytest.approx(
                0.5, abs=1e-12
            )
            assert uniform_quantization_error(mu, 2 * n, 1.0).error == pytest.approx(
                0.0, abs=1e-12
            )

    def test_eq8_small_n(self, eq8_uniform):
        assert uniform_quantization_error(eq8_uniform, 1, 1.0).error == (
            pytest.approx(7 / 8, abs=1e-12)
        )
        assert uniform_quantization_error(eq8_uniform, 2, 1.0).error == (
            pytest.approx(3 / 4, abs=1e-12)
        )

    def test_weights_are_multiples(self, random6):
        res = uniform_quantization_error(random6, 5, 1.0)
        assert all((w * 5).denominator == 1 for w in res.measure.weights)

    @pytest.mark.parametrize("p", [1.0, 2.0])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_milp_matches_enumeration(self, suite, n, p):
        for iid in ("two_point_skew", "equidistant_4", "line_grid_5", "random6_1"):
            mu = suite[iid]
            via_ip = uniform_quantization_error(mu, n, p).error
            via_enum = uniform_error_by_enumeration(mu, n, p).error
            assert via_ip == pytest.approx(via_enum, rel=1e-8, abs=1e-10), (iid, n, p)

    def test_heuristic_upper_bounds_exact(self, suite):
        for iid, mu in suite.items():
            for n in (2, 3):
                exact = uniform_quantization_error(mu, n, 1.0).error
                heur = uniform_quantization_error(mu, n, 1.0, mode="heuristic").error
                assert heur >= exact - 1e-9, (iid, n)

    def test_dominates_optimal_error(self, suite):
        for mu in suite.values():
            for n in (1, 2, 4):
                e = optimal_quantization_error(mu, n, 1.0).error
                b = uniform_quantization_error(mu, n, 1.0).error
                assert b >= e - 1e-10


class TestCoveringAndResolution:
    def test_equidistant_covering(self):
        space = equidistant_space(8)
        assert covering_number(space, 0.5) == 8
        assert covering_number(space, 1.0) == 1

    def test_line_covering(self):
        space = line_space(5)
        assert covering_number(space, 0.0) == 5
        assert covering_number(space, 1.0) == 2
        assert covering_number(space, 2.0) == 1

    def test_greedy_upper_bounds_exact(self, random6):
        space = random6.space
        for eps in (0.1, 0.3, 0.6):
            exact = covering_number(space, eps)
            greedy = covering_number(space, eps, mode="heuristic")
            assert greedy >= exact

    def test_line_resolution(self):
        space = line_space(5)
        assert resolution(space, 1) == pytest.approx(2.0)
        assert resolution(space, 2) == pytest.approx(1.0)
        assert resolution(space, 5) == 0.0
        assert resolution(space, 9) == 0.0

    def test_equidistant_resolution(self):
        space = equidistant_space(8)
        assert resolution(space, 4) == pytest.approx(1.0)
        assert resolution(space, 8) == 0.0

    def test_resolution_monotone(self, random6):
        space = random6.space
        hs = [resolution(space, m) for m in range(1, 7)]
        assert all(a >= b - 1e-12 for a, b in zip(hs, hs[1:]))
        assert hs[-1] == 0.0
