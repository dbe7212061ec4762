import math

import numpy as np
import pytest

from rough_heston import CaseError, bounds, classical, series, vie
from .conftest import fig1_with_alpha


class TestGammaRatio:
    def test_integer_alpha(self):
        assert series.gamma_ratio(1.0, 3) == pytest.approx(3.0, rel=1e-14)

    def test_first_ratio_against_gamma(self):
        # v_1 = Gamma(1.6)/Gamma(1); math.gamma is an independent Lanczos-type
        # evaluation of the same quantity
        assert series.gamma_ratio(0.6, 1) == pytest.approx(math.gamma(1.6), rel=1e-13)

    def test_large_order_asymptotics(self):
        n = 10_000
        assert series.gamma_ratio(0.6, n) / (0.6 * n) ** 0.6 == pytest.approx(1.0, rel=0.01)

    def test_increasing(self):
        v = series.gamma_ratio(0.77, np.arange(1, 500))
        assert np.all(np.diff(v) > 0)

    def test_domain(self):
        with pytest.raises(ValueError):
            series.gamma_ratio(0.4, 1)
        with pytest.raises(ValueError):
            series.gamma_ratio(0.6, 0)


class TestCoefficients:
    def test_first_coefficient_hand_value(self, fig1):
        # a_1 = d1/v_1 = (210 * 0.02) / Gamma(1.6)
        state = series.series_coefficients(fig1, -20.0, 5)
        assert state.coefficient(1) == pytest.approx(4.2 / math.gamma(1.6), rel=1e-12)

    def test_zero_moment_gives_zero_series(self, fig1):
        state = series.series_coefficients(fig1, 0.0, 50)
        assert np.all(state.coeffs == 0.0)

    def test_case_a_positivity(self, fig1):
        state = series.series_coefficients(fig1, -20.0, 200)
        assert np.all(state.signs() == 1)

    def test_scale_invariance(self, fig1):
        la1 = series.series_coefficients(fig1, -20.0, 150, initial_scale=1.0).log_abs()
        la2 = series.series_coefficients(fig1, -20.0, 150, initial_scale=0.01).log_abs()
        assert np.allclose(la1, la2, rtol=1e-12, atol=1e-10)

    def test_geometric_growth_rate_converges(self, fig1):
        # log a_n / n approaches log(1/R); the drift dies out with n
        state = series.series_coefficients(fig1, -20.0, 400)
        rate = state.log_abs() / np.arange(1, 401)
        assert abs(rate[399] - rate[199]) < abs(rate[199] - rate[99])
        assert abs(rate[399] - rate[199]) < 0.01

    def test_csv_export(self, fig1, tmp_path):
        state = series.series_coefficients(fig1, -20.0, 10)
        path = tmp_path / "coeffs.csv"
        state.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "n,log_abs_coeff,sign"
        assert len(lines) == 11
        n, log_abs, sign = lines[1].split(",")
        assert (n, sign) == ("1", "1")
        assert float(log_abs) == pytest.approx(math.log(4.2 / math.gamma(1.6)), rel=1e-12)


class TestExplosionTime:
    def test_within_explicit_bounds(self, fig1):
        lo, hi = bounds.sandwich(fig1, -20.0)
        est = series.explosion_time(fig1, -20.0).value
        assert lo < est < hi

    def test_alpha_near_one_matches_classical(self):
        params = fig1_with_alpha(0.999)
        for u in (-15.0, -20.0, -40.0):
            est = series.explosion_time(params, u).value
            ref = classical.explosion_time(params, u)
            assert est == pytest.approx(ref, rel=0.01)

    def test_half_order_diagnostics(self, fig1):
        res = series.explosion_time(fig1, -20.0, n_max=100)
        assert res.method == "series"
        d = res.diagnostics
        assert d.final == res.value
        # truncation error of the refined estimator is of order 1/n^2
        assert abs(d.final - d.previous) / d.final < 25.0 / 50**2

    def test_raw_and_refined_converge_together(self, fig1):
        state = series.series_coefficients(fig1, -20.0, 200)
        gaps = [
            abs(series.raw_time_estimate(state, n) - series.refined_time_estimate(state, n))
            for n in (25, 50, 100, 200)
        ]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_coefficient_asymptotics_ratio(self, fig1):
        # a_n ~ R^(-n-1) n^(alpha-1) alpha^alpha Gamma(2 alpha) / Gamma(alpha)^2
        alpha = fig1.alpha
        state = series.series_coefficients(fig1, -20.0, 200)
        radius = series.explosion_time(fig1, -20.0, n_max=200).value ** alpha
        n = 200
        log_ratio = (
            state.log_abs()[n - 1]
            + (n + 1) * math.log(radius)
            + (1.0 - alpha) * math.log(n)
            + 2.0 * math.lgamma(alpha)
            - alpha * math.log(alpha)
            - math.lgamma(2.0 * alpha)
        )
        assert math.exp(log_ratio) == pytest.approx(1.0, abs=0.05)

    def test_monotone_in_moment(self, fig1):
        grid = np.linspace(-50.0, -13.0, 12)
        values = [series.explosion_time(fig1, float(u)).value for u in grid]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_case_error(self, fig1):
        with pytest.raises(CaseError):
            series.explosion_time(fig1, -8.0)


class TestLowerBound:
    def test_below_vie_oracle(self, fig1):
        lb = series.explosion_lower_bound(fig1, -8.0).value
        assert lb <= vie.blowup_time_oracle(fig1, -8.0)

    def test_below_explicit_upper_bound(self, fig1):
        lb = series.explosion_lower_bound(fig1, -8.0).value
        assert lb <= bounds.upper_bound(fig1, -8.0)

    def test_alpha_near_one_consistency(self):
        params = fig1_with_alpha(0.999)
        lb = series.explosion_lower_bound(params, -8.0).value
        assert lb <= classical.explosion_time(params, -8.0) * 1.01

    def test_method_tag_and_case_error(self, fig1):
        res = series.explosion_lower_bound(fig1, -8.0)
        assert res.method == "series_lower_bound"
        with pytest.raises(CaseError):
            series.explosion_lower_bound(fig1, -20.0)


class TestPolylog:
    def test_order_one_is_log(self):
        assert series.polylog(1.0, 0.5) == pytest.approx(math.log(2.0), rel=1e-12)

    def test_brute_force_cross_check(self):
        n = np.arange(1, 1_000_001, dtype=float)
        brute = float(np.sum(0.9**n / n**0.4))
        assert series.polylog(0.4, 0.9) == pytest.approx(brute, rel=1e-12)

    def test_empty_sum(self):
        assert series.polylog(0.3, 0.0) == 0.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            series.polylog(0.4, 1.0)
        with pytest.raises(ValueError):
            series.polylog(0.4, -0.1)
        with pytest.raises(ValueError):
            series.polylog(-0.5, 0.5)


class TestApproxSolution:
    def test_zero_time(self, fig1):
        assert series.approx_solution(fig1, -20.0, 0.0) == 0.0

    @pytest.mark.parametrize("frac,tol", [(0.3, 1e-3), (0.9, 1e-2)])
    def test_against_vie(self, fig1, frac, tol):
        tstar = series.explosion_time(fig1, -20.0).value
        t = frac * tstar
        reference = vie.solve_vie(fig1, -20.0, t, 4096).values[-1]
        approx = series.approx_solution(fig1, -20.0, t, n_corrections=10)
        assert approx == pytest.approx(reference, rel=tol)

    def test_domain_error_at_explosion(self, fig1):
        tstar = series.explosion_time(fig1, -20.0).value
        with pytest.raises(ValueError):
            series.approx_solution(fig1, -20.0, 1.01 * tstar)
