import numpy as np
import pytest

from dwitness.inequality import (ConstraintPoint, DegeneratePoint, constrained_scan,
                                 f_ratio, f_value, g_poly, g_value, lagrange_residual,
                                 quartic_expanded, quartic_factor_check,
                                 stationary_multiplier, subcase_bound)


def surface_point(rng, t, spread=3.0):
    u = rng.uniform(-spread, spread, 2)
    x1, x2 = float(np.exp(u[0])), float(np.exp(u[1]))
    return ConstraintPoint(t=t, x1=x1, x2=x2, x3=1.0 / (x1 * x2))


class TestPolynomialSide:
    def test_zero_at_center(self):
        for t in np.arange(0.1, 1.0, 0.1):
            assert abs(g_poly(float(t), 1.0, 1.0, 1.0)) <= 1e-12

    def test_example_value(self):
        p = ConstraintPoint(t=0.5, x1=2.0, x2=1.0, x3=0.5)
        assert abs(g_value(p) - 0.625) < 1e-15

    def test_symmetric_in_first_two_arguments(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            t = rng.uniform(0.05, 0.95)
            a, b, c = rng.uniform(0.1, 5.0, 3)
            lhs, rhs = g_poly(t, a, b, c), g_poly(t, b, a, c)
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))


class TestRatioSide:
    def test_dominates_one_minus_t(self):
        rng = np.random.default_rng(1)
        for _ in range(2000):
            t = float(rng.uniform(0.05, 0.95))
            p = surface_point(rng, t)
            try:
                value = f_value(p)
            except DegeneratePoint:
                continue
            assert value >= (1.0 - t) - 1e-9

    def test_degenerate_point_rejected(self):
        with pytest.raises(DegeneratePoint):
            f_value(ConstraintPoint(t=0.5, x1=1.0, x2=1.0, x3=1.0))

    def test_example_gap_positive(self):
        p = ConstraintPoint(t=0.5, x1=2.0, x2=1.0, x3=0.5)
        value = f_value(p)
        assert value - 0.5 >= 0.0
        assert abs(value - 4.0 / 3.0) < 1e-12  # frozen from direct evaluation

    def test_sign_agreement_with_polynomial(self):
        rng = np.random.default_rng(2)
        for _ in range(2000):
            t = float(rng.uniform(0.05, 0.95))
            p = surface_point(rng, t)
            gap = f_ratio(t, p.x1, p.x2, p.x3) - (1.0 - t)
            g = g_value(p)
            if abs(gap) > 1e-12 and abs(g) > 1e-12:
                assert np.sign(gap) == np.sign(g)

    def test_constraint_point_validation(self):
        with pytest.raises(ValueError):
            ConstraintPoint(t=0.5, x1=2.0, x2=1.0, x3=1.0)  # product 2
        with pytest.raises(ValueError):
            ConstraintPoint(t=0.5, x1=-1.0, x2=1.0, x3=-1.0)
        with pytest.raises(ValueError):
            ConstraintPoint(t=1.5, x1=1.0, x2=1.0, x3=1.0)


class TestScan:
    def test_minimum_stays_nonnegative(self):
        for t in (0.1, 0.5, 0.9):
            result = constrained_scan(t, samples=20000, seed=5)
            assert result.min_g >= -1e-9
            assert result.min_f_gap >= -1e-9

    def test_argmin_drifts_to_center(self):
        result = constrained_scan(0.5, samples=200000, seed=6)
        assert max(abs(v - 1.0) for v in result.argmin) < 0.5

    def test_deterministic(self):
        one = constrained_scan(0.3, samples=5000, seed=7)
        two = constrained_scan(0.3, samples=5000, seed=7)
        assert one == two

    def test_report_fields(self):
        report = constrained_scan(0.4, samples=100, seed=8).to_json()
        assert set(report) == {"t", "samples", "spread", "seed", "min_g", "min_f_gap", "argmin"}


class TestStationarity:
    def test_center_is_stationary_with_derived_multiplier(self):
        for t in np.arange(0.1, 1.0, 0.1):
            lam = stationary_multiplier(float(t))
            assert abs(lam - (t * t - 2.0 * t - 1.0)) < 1e-15
            residuals = lagrange_residual(float(t), (1.0, 1.0, 1.0), lam)
            assert all(abs(r) <= 1e-12 for r in residuals)

    def test_generic_point_is_not_stationary(self):
        residuals = lagrange_residual(0.5, (2.0, 1.0, 0.5), 0.0)
        assert max(abs(r) for r in residuals) > 0.1

    def test_second_branch_is_infeasible(self):
        # eliminating the multiplier via 2t - t^2 + lam*x3 = 0 forces
        # x3 = (t-1)/t < 0 for 0 < t < 1, so only x1 = x2 survives
        for t in np.arange(0.1, 1.0, 0.1):
            assert (t - 1.0) / t < 0.0

    def test_gradient_matches_central_differences(self):
        rng = np.random.default_rng(9)
        h = 1e-6
        for _ in range(100):
            t = float(rng.uniform(0.05, 0.95))
            x = rng.uniform(0.2, 4.0, 3)
            analytic = lagrange_residual(t, x, 0.0)[:3]
            for k in range(3):
                shift = np.zeros(3)
                shift[k] = h
                numeric = (g_poly(t, *(x + shift)) - g_poly(t, *(x - shift))) / (2.0 * h)
                assert abs(numeric - analytic[k]) <= 1e-5 * max(1.0, abs(analytic[k]))


class TestQuartic:
    def test_root_at_one(self):
        lhs, _ = quartic_factor_check(0.5, 1.0)
        assert lhs == 0.0

    def test_bracket_positive(self):
        rng = np.random.default_rng(10)
        for _ in range(1000):
            t = float(rng.uniform(0.01, 0.99))
            x1 = float(np.exp(rng.uniform(-4, 4)))
            _, bracket = quartic_factor_check(t, x1)
            assert bracket > 0.0

    def test_factorization_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            t = float(rng.uniform(0.01, 0.99))
            x1 = float(np.exp(rng.uniform(-3, 3)))
            lhs, _ = quartic_factor_check(t, x1)
            rhs = quartic_expanded(t, x1)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


class TestSubcaseBounds:
    def test_s3_always_dominates(self):
        rng = np.random.default_rng(12)
        for _ in range(500):
            t = float(rng.uniform(0.05, 0.95))
            r2 = float(np.exp(rng.uniform(-4, 4)))
            bound, ge = subcase_bound("S3", t, r2)
            assert ge and bound >= (1.0 - t) - 1e-12
            # the equivalent threshold form is negative, so r2 always clears it
            assert t * (2.0 - t) / (t - 1.0) < 0.0

    def test_s4_always_dominates(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            t = float(rng.uniform(0.05, 0.95))
            r3 = float(np.exp(rng.uniform(-4, 4)))
            bound, ge = subcase_bound("S4", t, r3)
            assert ge
            assert t >= (t - 1.0) * r3

    def test_s5_always_dominates(self):
        rng = np.random.default_rng(14)
        for _ in range(500):
            t = float(rng.uniform(0.05, 0.95))
            r1 = float(np.exp(rng.uniform(-4, 4)))
            bound, ge = subcase_bound("S5", t, r1)
            assert ge
            assert 1.0 - t * t + t * r1 >= 0.0

    def test_s2_matches_ratio_at_reciprocal(self):
        rng = np.random.default_rng(15)
        for _ in range(500):
            t = float(rng.uniform(0.05, 0.95))
            u = rng.uniform(-2, 2, 2)
            r1, r2 = float(np.exp(u[0])), float(np.exp(u[1]))
            r3 = 1.0 / (r1 * r2)
            bound, ge = subcase_bound("S2", t, (r1, r2, r3))
            assert ge and bound >= (1.0 - t) - 1e-9
            cross = f_ratio(t, 1.0 / r1, 1.0 / r2, 1.0 / r3)
            assert abs(bound - cross) <= 1e-10 * max(1.0, abs(cross))

    def test_s2_degenerate_point(self):
        with pytest.raises(DegeneratePoint):
            subcase_bound("S2", 0.5, (1.0, 1.0, 1.0))

    def test_s2_constraint_enforced(self):
        with pytest.raises(ValueError):
            subcase_bound("S2", 0.5, (2.0, 2.0, 2.0))

    def test_unknown_subcase(self):
        with pytest.raises(ValueError):
            subcase_bound("S9", 0.5, 1.0)
