import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcorr.errors import DegenerateDesignError, InsufficientDataError, ParameterError
from qcorr.quantreg import X_ON_Y, Y_ON_X, check_loss, fit_both, fit_line
from qcorr.sampling import BivariateSample, RngStream, draw_bivariate_normal

from _oracle import exhaustive_minimum, pinball


def make_sample(x, y):
    return BivariateSample(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


class TestCheckLoss:
    def test_direct_values(self):
        assert check_loss(1.0, 0.5) == 0.5
        assert check_loss(-1.0, 0.1) == pytest.approx(0.9)
        assert check_loss(0.0, 0.3) == 0.0

    def test_nonnegative(self):
        e = np.linspace(-5, 5, 101)
        for tau in (0.01, 0.5, 0.99):
            assert (check_loss(e, tau) >= 0).all()

    @given(
        e=st.floats(-1e6, 1e6, allow_nan=False),
        a=st.floats(1e-6, 1e6),
        tau=st.floats(0.01, 0.99),
    )
    def test_positive_homogeneity(self, e, a, tau):
        assert check_loss(a * e, tau) == pytest.approx(a * check_loss(e, tau), rel=1e-12, abs=1e-12)

    @given(
        e=st.floats(-1e6, 1e6, allow_nan=False),
        a=st.floats(1e-6, 1e6),
        tau=st.floats(0.01, 0.99),
    )
    def test_reflection_identity(self, e, a, tau):
        assert check_loss(-a * e, tau) == pytest.approx(
            a * check_loss(e, 1.0 - tau), rel=1e-12, abs=1e-12
        )


class TestFitLine:
    def test_three_points_interpolates_a_pair(self):
        sample = make_sample([0.0, 1.0, 2.0], [0.0, 2.0, 10.0])
        fit = fit_line(sample, 0.5)
        resid = sample.ys - fit.intercept - fit.slope * sample.xs
        assert np.sum(np.abs(resid) < 1e-12) >= 2
        assert fit.objective == pytest.approx(
            exhaustive_minimum(sample.xs, sample.ys, 0.5), abs=1e-12
        )

    def test_perfect_linear_fit(self):
        x = np.arange(10.0)
        sample = make_sample(x, 3.0 * x + 1.0)
        for tau in (0.1, 0.5, 0.9):
            fit = fit_line(sample, tau)
            assert fit.intercept == pytest.approx(1.0, abs=1e-12)
            assert fit.slope == pytest.approx(3.0, abs=1e-12)
            assert fit.objective == 0.0

    @pytest.mark.parametrize("tau", [0.05, 0.1, 0.5, 0.9, 0.95])
    def test_matches_exhaustive_oracle(self, tau):
        rng = np.random.default_rng(101)
        for _ in range(12):
            n = int(rng.integers(5, 200))
            x = rng.standard_normal(n)
            y = 0.4 * x + rng.standard_normal(n) * np.exp(rng.normal())
            fit = fit_line(make_sample(x, y), tau)
            assert fit.objective == pytest.approx(exhaustive_minimum(x, y, tau), abs=1e-9)

    def test_objective_recomputes_from_residuals(self):
        sample = draw_bivariate_normal(0.5, 200, RngStream(3, 1))
        fit = fit_line(sample, 0.1)
        resid = sample.ys - fit.intercept - fit.slope * sample.xs
        assert fit.objective == pytest.approx(pinball(resid, 0.1), abs=1e-10)

    def test_subgradient_box(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            n = int(rng.integers(4, 300))
            x = rng.standard_normal(n)
            y = rng.standard_normal(n) + x
            tau = float(rng.uniform(0.02, 0.98))
            fit = fit_line(make_sample(x, y), tau)
            assert fit.n_neg <= tau * n <= fit.n_neg + fit.n_zero

    def test_equivariance_on_integer_data(self):
        # distinct integer regressor values plus power-of-two scales keep the
        # slope relation exact in floating point
        rng = np.random.default_rng(11)
        x = rng.permutation(np.arange(-20, 20)).astype(float)
        y = rng.integers(-1000, 1000, size=40).astype(float)
        base = fit_line(make_sample(x, y), 0.3)
        scaled = fit_line(make_sample(2.0 * x + 3.0, 4.0 * y + 1.0), 0.3)
        assert scaled.slope == 2.0 * base.slope
        assert scaled.intercept == pytest.approx(
            4.0 * base.intercept + 1.0 - scaled.slope * 3.0, rel=1e-12, abs=1e-12
        )

    def test_swap_symmetry_is_exact(self):
        sample = draw_bivariate_normal(0.3, 150, RngStream(5, 0))
        direct = fit_line(sample, 0.25, X_ON_Y)
        swapped = fit_line(sample.swapped(), 0.25, Y_ON_X)
        assert direct.intercept == swapped.intercept
        assert direct.slope == swapped.slope
        assert direct.objective == swapped.objective

    def test_flat_response(self):
        sample = make_sample([0.0, 1.0, 2.0, 3.0], [5.0, 5.0, 5.0, 5.0])
        fit = fit_line(sample, 0.4)
        assert (fit.intercept, fit.slope, fit.objective) == (5.0, 0.0, 0.0)

    def test_constant_regressor_rejected(self):
        sample = make_sample([2.0, 2.0, 2.0, 2.0], [1.0, 2.0, 3.0, 4.0])
        with pytest.raises(DegenerateDesignError):
            fit_line(sample, 0.5)
        with pytest.raises(DegenerateDesignError):
            fit_line(sample.swapped(), 0.5, X_ON_Y)

    def test_too_few_points(self):
        with pytest.raises(InsufficientDataError):
            fit_line(make_sample([0.0, 1.0], [0.0, 1.0]), 0.5)

    def test_invalid_tau_and_direction(self):
        sample = make_sample([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
        for bad in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ParameterError):
                fit_line(sample, bad)
        with pytest.raises(ParameterError):
            fit_line(sample, 0.5, "sideways")


class TestFitBoth:
    def test_swap_relabels_fits(self):
        sample = draw_bivariate_normal(0.5, 120, RngStream(9, 9))
        fit_yx, fit_xy = fit_both(sample, 0.3)
        swapped_yx, swapped_xy = fit_both(sample.swapped(), 0.3)
        assert fit_yx.slope == swapped_xy.slope
        assert fit_xy.slope == swapped_yx.slope

    @pytest.mark.slow
    def test_normal_slopes_match_population(self):
        sample = draw_bivariate_normal(0.5, 100_000, RngStream(12, 0))
        fit_yx, fit_xy = fit_both(sample, 0.5)
        assert fit_yx.slope == pytest.approx(0.5, abs=0.02)
        assert fit_xy.slope == pytest.approx(0.5, abs=0.02)

    @pytest.mark.slow
    def test_independent_slopes_near_zero(self):
        sample = draw_bivariate_normal(0.0, 100_000, RngStream(13, 0))
        fit_yx, fit_xy = fit_both(sample, 0.3)
        assert abs(fit_yx.slope) < 0.02
        assert abs(fit_xy.slope) < 0.02
