import math

import numpy as np
import pytest
from scipy import integrate

from qcorr.errors import DataError, ParameterError
from qcorr.sampling import (
    BivariateSample,
    DgpSpec,
    RngStream,
    draw,
    draw_bivariate_normal,
    draw_bivariate_t,
    draw_cubic,
    draw_garch,
    draw_rocket,
    garch_components,
    rocket_components,
)


class TestContainers:
    def test_sample_validation(self):
        with pytest.raises(DataError):
            BivariateSample(np.array([1.0, 2.0]), np.array([1.0]))
        with pytest.raises(DataError):
            BivariateSample(np.array([1.0, np.nan]), np.array([1.0, 2.0]))
        with pytest.raises(DataError):
            BivariateSample(np.array([]), np.array([]))

    def test_swapped(self):
        s = BivariateSample(np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0, 6.0]))
        assert (s.swapped().xs == s.ys).all()

    def test_dgp_spec_guards(self):
        with pytest.raises(ParameterError):
            DgpSpec(kind="normal", rho=1.0)
        with pytest.raises(ParameterError):
            DgpSpec(kind="t10", df=0)
        with pytest.raises(ParameterError):
            DgpSpec(kind="garch", garch_params=(0.001, 0.2, 0.8))
        with pytest.raises(ParameterError):
            DgpSpec(kind="lognormal")

    def test_stream_guards(self):
        with pytest.raises(ParameterError):
            RngStream(-1)
        with pytest.raises(ParameterError):
            RngStream(0, 2**64)


class TestDeterminism:
    @pytest.mark.parametrize("kind", ["normal", "t10", "rocket", "cubic", "garch"])
    def test_same_stream_reproduces(self, kind):
        spec = DgpSpec(kind=kind)
        a = draw(spec, 50, RngStream(1, 7))
        b = draw(spec, 50, RngStream(1, 7))
        assert (a.xs == b.xs).all() and (a.ys == b.ys).all()

    def test_different_streams_differ(self):
        a = draw_bivariate_normal(0.5, 50, RngStream(1, 7))
        b = draw_bivariate_normal(0.5, 50, RngStream(1, 8))
        assert not (a.xs == b.xs).all()

    def test_zero_count_rejected(self):
        with pytest.raises(ParameterError):
            draw_bivariate_normal(0.5, 0, RngStream(0))


class TestNormal:
    @pytest.mark.slow
    def test_marginals_and_correlation(self):
        n = 1_000_000
        s = draw_bivariate_normal(0.5, n, RngStream(42, 0))
        for v in (s.xs, s.ys):
            assert abs(v.mean()) < 5.0 / math.sqrt(n)
            assert abs(v.var() - 1.0) < 0.01
        assert np.corrcoef(s.xs, s.ys)[0, 1] == pytest.approx(0.5, abs=0.02)

    def test_independent_pairs_uncorrelated(self):
        s = draw_bivariate_normal(0.0, 100_000, RngStream(42, 1))
        assert np.corrcoef(s.xs, s.ys)[0, 1] == pytest.approx(0.0, abs=0.02)

    def test_invalid_rho(self):
        with pytest.raises(ParameterError):
            draw_bivariate_normal(1.5, 10, RngStream(0))


class TestStudentT:
    def test_correlation(self):
        s = draw_bivariate_t(0.5, 10, 100_000, RngStream(21, 0))
        assert np.corrcoef(s.xs, s.ys)[0, 1] == pytest.approx(0.5, abs=0.03)

    @pytest.mark.slow
    def test_marginal_kurtosis_matches_quadrature(self):
        # compute the t(10) fourth moment independently by quadrature
        df = 10
        const = math.gamma((df + 1) / 2) / (math.sqrt(df * math.pi) * math.gamma(df / 2))

        def density(x):
            return const * (1.0 + x * x / df) ** (-(df + 1) / 2)

        m4, _ = integrate.quad(lambda x: x**4 * density(x), -np.inf, np.inf)
        m2, _ = integrate.quad(lambda x: x**2 * density(x), -np.inf, np.inf)
        kurt_true = m4 / m2**2
        assert kurt_true == pytest.approx(4.0, abs=1e-6)

        s = draw_bivariate_t(0.5, df, 1_000_000, RngStream(21, 1))
        x = s.xs
        kurt = float(np.mean((x - x.mean()) ** 4) / np.var(x) ** 2)
        assert kurt == pytest.approx(kurt_true, abs=0.3)

    @pytest.mark.slow
    def test_large_df_approaches_normal(self):
        n = 400
        t = draw_bivariate_t(0.5, 1_000_000, n, RngStream(21, 2))
        z = draw_bivariate_normal(0.5, n, RngStream(21, 2))
        # the shared mixing factor is 1 + O(df**-0.5), so paired stats agree
        assert np.corrcoef(t.xs, t.ys)[0, 1] == pytest.approx(
            np.corrcoef(z.xs, z.ys)[0, 1], abs=0.01
        )
        assert t.xs.var() == pytest.approx(z.xs.var(), rel=0.01)

    def test_zero_df_rejected(self):
        with pytest.raises(ParameterError):
            draw_bivariate_t(0.5, 0, 10, RngStream(0))


class TestRocket:
    @pytest.mark.slow
    def test_contamination_fraction_matches_quadrature(self):
        rho, c = 0.5, -1.645

        def density(u, v):
            q = (u * u - 2 * rho * u * v + v * v) / (1.0 - rho * rho)
            return math.exp(-0.5 * q) / (2.0 * math.pi * math.sqrt(1.0 - rho * rho))

        prob, err = integrate.dblquad(density, -9.0, c, -9.0, c)
        assert err < 1e-8
        _, _, _, mask = rocket_components(1_000_000, RngStream(33, 0))
        assert mask.mean() == pytest.approx(prob, abs=0.002)

    def test_uncontaminated_pairs_equal_normal_pairs(self):
        x0, y0, e, mask = rocket_components(5000, RngStream(33, 1))
        s = draw_rocket(5000, RngStream(33, 1))
        keep = ~mask
        assert (s.xs[keep] == x0[keep]).all()
        assert (s.ys[keep] == y0[keep]).all()
        assert (s.xs[mask] == x0[mask] + e[mask]).all()

    def test_threshold_at_minus_infinity_is_plain_normal(self):
        s = draw_rocket(2000, RngStream(33, 2), c=-np.inf)
        x0, y0, _, mask = rocket_components(2000, RngStream(33, 2), c=-np.inf)
        assert not mask.any()
        assert (s.xs == x0).all() and (s.ys == y0).all()


class TestCubic:
    @pytest.mark.slow
    def test_moments(self):
        s = draw_cubic(1_000_000, RngStream(44, 0))
        assert abs(s.ys.mean()) < 0.02
        assert np.corrcoef(s.xs, s.ys)[0, 1] == pytest.approx(0.750, abs=0.01)
        # Var(y) = E[x^6] + 1, with the sixth moment from quadrature
        m6, _ = integrate.quad(
            lambda x: x**6 * math.exp(-x * x / 2) / math.sqrt(2 * math.pi), -np.inf, np.inf
        )
        assert m6 == pytest.approx(15.0, abs=1e-8)
        assert s.ys.var() == pytest.approx(m6 + 1.0, abs=0.3)


class TestGarch:
    @pytest.mark.slow
    def test_unconditional_variance(self):
        s = draw_garch(1_000_000, RngStream(55, 0))
        assert s.xs.var() == pytest.approx(0.001 / (1 - 0.1 - 0.85), abs=0.005)

    def test_innovation_correlation_recovered(self):
        x, y, s2x, s2y = garch_components(100_000, RngStream(55, 1))
        zx = x / np.sqrt(s2x)
        zy = y / np.sqrt(s2y)
        assert np.corrcoef(zx, zy)[0, 1] == pytest.approx(0.5, abs=0.02)
        assert zx.var() == pytest.approx(1.0, abs=0.02)

    def test_recursion_reproduces_internal_variance_path(self):
        x, y, s2x, s2y = garch_components(4000, RngStream(55, 2))
        omega, arch, garch = 0.001, 0.1, 0.85
        recomputed = omega + arch * (x[:-1] * x[:-1]) + garch * s2x[:-1]
        assert (recomputed == s2x[1:]).all()
        recomputed_y = omega + arch * (y[:-1] * y[:-1]) + garch * s2y[:-1]
        assert (recomputed_y == s2y[1:]).all()

    def test_nonstationary_params_rejected(self):
        with pytest.raises(ParameterError):
            draw_garch(100, RngStream(0), params=(0.001, 0.3, 0.75))
