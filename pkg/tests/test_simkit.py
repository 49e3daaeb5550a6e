import math

import numpy as np
import pytest

from qcorr.errors import ParameterError
from qcorr.sampling import DgpSpec
from qcorr.simkit import (
    CampaignSpec,
    approximate_true_rho,
    run_coverage_campaign,
    run_test_campaign,
    true_rho,
)


def small_spec(**kwargs):
    defaults = dict(
        dgp=DgpSpec(kind="normal"),
        n=150,
        taus=(0.5,),
        reps=24,
        level=0.9,
        density_method="hk",
        seed=77,
    )
    defaults.update(kwargs)
    return CampaignSpec(**defaults)


class TestSpecValidation:
    def test_guards(self):
        with pytest.raises(ParameterError):
            small_spec(reps=0)
        with pytest.raises(ParameterError):
            small_spec(taus=())
        with pytest.raises(ParameterError):
            small_spec(level=1.2)
        with pytest.raises(ParameterError):
            small_spec(density_method="kde")

    def test_missing_true_value(self):
        with pytest.raises(ParameterError):
            run_coverage_campaign(small_spec(), {0.25: 0.5}, n_jobs=1)

    def test_test_campaign_requires_low_tau(self):
        with pytest.raises(ParameterError):
            run_test_campaign(small_spec(taus=(0.5,)), n_jobs=1)


class TestCoverageCampaign:
    def test_deterministic_across_worker_counts(self):
        spec = small_spec()
        serial = run_coverage_campaign(spec, {0.5: 0.5}, n_jobs=1)
        parallel = run_coverage_campaign(spec, {0.5: 0.5}, n_jobs=2)
        assert serial == parallel

    def test_single_replication_fractions(self):
        report = run_coverage_campaign(small_spec(reps=1), {0.5: 0.5}, n_jobs=1)
        row = report.rows[0]
        assert row.coverage in (0.0, 1.0)
        assert row.error_rate in (0.0, 1.0)

    def test_error_accounting_sums_to_one(self):
        spec = small_spec(reps=30)
        report = run_coverage_campaign(spec, {0.5: 0.5}, n_jobs=1)
        row = report.rows[0]
        results = [  # recompute non-coverage from the same replications
            run_coverage_campaign(small_spec(reps=30), {0.5: 0.5}, n_jobs=1)
        ]
        assert 0.0 <= row.coverage <= 1.0
        assert row.coverage + row.error_rate <= 1.0
        assert results[0].rows[0] == row

    def test_coverage_monotone_in_level(self):
        lo = run_coverage_campaign(small_spec(level=0.5), {0.5: 0.5}, n_jobs=1)
        hi = run_coverage_campaign(small_spec(level=0.99), {0.5: 0.5}, n_jobs=1)
        assert hi.rows[0].coverage >= lo.rows[0].coverage

    def test_wide_level_covers_everything(self):
        report = run_coverage_campaign(small_spec(level=0.9999, reps=40), {0.5: 0.5}, n_jobs=1)
        assert report.rows[0].coverage == 1.0

    def test_multiple_taus_reported(self):
        spec = small_spec(taus=(0.25, 0.5), reps=10)
        report = run_coverage_campaign(spec, {0.25: 0.5, 0.5: 0.5}, n_jobs=1)
        assert [row.tau for row in report.rows] == [0.25, 0.5]


class TestTestCampaign:
    def test_deterministic_and_valid_rates(self):
        spec = small_spec(taus=(0.1,), reps=20, n=200)
        a = run_test_campaign(spec, n_jobs=1)
        b = run_test_campaign(spec, n_jobs=2)
        assert a == b
        row = a.rows[0]
        for rate in (row.rejection_rate_d, row.rejection_rate_a):
            assert 0.0 <= rate <= 1.0

    @pytest.mark.slow
    def test_clipped_rate_negligible_at_moderate_n(self):
        spec = CampaignSpec(
            dgp=DgpSpec(kind="t10"),
            n=2500,
            taus=(0.1,),
            reps=100,
            density_method="hk",
            seed=79,
        )
        report = run_test_campaign(spec, n_jobs=2)
        assert report.rows[0].clipped_rate < 0.01


class TestTrueValues:
    def test_normal_is_exact(self):
        assert true_rho(DgpSpec(kind="normal", rho=0.5), 0.3) == 0.5

    def test_approximation_near_known_value(self):
        estimate = approximate_true_rho(
            DgpSpec(kind="normal"), 0.5, reps=5, n_big=20_000, seed=3, n_jobs=1
        )
        assert estimate.value == pytest.approx(0.5, abs=0.01)
        assert estimate.mc_se < 0.01
        assert estimate.reps == 5 and estimate.n_big == 20_000

    def test_mc_se_definition(self):
        estimate = approximate_true_rho(
            DgpSpec(kind="cubic"), 0.5, reps=4, n_big=5_000, seed=4, n_jobs=1
        )
        assert math.isfinite(estimate.mc_se) and estimate.mc_se > 0

    def test_reps_guard(self):
        with pytest.raises(ParameterError):
            approximate_true_rho(DgpSpec(kind="normal"), 0.5, reps=0)
