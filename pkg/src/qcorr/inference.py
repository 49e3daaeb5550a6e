"""Sandwich variance estimation, confidence intervals, and tail tests.

The asymptotic variance of the quantile correlation has the sandwich form
G' M^-1 H M^-1 G, where H averages outer products of the stacked
quantile-regression scores, M averages conditional-density-weighted design
moments, and G is the delta-method gradient of the signed geometric mean of
the slopes.  The two-level form for differences of quantile correlations
stacks both levels into 8x8 blocks, including the cross-level score
covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conddens import (
    BH,
    BhDensityEvaluator,
    DensityValues,
    density_values,
    norm_cdf,
    norm_ppf,
)
from .correlation import QCorrEstimate, combine_slopes
from .errors import (
    DegenerateVarianceError,
    ParameterError,
    SingularInformationError,
)
from .quantreg import QuantRegFit, check_tau, fit_both
from .sampling import BivariateSample

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class SandwichParts:
    """Ingredients of the sandwich variance.

    ``h_mat``, ``m_mat``, ``g1`` cover single-level inference; the 8x8
    ``h8``/``m8`` and ``g2`` are present for two-level differences.
    """

    h_mat: np.ndarray
    m_mat: np.ndarray
    g1: np.ndarray
    h8: np.ndarray | None = None
    m8: np.ndarray | None = None
    g2: np.ndarray | None = None


@dataclass(frozen=True)
class CiResult:
    """Point estimate with its standard error, interval, and p-value."""

    tau: float
    rho_hat: float
    se: float
    level: float
    lower: float
    upper: float
    p_value: float


@dataclass(frozen=True)
class TestResult:
    """One tail test.  ``degenerate`` marks a clipped slope product or zero
    variance at either level; the statistic and p-value are then absent."""

    kind: str
    tau: float
    estimate: float
    se: float
    t_stat: float | None
    p_value: float | None
    degenerate: bool = False


def score_vectors(
    sample: BivariateSample, fits: tuple[QuantRegFit, QuantRegFit]
) -> np.ndarray:
    """Stacked score rows [x_i* (tau - 1[r_yx < 0]) | y_i* (tau - 1[r_xy < 0])].

    x* denotes the design vector (1, x).  The indicator is strict, so a zero
    residual contributes tau.
    """
    fit_yx, fit_xy = fits
    xs, ys = sample.xs, sample.ys
    psi_yx = fit_yx.tau - (ys - fit_yx.intercept - fit_yx.slope * xs < 0.0)
    psi_xy = fit_xy.tau - (xs - fit_xy.intercept - fit_xy.slope * ys < 0.0)
    return np.column_stack((psi_yx, xs * psi_yx, psi_xy, ys * psi_xy))


def h_hat(scores_a: np.ndarray, scores_b: np.ndarray | None = None) -> np.ndarray:
    """Average outer product of score rows; symmetric PSD when both sides agree."""
    if scores_b is None:
        scores_b = scores_a
    return scores_a.T @ scores_b / scores_a.shape[0]


def m_hat(sample: BivariateSample, dens: DensityValues) -> np.ndarray:
    """Block-diagonal average of density-weighted design moments."""
    xs, ys = sample.xs, sample.ys
    out = np.zeros((4, 4))
    out[:2, :2] = _weighted_block(xs, dens.f_yx)
    out[2:, 2:] = _weighted_block(ys, dens.f_xy)
    return out


def _weighted_block(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    n = values.size
    w_sum = float(weights.sum())
    wv = float(weights @ values)
    wvv = float(weights @ (values * values))
    return np.array([[w_sum, wv], [wv, wvv]]) / n


def _invert_blockdiag(m: np.ndarray) -> np.ndarray:
    """Inverse of a block-diagonal matrix of 2x2 blocks, with a condition guard."""
    out = np.zeros_like(m)
    for start in range(0, m.shape[0], 2):
        block = m[start:start + 2, start:start + 2]
        if not np.isfinite(block).all() or np.linalg.cond(block) > _COND_LIMIT:
            raise SingularInformationError(
                "density-weighted information block is numerically singular"
            )
        out[start:start + 2, start:start + 2] = np.linalg.inv(block)
    return out


def _g_ratio(beta_1: float, beta_2: float) -> float:
    if beta_1 * beta_2 > 0.0:
        return math.copysign(1.0, beta_1) * math.sqrt(beta_2 / beta_1)
    return 0.0


def gradient_single(slope_yx: float, slope_xy: float) -> np.ndarray:
    """Delta-method gradient of the signed geometric mean at one level."""
    return 0.5 * np.array(
        [0.0, _g_ratio(slope_yx, slope_xy), 0.0, _g_ratio(slope_xy, slope_yx)]
    )


def gradient_double(b1: float, b2: float, b3: float, b4: float) -> np.ndarray:
    """Gradient of the difference of two quantile correlations.

    Arguments are (slope_yx, slope_xy) at the first level then the second.
    Only meaningful when both slope products are positive.
    """
    return 0.5 * np.array(
        [
            0.0,
            math.sqrt(b2 / b1),
            0.0,
            math.sqrt(b1 / b2),
            0.0,
            -math.sqrt(b4 / b3),
            0.0,
            -math.sqrt(b3 / b4),
        ]
    )


def sandwich_parts(
    sample: BivariateSample,
    fits: tuple[QuantRegFit, QuantRegFit],
    dens: DensityValues,
) -> SandwichParts:
    scores = score_vectors(sample, fits)
    return SandwichParts(
        h_mat=h_hat(scores),
        m_mat=m_hat(sample, dens),
        g1=gradient_single(fits[0].slope, fits[1].slope),
    )


def variance_rho(parts: SandwichParts) -> float:
    """Asymptotic variance of the quantile correlation (before the 1/n scaling).

    A zero gradient (clipped slope product) gives variance 0; callers decide
    whether that is a degenerate case for their purposes.
    """
    if not parts.g1.any():
        return 0.0
    m_inv = _invert_blockdiag(parts.m_mat)
    half = m_inv @ parts.g1
    # quadratic form in a PSD Gram matrix; clamp rounding fuzz at zero
    return max(float(half @ parts.h_mat @ half), 0.0)


def confidence_interval(
    sample: BivariateSample,
    tau: float,
    level: float = 0.9,
    density_method: str = BH,
    bh_evaluator: BhDensityEvaluator | None = None,
) -> CiResult:
    """Normal-theory confidence interval and p-value for the quantile correlation."""
    tau = check_tau(tau)
    if not 0.0 < level < 1.0:
        raise ParameterError(f"level must lie in (0, 1), got {level}")
    fits = fit_both(sample, tau)
    estimate = combine_slopes(tau, fits[0].slope, fits[1].slope)
    dens = density_values(sample, tau, fits, density_method, bh_evaluator)
    parts = sandwich_parts(sample, fits, dens)
    variance = variance_rho(parts)
    se = math.sqrt(variance / sample.n)
    if se == 0.0 or not math.isfinite(se):
        raise DegenerateVarianceError(
            "variance estimate is degenerate (clipped slopes or zero densities)"
        )
    z = norm_ppf(0.5 + level / 2.0)
    rho = estimate.rho_hat
    return CiResult(
        tau=tau,
        rho_hat=rho,
        se=se,
        level=level,
        lower=rho - z * se,
        upper=rho + z * se,
        p_value=2.0 * norm_cdf(-abs(rho) / se),
    )


@dataclass(frozen=True)
class _Level:
    """Everything inference needs about one quantile level of one sample."""

    tau: float
    fits: tuple[QuantRegFit, QuantRegFit]
    scores: np.ndarray
    m_mat: np.ndarray
    estimate: QCorrEstimate
    gradient: np.ndarray


def _make_level(sample, tau, density_method, bh_evaluator) -> _Level:
    fits = fit_both(sample, tau)
    dens = density_values(sample, tau, fits, density_method, bh_evaluator)
    return _Level(
        tau=tau,
        fits=fits,
        scores=score_vectors(sample, fits),
        m_mat=m_hat(sample, dens),
        estimate=combine_slopes(tau, fits[0].slope, fits[1].slope),
        gradient=gradient_single(fits[0].slope, fits[1].slope),
    )


def _stack_levels(lv1: _Level, lv2: _Level) -> SandwichParts:
    h8 = np.zeros((8, 8))
    h8[:4, :4] = h_hat(lv1.scores)
    h8[:4, 4:] = h_hat(lv1.scores, lv2.scores)
    h8[4:, :4] = h_hat(lv2.scores, lv1.scores)
    h8[4:, 4:] = h_hat(lv2.scores)
    m8 = np.zeros((8, 8))
    m8[:4, :4] = lv1.m_mat
    m8[4:, 4:] = lv2.m_mat

    b1, b2 = lv1.fits[0].slope, lv1.fits[1].slope
    b3, b4 = lv2.fits[0].slope, lv2.fits[1].slope
    if b1 * b2 > 0.0 and b3 * b4 > 0.0:
        g2 = gradient_double(b1, b2, b3, b4)
    else:
        g2 = np.zeros(8)
    return SandwichParts(
        h_mat=h8[:4, :4],
        m_mat=lv1.m_mat,
        g1=gradient_single(b1, b2),
        h8=h8,
        m8=m8,
        g2=g2,
    )


def two_tau_parts(
    sample: BivariateSample,
    tau1: float,
    tau2: float,
    density_method: str = BH,
    bh_evaluator: BhDensityEvaluator | None = None,
) -> SandwichParts:
    """Stacked 8x8 sandwich ingredients for the difference rho(tau1) - rho(tau2).

    Cross-level score covariances use each level's own fitted coefficients.
    """
    tau1 = check_tau(tau1)
    tau2 = check_tau(tau2)
    lv1 = _make_level(sample, tau1, density_method, bh_evaluator)
    lv2 = _make_level(sample, tau2, density_method, bh_evaluator)
    return _stack_levels(lv1, lv2)


def two_tau_variance(parts: SandwichParts) -> float:
    """Variance of the difference of two quantile correlations (pre 1/n)."""
    if parts.h8 is None or parts.m8 is None or parts.g2 is None:
        raise ParameterError("parts were not built for two-level inference")
    if not parts.g2.any():
        return 0.0
    m_inv = _invert_blockdiag(parts.m8)
    half = m_inv @ parts.g2
    return max(float(half @ parts.h8 @ half), 0.0)


def _difference_test(kind: str, n: int, lv1: _Level, lv2: _Level) -> TestResult:
    parts = _stack_levels(lv1, lv2)
    estimate = lv1.estimate.rho_hat - lv2.estimate.rho_hat
    if lv1.estimate.clipped or lv2.estimate.clipped or not parts.g2.any():
        return TestResult(kind, lv1.tau, estimate, 0.0, None, None, degenerate=True)
    variance = two_tau_variance(parts)
    se = math.sqrt(max(variance, 0.0) / n)
    if se == 0.0 or not math.isfinite(se):
        return TestResult(kind, lv1.tau, estimate, se, None, None, degenerate=True)
    t_stat = estimate / se
    return TestResult(kind, lv1.tau, estimate, se, t_stat, 2.0 * norm_cdf(-abs(t_stat)))


def tail_tests(
    sample: BivariateSample,
    tau: float,
    density_method: str = BH,
    bh_evaluator: BhDensityEvaluator | None = None,
) -> tuple[TestResult, TestResult]:
    """Tail dependence and tail asymmetry t-tests at level tau < 0.5.

    The dependence test compares tau against the median level; the asymmetry
    test compares tau against 1 - tau.  Both statistics are asymptotically
    standard normal under their null hypotheses.
    """
    tau = check_tau(tau)
    if tau >= 0.5:
        raise ParameterError(f"tail tests require tau < 0.5, got {tau}")
    if density_method == BH and bh_evaluator is None:
        bh_evaluator = BhDensityEvaluator(sample)
    lv_tau = _make_level(sample, tau, density_method, bh_evaluator)
    lv_med = _make_level(sample, 0.5, density_method, bh_evaluator)
    lv_ref = _make_level(sample, 1.0 - tau, density_method, bh_evaluator)
    test_d = _difference_test("D", sample.n, lv_tau, lv_med)
    test_a = _difference_test("A", sample.n, lv_tau, lv_ref)
    return test_d, test_a
