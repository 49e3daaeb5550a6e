"""Quantile correlation point estimators and derived tail measures.

The headline quantity is the signed geometric mean of the two directional
quantile-regression slopes.  A negative slope product (possible in finite
samples) yields the value 0 with ``clipped`` set; an absolute value above 1
is reported as-is with ``exceeds_one`` set, never truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, UndefinedCorrelationError
from .quantreg import QuantRegFit, check_tau, fit_both
from .sampling import BivariateSample

LI_XY = "xy"
LI_YX = "yx"


@dataclass(frozen=True)
class QCorrEstimate:
    """Sample quantile correlation together with the slopes that formed it."""

    tau: float
    rho_hat: float
    slope_yx: float
    slope_xy: float
    clipped: bool
    exceeds_one: bool


@dataclass(frozen=True)
class TailMeasure:
    """Difference of two quantile correlations.

    Kind ``"D"`` compares tau against the median level, kind ``"A"``
    compares tau against 1 - tau (tau below one half).
    """

    kind: str
    tau: float
    value: float
    rho_tau: float
    rho_ref: float


@dataclass(frozen=True)
class DeltaTau:
    """Sample moment diagnostic for the |rho_tau| <= 1 sufficient condition."""

    tau: float
    value: float


def combine_slopes(tau: float, slope_yx: float, slope_xy: float) -> QCorrEstimate:
    """Signed geometric mean of the two slopes, with sign(0) taken as 0."""
    product = slope_yx * slope_xy
    if product < 0.0:
        return QCorrEstimate(tau, 0.0, slope_yx, slope_xy, clipped=True, exceeds_one=False)
    sign = math.copysign(1.0, slope_yx) if slope_yx != 0.0 else 0.0
    rho = sign * math.sqrt(product)
    return QCorrEstimate(tau, rho, slope_yx, slope_xy, clipped=False, exceeds_one=abs(rho) > 1.0)


def quantile_correlation(sample: BivariateSample, tau: float) -> QCorrEstimate:
    """Estimate the tau-quantile correlation of the sample."""
    tau = check_tau(tau)
    fit_yx, fit_xy = fit_both(sample, tau)
    return combine_slopes(tau, fit_yx.slope, fit_xy.slope)


def tail_dependence_measure(sample: BivariateSample, tau: float) -> TailMeasure:
    """Excess of the tau-quantile correlation over the median correlation."""
    tau = check_tau(tau)
    rho_tau = quantile_correlation(sample, tau).rho_hat
    rho_med = quantile_correlation(sample, 0.5).rho_hat
    return TailMeasure("D", tau, rho_tau - rho_med, rho_tau, rho_med)


def tail_asymmetry_measure(sample: BivariateSample, tau: float) -> TailMeasure:
    """Left-versus-right difference rho(tau) - rho(1 - tau), for tau < 0.5."""
    tau = check_tau(tau)
    if tau >= 0.5:
        raise ParameterError(f"tail asymmetry requires tau < 0.5, got {tau}")
    rho_tau = quantile_correlation(sample, tau).rho_hat
    rho_ref = quantile_correlation(sample, 1.0 - tau).rho_hat
    return TailMeasure("A", tau, rho_tau - rho_ref, rho_tau, rho_ref)


def _pearson(u: np.ndarray, v: np.ndarray) -> float:
    du = u - u.mean()
    dv = v - v.mean()
    denom = math.sqrt(float(du @ du) * float(dv @ dv))
    if denom == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant series")
    return float(du @ dv) / denom


def li_indicator_correlation(
    sample: BivariateSample, tau: float, direction: str = LI_XY
) -> float:
    """Pearson correlation of a quantile-exceedance indicator with the other variable.

    Direction ``"xy"`` correlates 1[x > q_tau(x)] with y; ``"yx"`` correlates
    1[y > q_tau(y)] with x.  The sample quantile uses linear interpolation of
    order statistics.  A degenerate indicator (all zeros or all ones) raises
    :class:`~qcorr.errors.UndefinedCorrelationError`.
    """
    tau = check_tau(tau)
    if sample.n < 3:
        raise ParameterError(f"need at least 3 observations, got {sample.n}")
    if direction == LI_XY:
        base, other = sample.xs, sample.ys
    elif direction == LI_YX:
        base, other = sample.ys, sample.xs
    else:
        raise ParameterError(f"direction must be {LI_XY!r} or {LI_YX!r}, got {direction!r}")
    indicator = (base > np.quantile(base, tau)).astype(float)
    return _pearson(indicator, other)


def li_indicator_slopes(
    sample: BivariateSample, tau: float, direction: str = LI_XY
) -> tuple[float, float]:
    """The two regression slopes whose geometric mean is the indicator correlation.

    Returns (mean difference of the other variable across the indicator,
    least-squares slope of the indicator on the other variable).
    """
    tau = check_tau(tau)
    if direction == LI_XY:
        base, other = sample.xs, sample.ys
    elif direction == LI_YX:
        base, other = sample.ys, sample.xs
    else:
        raise ParameterError(f"direction must be {LI_XY!r} or {LI_YX!r}, got {direction!r}")
    indicator = (base > np.quantile(base, tau)).astype(float)
    var_i = float(np.var(indicator))
    var_o = float(np.var(other))
    if var_i == 0.0 or var_o == 0.0:
        raise UndefinedCorrelationError("slope decomposition undefined for a constant series")
    cov = float(np.mean((indicator - indicator.mean()) * (other - other.mean())))
    return cov / var_i, cov / var_o


def residuals(sample: BivariateSample, fit: QuantRegFit) -> np.ndarray:
    """Residuals of one directional fit, in the fit's own orientation."""
    if fit.direction == "y_on_x":
        return sample.ys - fit.intercept - fit.slope * sample.xs
    return sample.xs - fit.intercept - fit.slope * sample.ys


def delta_tau_diagnostic(sample: BivariateSample, tau: float) -> DeltaTau:
    """Sample analogue of the residual-moment quantity controlling |rho_tau| <= 1.

    Computes mean(e_xy^-) * mean(e_yx^-) - mean(e_xy^+) * mean(e_yx^+) from
    the residuals of both directional fits, where e^+ = e * 1[e >= 0] and
    e^- = e * 1[e < 0].
    """
    tau = check_tau(tau)
    fit_yx, fit_xy = fit_both(sample, tau)
    e21 = residuals(sample, fit_yx)
    e12 = residuals(sample, fit_xy)
    neg = float(np.mean(e12 * (e12 < 0))) * float(np.mean(e21 * (e21 < 0)))
    pos = float(np.mean(e12 * (e12 >= 0))) * float(np.mean(e21 * (e21 >= 0)))
    return DeltaTau(tau, neg - pos)
