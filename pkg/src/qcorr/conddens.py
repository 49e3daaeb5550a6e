"""Conditional density values at the fitted quantile lines.

Two strategies are provided.  The weighted-kernel estimator evaluates a
Nadaraya-Watson style conditional density with plug-in bandwidths that are
optimal under bivariate normality; it is consistent for iid samples.  The
difference-quotient estimator inverts the gap between two nearby quantile
fits and only needs the linear-quantile assumption, which also covers
martingale-difference data.

The standard normal pdf/cdf/inverse-cdf helpers used across the package live
here; they are accurate to better than 1e-12 absolute error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DegenerateMomentsError, ParameterError
from .quantreg import QuantRegFit, check_tau, fit_both
from .sampling import BivariateSample

BH = "bh"
HK = "hk"

# roughness of the Gaussian kernel, integral of K^2
GAUSS_ROUGHNESS = 1.0 / (2.0 * math.sqrt(math.pi))

_BH_K = 3.0
_HK_EPS = 0.001
_BLOCK = 1024


def norm_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return out if out.ndim else float(out)


def norm_cdf(x):
    out = special.ndtr(np.asarray(x, dtype=float))
    return out if out.ndim else float(out)


def norm_ppf(p):
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0.0) | (p >= 1.0)):
        raise ParameterError("normal quantile requires probabilities inside (0, 1)")
    out = special.ndtri(p)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BhBandwidths:
    """Plug-in smoothing bandwidths for the weighted-kernel estimator.

    ``a`` smooths the conditioning variable, ``b`` the response; one pair per
    regression direction.
    """

    a_yx: float
    b_yx: float
    a_xy: float
    b_xy: float


@dataclass(frozen=True)
class DensityValues:
    """Conditional density values at the fitted lines, one per observation."""

    method: str
    f_yx: np.ndarray
    f_xy: np.ndarray


def _bh_pair(cond: np.ndarray, resp: np.ndarray) -> tuple[float, float]:
    """Bandwidth pair for estimating the density of resp given cond."""
    n = cond.size
    sd_c = float(np.std(cond, ddof=1))
    sd_r = float(np.std(resp, ddof=1))
    if sd_c == 0.0 or sd_r == 0.0:
        raise DegenerateMomentsError("bandwidths undefined for a zero-variance sample")
    rho = float(np.corrcoef(cond, resp)[0, 1])
    # exact collinearity lands within a few ulps of +-1, not exactly on it
    if 1.0 - rho * rho < 1e-12:
        raise DegenerateMomentsError("bandwidths undefined for perfectly correlated data")

    k = _BH_K
    lam = float(special.ndtr(k) - special.ndtr(-k))
    rk = GAUSS_ROUGHNESS
    # the fractional powers below need d >= 0; mirroring the response flips
    # the sign of rho but cannot change a kernel width, so use the magnitude
    d = abs(rho) * sd_r / sd_c
    p = math.sqrt((1.0 - rho * rho) * sd_r**2)
    v = (
        math.sqrt(2.0 * math.pi) * sd_c**3 * (3.0 * d * d * sd_c**2 + 8.0 * p * p) * lam
        - 16.0 * k * sd_c**2 * p * p * math.exp(-k * k / 2.0)
    )
    num = 16.0 * k * rk**2 * p**5 * (288.0 * math.pi**9 * sd_c**58 * lam**2) ** 0.125
    den = (
        n
        * d**2.5
        * v**0.75
        * (v**0.5 + d * (18.0 * math.pi * sd_c**10 * lam**2) ** 0.25)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        a = (num / den) ** (1.0 / 6.0)
        b = (d * d * v / (3.0 * math.sqrt(2.0 * math.pi) * sd_c**5 * lam)) ** 0.25 * a
    # the formula degenerates when |rho| reaches 1 (p -> 0) or 0 (d -> 0)
    if not (math.isfinite(a) and math.isfinite(b) and a > 0.0 and b > 0.0):
        raise DegenerateMomentsError(
            f"plug-in bandwidths degenerate for sample correlation {rho:.6g}"
        )
    return a, b


def bh_bandwidths(sample: BivariateSample) -> BhBandwidths:
    """Plug-in bandwidths for both directions; the x-on-y pair comes from the
    same formula with the roles of the variables interchanged."""
    a_yx, b_yx = _bh_pair(sample.xs, sample.ys)
    a_xy, b_xy = _bh_pair(sample.ys, sample.xs)
    return BhBandwidths(a_yx=a_yx, b_yx=b_yx, a_xy=a_xy, b_xy=b_xy)


def _gauss_kernel_matrix(left: np.ndarray, right: np.ndarray, scale: float) -> np.ndarray:
    """exp(-((left_i - right_j) / scale)^2 / 2), built in place."""
    m = np.subtract.outer(left, right)
    m *= 1.0 / scale
    np.multiply(m, m, out=m)
    m *= -0.5
    np.exp(m, out=m)
    return m


def _bh_weights(cond: np.ndarray, a: float) -> np.ndarray:
    """Row-normalized kernel weights w[i, j] = K((cond_i - cond_j)/a) / row sum."""
    w = _gauss_kernel_matrix(cond, cond, a)
    w /= w.sum(axis=1, keepdims=True)
    return w


class BhDensityEvaluator:
    """Weighted-kernel conditional densities for one sample.

    The conditioning-variable weights depend only on the sample and the
    bandwidths, so one evaluator serves fits at several quantile levels.
    Up to ``cache_limit`` observations the normalized weight matrices are
    kept in memory; beyond that evaluation is blocked to bound memory.
    """

    def __init__(
        self,
        sample: BivariateSample,
        bw: BhBandwidths | None = None,
        cache_limit: int = 4096,
    ):
        self.sample = sample
        self.bw = bw if bw is not None else bh_bandwidths(sample)
        self._wx = self._wy = None
        if sample.n <= cache_limit:
            self._wx = _bh_weights(sample.xs, self.bw.a_yx)
            self._wy = _bh_weights(sample.ys, self.bw.a_xy)

    def _direction(self, cond, resp, a, b, line_values, weights):
        n = cond.size
        norm = 1.0 / (b * math.sqrt(2.0 * math.pi))
        if weights is not None:
            ku = _gauss_kernel_matrix(line_values, resp, b)
            return norm * np.einsum("ij,ij->i", weights, ku)
        out = np.empty(n)
        for start in range(0, n, _BLOCK):
            stop = min(start + _BLOCK, n)
            wu = _gauss_kernel_matrix(cond[start:stop], cond, a)
            ku = _gauss_kernel_matrix(line_values[start:stop], resp, b)
            out[start:stop] = norm * np.einsum("ij,ij->i", wu, ku) / wu.sum(axis=1)
        return out

    def values(self, fits: tuple[QuantRegFit, QuantRegFit]) -> DensityValues:
        fit_yx, fit_xy = fits
        xs, ys = self.sample.xs, self.sample.ys
        f_yx = self._direction(
            xs, ys, self.bw.a_yx, self.bw.b_yx, fit_yx.intercept + fit_yx.slope * xs, self._wx
        )
        f_xy = self._direction(
            ys, xs, self.bw.a_xy, self.bw.b_xy, fit_xy.intercept + fit_xy.slope * ys, self._wy
        )
        return DensityValues(BH, f_yx, f_xy)


def bh_density_values(
    sample: BivariateSample,
    fits: tuple[QuantRegFit, QuantRegFit],
    bw: BhBandwidths | None = None,
) -> DensityValues:
    """Weighted-kernel density values at the two fitted quantile lines."""
    return BhDensityEvaluator(sample, bw).values(fits)


def hk_bandwidth(n: int, tau: float) -> float:
    """Quantile-spacing bandwidth that is optimal under normality."""
    tau = check_tau(tau)
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    q = norm_ppf(tau)
    return n ** (-0.2) * (4.5 * norm_pdf(q) ** 4 / (2.0 * q * q + 1.0) ** 2) ** 0.2


def _difference_quotient(gap: np.ndarray, h: float, eps: float) -> np.ndarray:
    denom = gap - eps
    with np.errstate(divide="ignore", over="ignore"):
        values = np.where(denom > 0.0, 2.0 * h / denom, 0.0)
    return np.where(np.isfinite(values), values, 0.0)


def hk_density_values(
    sample: BivariateSample, tau: float, eps: float = _HK_EPS
) -> DensityValues:
    """Difference-quotient density values from two flanking quantile fits.

    Fits both directions at tau + h and tau - h (clamped into (0, 1) by
    1/(n+1) when needed) and inverts the spacing of the two lines at each
    observation.  Nonpositive spacings map to density 0.
    """
    tau = check_tau(tau)
    n = sample.n
    h = hk_bandwidth(n, tau)
    hi = min(tau + h, 1.0 - 1.0 / (n + 1))
    lo = max(tau - h, 1.0 / (n + 1))
    fit_hi = fit_both(sample, hi)
    fit_lo = fit_both(sample, lo)

    xs, ys = sample.xs, sample.ys
    gap_yx = (fit_hi[0].intercept - fit_lo[0].intercept) + (fit_hi[0].slope - fit_lo[0].slope) * xs
    gap_xy = (fit_hi[1].intercept - fit_lo[1].intercept) + (fit_hi[1].slope - fit_lo[1].slope) * ys
    return DensityValues(HK, _difference_quotient(gap_yx, h, eps), _difference_quotient(gap_xy, h, eps))


def density_values(
    sample: BivariateSample,
    tau: float,
    fits: tuple[QuantRegFit, QuantRegFit],
    method: str = BH,
    bh_evaluator: BhDensityEvaluator | None = None,
) -> DensityValues:
    """Dispatch to the requested strategy; ``bh_evaluator`` allows reuse of
    precomputed kernel weights across quantile levels."""
    if method == BH:
        evaluator = bh_evaluator if bh_evaluator is not None else BhDensityEvaluator(sample)
        return evaluator.values(fits)
    if method == HK:
        return hk_density_values(sample, tau)
    raise ParameterError(f"density method must be {BH!r} or {HK!r}, got {method!r}")
