"""Exact minimization of the averaged pinball loss over an intercept-slope pair.

The solver runs a primal-dual interior-point method on the linear-programming
form of pinball regression (duality-gap tolerance 1e-10) and then polishes the
result by snapping to the best line through two observations near the active
set.  An optimal basic solution of the LP interpolates two data points, so the
polish step makes the returned objective exact up to floating-point rounding
at any sample size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDesignError, InsufficientDataError, ParameterError
from .sampling import BivariateSample

Y_ON_X = "y_on_x"
X_ON_Y = "x_on_y"

_GAP_TOL = 1e-10
_MAX_ITER = 200
_STEP_SHRINK = 0.99995
_TIE_TOL = 1e-12


def check_tau(tau: float) -> float:
    if not 0.0 < tau < 1.0:
        raise ParameterError(f"tau must lie in the open interval (0, 1), got {tau}")
    return float(tau)


def check_loss(e, tau: float):
    """Pinball loss e * (tau - 1[e < 0]); nonnegative, vectorized over e."""
    tau = check_tau(tau)
    e = np.asarray(e, dtype=float)
    value = e * (tau - (e < 0.0))
    return value if value.ndim else float(value)


@dataclass(frozen=True)
class QuantRegFit:
    """One fitted quantile regression line.

    ``objective`` is the averaged pinball loss at the optimum; ``n_neg`` and
    ``n_zero`` count residuals below zero and (numerically) equal to zero, so
    that the optimality condition n_neg <= tau * n <= n_neg + n_zero holds.
    """

    tau: float
    direction: str
    intercept: float
    slope: float
    objective: float
    n_neg: int
    n_zero: int

    @property
    def coefficients(self) -> np.ndarray:
        """The pair (intercept, slope) as an array."""
        return np.array([self.intercept, self.slope])


def _pinball_mean(resid: np.ndarray, tau: float) -> float:
    return float(np.mean(resid * (tau - (resid < 0.0))))


def _interior_point(x: np.ndarray, c: np.ndarray, tau: float):
    """Frisch-Newton style predictor-corrector iteration.

    Solves max c'a subject to X'a = (1 - tau) X'1 and 0 <= a <= 1 with
    X = [1 x]; the dual vector of the equality constraints converges to the
    pinball-regression coefficients (intercept, slope).
    """
    n = x.size
    X = np.column_stack((np.ones(n), x))
    a = np.full(n, 1.0 - tau)
    s = 1.0 - a

    theta, *_ = np.linalg.lstsq(X, c, rcond=None)
    r = c - X @ theta
    eps0 = 1e-3 * max(1.0, float(np.abs(r).max()))
    z = np.maximum(-r, 0.0) + eps0
    w = z + r
    gap = z @ a + w @ s
    # tolerance is on the averaged loss, so scale the summed gap by n
    tol = _GAP_TOL * n

    for _ in range(_MAX_ITER):
        if gap < tol:
            break
        za = z / a
        ws = w / s
        d = 1.0 / (za + ws)

        def newton_step(rhs_vec):
            dr = d * rhs_vec
            q00 = d.sum()
            q01 = d @ x
            q11 = d @ (x * x)
            r0 = dr.sum()
            r1 = dr @ x
            det = q00 * q11 - q01 * q01
            if det <= 0 or not np.isfinite(det):
                return None
            dy0 = (q11 * r0 - q01 * r1) / det
            dy1 = (q00 * r1 - q01 * r0) / det
            da = dr - d * (dy0 + dy1 * x)
            return np.array([dy0, dy1]), da

        # affine predictor
        step = newton_step(w - z)
        if step is None:
            break
        _, da_aff = step
        dz_aff = -z - za * da_aff
        dw_aff = -w + ws * da_aff

        ap = _max_step(a, da_aff, s, -da_aff)
        ad = _max_step(z, dz_aff, w, dw_aff)
        gap_aff = (z + ad * dz_aff) @ (a + ap * da_aff) + (w + ad * dw_aff) @ (s - ap * da_aff)
        mu = (gap_aff / gap) ** 3 * gap / (2.0 * n)

        # corrector with second-order terms
        zeta = mu / a - z - (da_aff * dz_aff) / a
        omega = mu / s - w + (da_aff * dw_aff) / s
        step = newton_step(zeta - omega)
        if step is None:
            break
        dy, da = step
        dz = zeta - za * da
        dw = omega + ws * da

        ap = _max_step(a, da, s, -da)
        ad = _max_step(z, dz, w, dw)
        a = a + ap * da
        s = 1.0 - a
        theta = theta + ad * dy
        z = z + ad * dz
        w = w + ad * dw
        gap = z @ a + w @ s
        if not np.isfinite(gap):
            break

    return theta


def _max_step(u: np.ndarray, du: np.ndarray, v: np.ndarray, dv: np.ndarray) -> float:
    """Largest fraction of the step keeping u + t*du > 0 and v + t*dv > 0."""
    t = 1.0
    neg = du < 0
    if neg.any():
        t = min(t, float(np.min(u[neg] / -du[neg])))
    neg = dv < 0
    if neg.any():
        t = min(t, float(np.min(v[neg] / -dv[neg])))
    return _STEP_SHRINK * t


def _candidate_lines(x, y, tau, alpha0, beta0, n_cand):
    """Vertex candidates: lines through two observations near the active set,
    plus flat lines through order statistics around the tau-quantile of y."""
    n = x.size
    resid = np.abs(y - alpha0 - beta0 * x)
    k = min(n, n_cand)
    idx = np.argpartition(resid, k - 1)[:k] if k < n else np.arange(n)

    alphas = []
    betas = []
    xi, yi = x[idx], y[idx]
    for a_pos in range(k):
        dx = xi[a_pos + 1:] - xi[a_pos]
        dy = yi[a_pos + 1:] - yi[a_pos]
        keep = dx != 0.0
        if not keep.any():
            continue
        slope = dy[keep] / dx[keep]
        betas.append(slope)
        alphas.append(yi[a_pos] - slope * xi[a_pos])

    # flat candidates around the tau order statistic of y
    order = np.sort(y)
    center = int(np.ceil(tau * n)) - 1
    lo = max(0, center - 2)
    hi = min(n, center + 3)
    flat = np.unique(order[lo:hi])
    betas.append(np.zeros(flat.size))
    alphas.append(flat)

    return np.concatenate(alphas), np.concatenate(betas)


def _best_vertex(x, y, tau, alphas, betas):
    """Exact objective over candidate lines; ties resolved by smallest slope,
    then smallest intercept."""
    objs = np.empty(alphas.size)
    chunk = max(1, int(4_000_000 // max(1, x.size)))
    for start in range(0, alphas.size, chunk):
        al = alphas[start:start + chunk, None]
        be = betas[start:start + chunk, None]
        r = y[None, :] - al - be * x[None, :]
        objs[start:start + al.size] = np.mean(r * (tau - (r < 0.0)), axis=1)
    best_obj = float(objs.min())
    tol = _TIE_TOL * (1.0 + abs(best_obj))
    tied = np.flatnonzero(objs <= best_obj + tol)
    order = np.lexsort((alphas[tied], betas[tied]))
    pick = tied[order[0]]
    return float(alphas[pick]), float(betas[pick])


def _count_signs(resid: np.ndarray, scale: float):
    ztol = 1e-9 * scale
    n_zero = int(np.count_nonzero(np.abs(resid) <= ztol))
    n_neg = int(np.count_nonzero(resid < -ztol))
    return n_neg, n_zero


def _fit_core(x: np.ndarray, y: np.ndarray, tau: float, direction: str) -> QuantRegFit:
    n = x.size
    if n < 3:
        raise InsufficientDataError(f"need at least 3 observations, got {n}")
    if np.ptp(x) == 0.0:
        raise DegenerateDesignError("regressor is constant; slope is not identified")

    scale = 1.0 + float(np.abs(y).max()) + float(np.abs(x).max())

    if np.ptp(y) == 0.0:
        # flat response: the flat line through it is the unique zero-loss fit
        alpha, beta = float(y[0]), 0.0
    else:
        mx, sx = float(x.mean()), float(x.std())
        my, sy = float(y.mean()), float(y.std())
        theta = _interior_point((x - mx) / sx, (y - my) / sy, tau)
        beta0 = float(theta[1]) * sy / sx
        alpha0 = my + sy * float(theta[0]) - beta0 * mx

        alpha, beta = _polish(x, y, tau, alpha0, beta0)

    resid = y - alpha - beta * x
    obj = _pinball_mean(resid, tau)
    n_neg, n_zero = _count_signs(resid, scale)
    return QuantRegFit(
        tau=tau,
        direction=direction,
        intercept=alpha,
        slope=beta,
        objective=obj,
        n_neg=n_neg,
        n_zero=n_zero,
    )


def _polish(x, y, tau, alpha0, beta0):
    """Snap the interior-point iterate to the optimal two-point line."""
    n = x.size
    for n_cand in (12, 48):
        alphas, betas = _candidate_lines(x, y, tau, alpha0, beta0, n_cand)
        alpha, beta = _best_vertex(x, y, tau, alphas, betas)
        resid = y - alpha - beta * x
        n_neg, n_zero = _count_signs(resid, 1.0 + float(np.abs(y).max()) + float(np.abs(x).max()))
        if n_neg <= tau * n <= n_neg + n_zero:
            return alpha, beta
        alpha0, beta0 = alpha, beta
    # last resort for pathological inputs; candidate growth above covers
    # everything seen in practice
    limit = n if n <= 400 else 256
    alphas, betas = _candidate_lines(x, y, tau, alpha0, beta0, limit)
    return _best_vertex(x, y, tau, alphas, betas)


def fit_line(sample: BivariateSample, tau: float, direction: str = Y_ON_X) -> QuantRegFit:
    """Fit the pinball-loss line for one direction at quantile level tau.

    ``direction`` chooses the regressand: ``"y_on_x"`` fits y = a + b*x,
    ``"x_on_y"`` fits x = a + b*y.  Raises
    :class:`~qcorr.errors.DegenerateDesignError` when the regressor is
    constant and :class:`~qcorr.errors.InsufficientDataError` below 3 pairs.
    """
    tau = check_tau(tau)
    if direction == Y_ON_X:
        return _fit_core(sample.xs, sample.ys, tau, direction)
    if direction == X_ON_Y:
        return _fit_core(sample.ys, sample.xs, tau, direction)
    raise ParameterError(f"direction must be {Y_ON_X!r} or {X_ON_Y!r}, got {direction!r}")


def fit_both(sample: BivariateSample, tau: float) -> tuple[QuantRegFit, QuantRegFit]:
    """Fit both regression directions at the same tau."""
    return fit_line(sample, tau, Y_ON_X), fit_line(sample, tau, X_ON_Y)
