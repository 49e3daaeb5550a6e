"""Brute-force reference solver for pinball-loss line fitting.

Kept independent of the library's solver: an optimal basic solution
interpolates two observations (or is flat through one when regressor values
repeat), so enumerating every candidate line and scoring it directly gives
the exact minimum in O(n^3) time.  Usable up to a few hundred points.
"""

import numpy as np


def pinball(resid, tau):
    return float(np.mean(resid * (tau - (resid < 0.0))))


def exhaustive_minimum(x, y, tau):
    """Minimum averaged pinball loss over all two-point lines and all flat
    lines through one observation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    best = np.inf
    for i in range(n):
        dx = x[i + 1:] - x[i]
        dy = y[i + 1:] - y[i]
        keep = dx != 0.0
        if keep.any():
            slopes = dy[keep] / dx[keep]
            intercepts = y[i] - slopes * x[i]
            resid = y[None, :] - intercepts[:, None] - slopes[:, None] * x[None, :]
            best = min(best, float(np.mean(resid * (tau - (resid < 0.0)), axis=1).min()))
    flat_resid = y[None, :] - y[:, None]
    best = min(best, float(np.mean(flat_resid * (tau - (flat_resid < 0.0)), axis=1).min()))
    return best
