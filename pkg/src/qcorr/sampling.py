"""Seeded generation of the five simulation designs and their building blocks.

Every generator is a pure function of an :class:`RngStream`: calling it twice
with the same stream reproduces the same sample bit for bit, and distinct
stream ids give independent replications regardless of scheduling order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParameterError

DGP_KINDS = ("normal", "t10", "rocket", "cubic", "garch")

_ROCKET_RHO = 0.5
_ROCKET_CUTOFF = -1.645
_GARCH_PARAMS = (0.001, 0.1, 0.85)
_GARCH_BURN_IN = 500


@dataclass(frozen=True)
class RngStream:
    """Identifies one reproducible stream of randomness.

    ``seed`` names a campaign, ``stream_id`` one replication inside it.  The
    pair is fed to :class:`numpy.random.SeedSequence`, so streams with
    different ids are statistically independent and safe to draw from in
    parallel.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not (0 <= int(value) < 2**64):
                raise ParameterError(f"{name} must be an unsigned 64-bit integer, got {value!r}")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.default_rng(np.random.SeedSequence([self.seed, self.stream_id]))

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


@dataclass(frozen=True)
class BivariateSample:
    """Paired observations (x_i, y_i), the universal input of the package."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or ys.ndim != 1:
            raise DataError("xs and ys must be one-dimensional")
        if xs.shape != ys.shape:
            raise DataError(f"xs and ys must have equal length, got {xs.shape} and {ys.shape}")
        if xs.size < 1:
            raise DataError("sample must contain at least one pair")
        if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
            raise DataError("sample contains non-finite values")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return self.xs.size

    def swapped(self) -> "BivariateSample":
        """The sample with the roles of x and y exchanged."""
        return BivariateSample(self.ys, self.xs)


@dataclass(frozen=True)
class DgpSpec:
    """Parameters of one data-generating process.

    ``rho`` is used by the normal, t, and garch designs; ``df`` by the t
    design; ``c`` is the contamination threshold of the rocket design; and
    ``garch_params = (omega, arch, garch)`` are the variance recursion
    coefficients.
    """

    kind: str
    rho: float = 0.5
    df: int = 10
    c: float = _ROCKET_CUTOFF
    garch_params: tuple[float, float, float] = field(default=_GARCH_PARAMS)

    def __post_init__(self):
        if self.kind not in DGP_KINDS:
            raise ParameterError(f"unknown DGP kind {self.kind!r}, expected one of {DGP_KINDS}")
        if not -1.0 < self.rho < 1.0:
            raise ParameterError(f"rho must lie in (-1, 1), got {self.rho}")
        if self.df < 1:
            raise ParameterError(f"df must be a positive integer, got {self.df}")
        omega, arch, garch = self.garch_params
        if omega <= 0 or arch <= 0 or garch <= 0:
            raise ParameterError("garch_params must be positive")
        if arch + garch >= 1.0:
            raise ParameterError(
                f"arch + garch must be below 1 for covariance stationarity, got {arch + garch}"
            )


def _require_count(n: int) -> int:
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _check_rho(rho: float) -> float:
    if not -1.0 < rho < 1.0:
        raise ParameterError(f"rho must lie in (-1, 1), got {rho}")
    return float(rho)


def _correlated_normal_pair(rho: float, n: int, rng: np.random.Generator):
    z1 = rng.standard_normal(n)
    z2 = rng.standard_normal(n)
    return z1, rho * z1 + math.sqrt(1.0 - rho * rho) * z2


def draw_bivariate_normal(rho: float, n: int, rng: RngStream) -> BivariateSample:
    """Draw n pairs from the unit-variance bivariate normal with correlation rho."""
    rho = _check_rho(rho)
    n = _require_count(n)
    x, y = _correlated_normal_pair(rho, n, rng.generator())
    return BivariateSample(x, y)


def draw_bivariate_t(rho: float, df: int, n: int, rng: RngStream) -> BivariateSample:
    """Draw n pairs from the bivariate t with ``df`` degrees of freedom.

    Both coordinates share a single chi-square mixing variable, built as a
    sum of ``df`` squared standard normals so no gamma sampler is needed.
    """
    rho = _check_rho(rho)
    if int(df) != df or df < 1:
        raise ParameterError(f"df must be a positive integer, got {df!r}")
    n = _require_count(n)
    gen = rng.generator()
    z1, z2 = _correlated_normal_pair(rho, n, gen)
    w = np.zeros(n)
    # chunk the df dimension so large df does not allocate a (df, n) block
    max_cells = 10_000_000
    step = max(1, max_cells // n)
    remaining = int(df)
    while remaining > 0:
        k = min(step, remaining)
        w += np.square(gen.standard_normal((k, n))).sum(axis=0)
        remaining -= k
    scale = np.sqrt(df / w)
    return BivariateSample(z1 * scale, z2 * scale)


def rocket_components(
    n: int,
    rng: RngStream,
    rho: float = _ROCKET_RHO,
    c: float = _ROCKET_CUTOFF,
):
    """Underlying normal pair, common error, and contamination mask of the rocket DGP."""
    rho = _check_rho(rho)
    n = _require_count(n)
    gen = rng.generator()
    x0, y0 = _correlated_normal_pair(rho, n, gen)
    e = gen.standard_normal(n)
    mask = (x0 <= c) & (y0 <= c)
    return x0, y0, e, mask


def draw_rocket(
    n: int,
    rng: RngStream,
    rho: float = _ROCKET_RHO,
    c: float = _ROCKET_CUTOFF,
) -> BivariateSample:
    """Draw the rocket-shaped design: a correlated normal pair whose lower-left
    region (both coordinates at most ``c``) is contaminated by one shared
    standard normal error added to both coordinates."""
    x0, y0, e, mask = rocket_components(n, rng, rho=rho, c=c)
    bump = e * mask
    return BivariateSample(x0 + bump, y0 + bump)


def draw_cubic(n: int, rng: RngStream) -> BivariateSample:
    """Draw the cubic design y = x**3 + e with x, e independent standard normal."""
    n = _require_count(n)
    gen = rng.generator()
    x = gen.standard_normal(n)
    e = gen.standard_normal(n)
    return BivariateSample(x, x**3 + e)


def garch_components(
    n: int,
    rng: RngStream,
    rho: float = 0.5,
    params: tuple[float, float, float] = _GARCH_PARAMS,
    burn_in: int = _GARCH_BURN_IN,
):
    """Return (x, y, sig2_x, sig2_y) for the bivariate GARCH(1,1) design.

    Each coordinate follows sig2_i = omega + arch * value_{i-1}**2 +
    garch * sig2_{i-1} with innovations that are contemporaneously correlated
    standard normals.  The recursion starts at the stationary variance
    omega / (1 - arch - garch) and the first ``burn_in`` steps are discarded.
    """
    omega, arch, garch = params
    if arch + garch >= 1.0:
        raise ParameterError("arch + garch must be below 1 for covariance stationarity")
    n = _require_count(n)
    total = n + burn_in
    ex, ey = _correlated_normal_pair(rho, total, rng.generator())
    x = np.empty(total)
    y = np.empty(total)
    s2x = np.empty(total)
    s2y = np.empty(total)
    vx = vy = omega / (1.0 - arch - garch)
    xprev = yprev = 0.0
    first = True
    for i in range(total):
        if not first:
            # grouped exactly like the vectorized recursion check so the
            # emitted path can be reproduced bit for bit
            vx = omega + arch * (xprev * xprev) + garch * vx
            vy = omega + arch * (yprev * yprev) + garch * vy
        first = False
        xprev = math.sqrt(vx) * ex[i]
        yprev = math.sqrt(vy) * ey[i]
        x[i] = xprev
        y[i] = yprev
        s2x[i] = vx
        s2y[i] = vy
    return x[burn_in:], y[burn_in:], s2x[burn_in:], s2y[burn_in:]


def draw_garch(
    n: int,
    rng: RngStream,
    rho: float = 0.5,
    params: tuple[float, float, float] = _GARCH_PARAMS,
) -> BivariateSample:
    """Draw n pairs of GARCH(1,1) returns with correlated innovations."""
    x, y, _, _ = garch_components(n, rng, rho=rho, params=params)
    return BivariateSample(x, y)


def draw(spec: DgpSpec, n: int, rng: RngStream) -> BivariateSample:
    """Draw from the design described by ``spec``."""
    if spec.kind == "normal":
        return draw_bivariate_normal(spec.rho, n, rng)
    if spec.kind == "t10":
        return draw_bivariate_t(spec.rho, spec.df, n, rng)
    if spec.kind == "rocket":
        return draw_rocket(n, rng, rho=spec.rho, c=spec.c)
    if spec.kind == "cubic":
        return draw_cubic(n, rng)
    if spec.kind == "garch":
        return draw_garch(n, rng, rho=spec.rho, params=spec.garch_params)
    raise ParameterError(f"unknown DGP kind {spec.kind!r}")
