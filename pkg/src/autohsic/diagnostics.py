"""
Residual-based diagnostic checking of fitted causal models.

A model is anything implementing :class:`CausalModel`: it can simulate a
series from parameters and innovations, estimate parameters from a series,
and invert a series back into innovation estimates.  GARCH(1,1) with Gaussian
QMLE ships as the reference implementation.

:func:`residual_bootstrap_test` calibrates AutoHSIC statistics of the
residuals by resampling standardized residuals, simulating from the fitted
model and refitting on every replicate, so that parameter-estimation noise is
part of the bootstrap null distribution.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import partial
from typing import Protocol

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from ._parallel import ordered_map
from ._rng import substream
from .bootstrap import BootstrapConfig, TestResult
from .errors import (
    DegenerateResiduals,
    EstimationFailed,
    NonPositiveVariance,
    ShapeMismatch,
    TooShort,
)
from .spaces import KernelSpec, ObjectSeries
from .statistics import LagGrams, _check_lag

logger = logging.getLogger(__name__)

BURN_IN = 200
QMLE_MIN_T = 50
QMLE_XATOL = 1e-8
QMLE_FATOL = 1e-8
QMLE_MAXFEV = 5000
_U_CLIP = 20.0


@dataclass(frozen=True)
class Garch11Params:
    """sigma2_t = omega + alpha x_{t-1}^2 + beta sigma2_{t-1}."""

    omega: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be nonnegative")
        if not self.alpha + self.beta < 1:
            raise ValueError("alpha + beta must be < 1 for covariance stationarity")

    @property
    def unconditional_variance(self) -> float:
        return self.omega / (1.0 - self.alpha - self.beta)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.omega, self.alpha, self.beta)


class CausalModel(Protocol):
    """Contract for models usable in :func:`residual_bootstrap_test`."""

    def simulate(self, params, innovations: np.ndarray,
                 burn_in: int = 0) -> np.ndarray:
        """Series driven by ``innovations``; the first ``burn_in`` are dropped."""

    def estimate(self, series: np.ndarray):
        """Fitted parameters; raises :class:`EstimationFailed`."""

    def residuals(self, series: np.ndarray, params) -> np.ndarray:
        """Innovation estimates, same length as ``series``."""


def _as_scalar_series(series) -> np.ndarray:
    if isinstance(series, ObjectSeries):
        if series.space.size != 1:
            raise ShapeMismatch("GARCH(1,1) requires a scalar series")
        series = series.data[:, 0]
    x = np.asarray(series, dtype=float)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.ndim != 1:
        raise ShapeMismatch("GARCH(1,1) requires a scalar series")
    return x


def garch11_filter(series, params: Garch11Params,
                   sigma2_init: float) -> np.ndarray:
    """Conditional variances, starting from ``sigma2_init`` at t = 1."""
    x = _as_scalar_series(series)
    if not sigma2_init > 0:
        raise NonPositiveVariance(f"sigma2_init must be positive, got {sigma2_init}")
    omega, alpha, beta = params.as_tuple()
    sigma2 = np.empty_like(x)
    sigma2[0] = sigma2_init
    if x.size > 1:
        drive = omega + alpha * x[:-1] ** 2
        sigma2[1:] = lfilter([1.0], [1.0, -beta], drive,
                             zi=[beta * sigma2_init])[0]
    if np.any(sigma2 <= 0):
        raise NonPositiveVariance("conditional variance recursion went non-positive")
    return sigma2


def _default_sigma2_init(x: np.ndarray, params: Garch11Params) -> float:
    v = float(np.var(x))
    return v if v > 0 else params.unconditional_variance


def garch11_residuals(series, params: Garch11Params,
                      sigma2_init: float | None = None) -> np.ndarray:
    """eta_t = x_t / sigma_t under ``params``.

    ``sigma2_init`` defaults to the sample variance, or to the unconditional
    variance when the series is constant.
    """
    x = _as_scalar_series(series)
    if sigma2_init is None:
        sigma2_init = _default_sigma2_init(x, params)
    return x / np.sqrt(garch11_filter(x, params, sigma2_init))


def garch11_simulate(params: Garch11Params, innovations,
                     burn_in: int = 0) -> np.ndarray:
    """x_t = sigma_t eta_t, started at the unconditional variance.

    Returns the last ``len(innovations) - burn_in`` values.
    """
    eta = np.asarray(innovations, dtype=float)
    omega, alpha, beta = params.as_tuple()
    x = np.empty_like(eta)
    s2 = params.unconditional_variance
    x_prev = 0.0
    for t in range(eta.size):
        if t > 0:
            s2 = omega + alpha * x_prev * x_prev + beta * s2
        x_prev = np.sqrt(s2) * eta[t]
        x[t] = x_prev
    return x[burn_in:]


# Search coordinates: (log unconditional variance, log(alpha/rest),
# log(beta/rest)) with rest = 1 - alpha - beta.  Using the unconditional
# variance instead of omega keeps the likelihood ridge that appears when
# alpha -> 0 (beta unidentified) aligned with a coordinate axis.
def _unpack(u: np.ndarray) -> tuple[float, float, float]:
    u = np.clip(u, -_U_CLIP, _U_CLIP)
    ea, eb = np.exp(u[1]), np.exp(u[2])
    denom = 1.0 + ea + eb
    alpha, beta = ea / denom, eb / denom
    return float(np.exp(u[0]) / denom), float(alpha), float(beta)


def _pack(omega: float, alpha: float, beta: float) -> np.ndarray:
    rest = 1.0 - alpha - beta
    return np.array([np.log(omega / rest), np.log(alpha / rest),
                     np.log(beta / rest)])


def _neg_loglik(x2: np.ndarray, sigma2_init: float, omega: float,
                alpha: float, beta: float) -> float:
    sigma2 = np.empty_like(x2)
    sigma2[0] = sigma2_init
    sigma2[1:] = lfilter([1.0], [1.0, -beta], omega + alpha * x2[:-1],
                         zi=[beta * sigma2_init])[0]
    return 0.5 * float(np.sum(np.log(sigma2) + x2 / sigma2))


def garch11_qmle(series) -> Garch11Params:
    """Gaussian QMLE of GARCH(1,1) by a Nelder-Mead simplex search.

    The search runs over the log unconditional variance and the logits of
    alpha and beta relative to 1 - alpha - beta, so every point of the search
    space satisfies alpha + beta < 1.  The simplex starts from the best of a
    small grid of persistence values.
    """
    x = _as_scalar_series(series)
    if x.size < QMLE_MIN_T:
        raise TooShort(f"GARCH(1,1) QMLE needs T >= {QMLE_MIN_T}, got {x.size}")
    var = float(np.var(x))
    if not var > 0:
        raise EstimationFailed("cannot fit GARCH(1,1) to a constant series")
    x2 = x * x

    def objective(u):
        return _neg_loglik(x2, var, *_unpack(u))

    starts = []
    for a0 in (0.05, 0.15):
        for b0 in (0.2, 0.5, 0.8):
            u0 = _pack(var * (1.0 - a0 - b0), a0, b0)
            starts.append((objective(u0), tuple(u0)))
    u0 = np.array(min(starts)[1])
    res = minimize(objective, u0, method="Nelder-Mead",
                   options={"xatol": QMLE_XATOL, "fatol": QMLE_FATOL,
                            "maxfev": QMLE_MAXFEV, "maxiter": QMLE_MAXFEV})
    if not res.success or not np.isfinite(res.fun):
        raise EstimationFailed(f"GARCH(1,1) QMLE did not converge: {res.message}")
    return Garch11Params(*_unpack(res.x))


class Garch11:
    """GARCH(1,1) reference model for :func:`residual_bootstrap_test`."""

    name = "garch11"

    def simulate(self, params: Garch11Params, innovations,
                 burn_in: int = 0) -> np.ndarray:
        return garch11_simulate(params, innovations, burn_in)

    def estimate(self, series) -> Garch11Params:
        return garch11_qmle(series)

    def residuals(self, series, params: Garch11Params) -> np.ndarray:
        return garch11_residuals(series, params)


class ConstantVariance(Garch11):
    """GARCH(1,1) with alpha = beta = 0 held fixed: residuals are x / sd(x)."""

    name = "constant-variance"

    def estimate(self, series) -> Garch11Params:
        x = _as_scalar_series(series)
        var = float(np.var(x))
        if not var > 0:
            raise EstimationFailed("cannot fit a constant series")
        return Garch11Params(var, 0.0, 0.0)


MODELS = {"garch11": Garch11, "constant-variance": ConstantVariance}


def standardize_residuals(residuals) -> np.ndarray:
    """Affine rescaling to sample mean 0 and variance 1 (divisor n)."""
    r = np.asarray(residuals, dtype=float)
    mu = r.mean()
    sd = np.sqrt(np.mean((r - mu) ** 2))
    if not sd > 0:
        raise DegenerateResiduals("residuals have zero sample variance")
    z = (r - mu) / sd
    # one refinement pass pulls mean and variance to within rounding
    z -= z.mean()
    return z / np.sqrt(np.mean(z * z))


@dataclass(frozen=True)
class DiagnosticReport:
    """Outcome of :func:`residual_bootstrap_test` (T-scaled statistics)."""

    T: int
    model: str
    params: object
    per_lag: tuple[TestResult, ...]
    portmanteau: TestResult
    config: BootstrapConfig
    k_spec: KernelSpec
    l_spec: KernelSpec
    k_bandwidth: float | None
    l_bandwidth: float | None
    refit_failures: int = 0

    @property
    def M(self) -> int:
        return self.portmanteau.lag

    def lag(self, m: int) -> TestResult:
        return self.per_lag[m - 1]


def residual_statistics(residuals: np.ndarray, kernel_pairs, M: int):
    """Unscaled residual AutoHSIC values at lags 1..M for each kernel pair.

    Returns an array of shape (len(kernel_pairs), M) and the LagGrams used.
    """
    series = ObjectSeries.vectors(residuals)
    grams = [LagGrams(series, k, l) for k, l in kernel_pairs]
    values = np.array([[g.pair(m).statistic() for m in range(1, M + 1)]
                       for g in grams])
    return values, grams


def _replicate(b: int, *, model, params, pool: np.ndarray, T: int,
               burn_in: int, seed: int, kernel_pairs, M: int):
    failures = 0
    for attempt in range(2):
        rng = substream(seed, b, attempt)
        eta = pool[rng.integers(0, pool.size, size=T + burn_in)]
        x_star = model.simulate(params, eta, burn_in)
        try:
            params_star = model.estimate(x_star)
        except EstimationFailed:
            failures += 1
            continue
        r_star = model.residuals(x_star, params_star)
        values, _ = residual_statistics(r_star, kernel_pairs, M)
        return values, failures
    raise EstimationFailed(
        f"bootstrap replicate {b}: refit failed on {failures} consecutive resamples"
    )


def residual_bootstrap_core(series, model: CausalModel, kernel_pairs, M: int,
                            cfg: BootstrapConfig, burn_in: int = BURN_IN,
                            workers: int = 1, details: dict | None = None):
    """Observed and bootstrap residual statistics for several kernel pairs.

    One set of B resample-simulate-refit replicates serves every kernel pair.
    Returns a list with one ``(observed, replicates)`` entry per pair, of
    shapes (M,) and (B, M), unscaled.  If ``details`` is given it receives the
    fitted parameters, bandwidths and refit-failure count.
    """
    x = _as_scalar_series(series)
    T = x.size
    _check_lag(T, M)
    params = model.estimate(x)
    resid = model.residuals(x, params)
    observed, grams = residual_statistics(resid, kernel_pairs, M)
    pool = standardize_residuals(resid)

    task = partial(_replicate, model=model, params=params, pool=pool, T=T,
                   burn_in=burn_in, seed=cfg.seed, kernel_pairs=kernel_pairs,
                   M=M)
    results = ordered_map(task, range(1, cfg.B + 1), workers)
    reps = np.stack([v for v, _ in results], axis=1)  # (pairs, B, M)
    failures = sum(f for _, f in results)
    if failures:
        logger.info("%d bootstrap refits failed and were redrawn", failures)
    if details is not None:
        details.update(params=params, T=T, failures=failures,
                       bandwidths=[(g.k_bandwidth, g.l_bandwidth) for g in grams])
    return [(observed[i], reps[i]) for i in range(len(kernel_pairs))]


def residual_bootstrap_test(series, model: CausalModel, k_spec: KernelSpec,
                            l_spec: KernelSpec, M: int,
                            cfg: BootstrapConfig = BootstrapConfig(),
                            burn_in: int = BURN_IN,
                            workers: int = 1) -> DiagnosticReport:
    """Residual-bootstrap diagnostic test of a fitted model.

    Parameters
    ----------
    series : array-like or ObjectSeries
        Observed scalar series.
    model : CausalModel
        Model to fit, simulate from and invert; refitted on every replicate.
    M : int
        Portmanteau order; single-lag tests are reported for lags 1..M.
    burn_in : int
        Pre-sample steps simulated and discarded for each bootstrap series.
    workers : int
        Worker processes for the replicates; output does not depend on it.
    """
    info: dict = {}
    [(observed, reps)] = residual_bootstrap_core(
        series, model, [(k_spec, l_spec)], M, cfg, burn_in, workers, info)
    T = info["T"]
    per_lag = tuple(
        TestResult.calibrate("V", m, T * observed[m - 1], T * reps[:, m - 1],
                             cfg.alpha)
        for m in range(1, M + 1)
    )
    port = TestResult.calibrate("P", M, T * observed.sum(),
                                T * reps.sum(axis=1), cfg.alpha)
    (k_bw, l_bw), = info["bandwidths"]
    return DiagnosticReport(T, getattr(model, "name", type(model).__name__),
                            info["params"], per_lag, port, cfg, k_spec, l_spec,
                            k_bw, l_bw, info["failures"])
