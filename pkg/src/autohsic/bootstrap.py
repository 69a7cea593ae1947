"""
Wild bootstrap calibration of the single-lag and portmanteau statistics.

For each replicate b and lag m a fresh Rademacher weight vector w is drawn and
the centred kernel products c_ij = a_ij b_ij are reweighted on both indices,
V* = w' C w / ((T - m)(T - m - 3)).  The product matrix C is formed once per
lag and reused by every replicate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._rng import substream
from .errors import ShapeMismatch
from .spaces import KernelSpec, ObjectSeries
from .statistics import CenteredGramPair, LagGrams, _check_lag

WEIGHT_FAMILIES = ("rademacher",)


@dataclass(frozen=True)
class BootstrapConfig:
    B: int = 500
    alpha: float = 0.05
    seed: int = 0
    weights: str = "rademacher"

    def __post_init__(self):
        if self.B < 1:
            raise ValueError(f"B must be >= 1, got {self.B}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.weights not in WEIGHT_FAMILIES:
            raise ValueError(f"unknown weight family {self.weights!r}")


def draw_weights(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` i.i.d. Rademacher weights (+1 or -1 with probability 1/2)."""
    return 2.0 * rng.integers(0, 2, size=n) - 1.0


def weight_stream(seed: int, b: int, m: int) -> np.random.Generator:
    """Weight generator for replicate ``b`` at lag ``m``."""
    return substream(seed, b, m)


def bootstrap_statistic_once(pair: CenteredGramPair, w) -> float:
    """Doubly weighted statistic V* for a single weight vector."""
    w = np.asarray(w, dtype=float)
    if w.shape != (pair.n,):
        raise ShapeMismatch(f"expected {pair.n} weights, got shape {w.shape}")
    c = pair.a * pair.b
    return float(w @ c @ w) / pair.normalizer


def lag_replicates(pair: CenteredGramPair, seed: int, B: int) -> np.ndarray:
    """B bootstrap replicates of V (unscaled) for one lag."""
    n, m = pair.n, pair.lag
    W = np.empty((B, n))
    for b in range(B):
        W[b] = draw_weights(weight_stream(seed, b + 1, m), n)
    c = pair.a * pair.b
    return np.einsum("bi,bi->b", W @ c, W) / pair.normalizer


def critical_value(replicates: np.ndarray, alpha: float) -> float:
    """Empirical 1 - alpha quantile: order statistic ceil((1 - alpha) B)."""
    reps = np.sort(np.asarray(replicates, dtype=float))
    B = reps.size
    k = math.ceil((1.0 - alpha) * B - 1e-9)
    k = min(max(k, 1), B)
    return float(reps[k - 1])


def p_value(statistic: float, replicates: np.ndarray) -> float:
    """Plus-one bootstrap p-value, (1 + #{stat* >= stat}) / (B + 1)."""
    reps = np.asarray(replicates, dtype=float)
    return (1.0 + np.count_nonzero(reps >= statistic)) / (reps.size + 1.0)


@dataclass(frozen=True)
class TestResult:
    """One calibrated test: a statistic on the T-scale and its replicates."""

    __test__ = False

    name: str
    lag: int
    statistic: float
    replicates: np.ndarray = field(repr=False)
    critical_value: float
    p_value: float

    @property
    def reject(self) -> bool:
        return self.statistic > self.critical_value

    @classmethod
    def calibrate(cls, name: str, lag: int, statistic: float,
                  replicates: np.ndarray, alpha: float) -> "TestResult":
        replicates = np.asarray(replicates, dtype=float)
        replicates.flags.writeable = False
        return cls(name, lag, float(statistic), replicates,
                   critical_value(replicates, alpha),
                   p_value(statistic, replicates))


@dataclass(frozen=True)
class TestReport:
    """Outcome of :func:`wild_bootstrap_test`."""

    __test__ = False

    T: int
    per_lag: tuple[TestResult, ...]
    portmanteau: TestResult
    config: BootstrapConfig
    k_spec: KernelSpec
    l_spec: KernelSpec
    k_bandwidth: float | None
    l_bandwidth: float | None

    @property
    def M(self) -> int:
        return self.portmanteau.lag

    def lag(self, m: int) -> TestResult:
        return self.per_lag[m - 1]


def wild_bootstrap_replicates(grams: LagGrams, lags: Sequence[int], seed: int,
                              B: int) -> dict[int, tuple[float, np.ndarray]]:
    """Observed V and B replicates of V* for each lag in ``lags`` (unscaled)."""
    out = {}
    for m in lags:
        pair = grams.pair(m)
        out[m] = (pair.statistic(), lag_replicates(pair, seed, B))
    return out


def wild_bootstrap_test(series: ObjectSeries, k_spec: KernelSpec,
                        l_spec: KernelSpec, M: int,
                        cfg: BootstrapConfig = BootstrapConfig()) -> TestReport:
    """Single-lag tests for m = 1..M and the portmanteau test up to M.

    Statistics, replicates and critical values are all reported on the
    T-scale (T V and T P); p-values use the plus-one convention.
    """
    _check_lag(series.T, M)
    T = series.T
    grams = LagGrams(series, k_spec, l_spec)
    raw = wild_bootstrap_replicates(grams, range(1, M + 1), cfg.seed, cfg.B)
    per_lag = tuple(
        TestResult.calibrate("V", m, T * v, T * reps, cfg.alpha)
        for m, (v, reps) in raw.items()
    )
    p_stat = T * sum(v for v, _ in raw.values())
    p_reps = T * np.sum([reps for _, reps in raw.values()], axis=0)
    port = TestResult.calibrate("P", M, p_stat, p_reps, cfg.alpha)
    return TestReport(T, per_lag, port, cfg, k_spec, l_spec,
                      grams.k_bandwidth, grams.l_bandwidth)
