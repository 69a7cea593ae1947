"""
AutoHSIC statistics.

The lag-m statistic pairs the Gram block k(X_i, X_j) with the lagged block
l(X_{i-m}, X_{j-m}) over i, j = m+1..T, U-centres both and takes their
normalized Frobenius inner product.  A brute-force fourth-order U-statistic
(:func:`auto_hsic_ustat_oracle`) evaluates the same quantity from its
symmetric kernel and exists purely to certify the fast path.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import OracleTooLarge, ShapeMismatch, TooShort
from .spaces import KernelSpec, ObjectSeries, full_gram

ORACLE_MAX_PAIRS = 40


@dataclass(frozen=True)
class CenteredGramPair:
    """U-centred k-block ``a`` and lag-block ``b`` for one lag."""

    lag: int
    a: np.ndarray
    b: np.ndarray

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def normalizer(self) -> float:
        n = self.n
        return float(n * (n - 3))

    def statistic(self) -> float:
        return float(np.sum(self.a * self.b)) / self.normalizer


@dataclass(frozen=True)
class LagStatistic:
    lag: int
    v: float
    T: int

    @property
    def scaled(self) -> float:
        return self.T * self.v


@dataclass(frozen=True)
class PortmanteauStatistic:
    max_lag: int
    per_lag: tuple[LagStatistic, ...]

    @property
    def p(self) -> float:
        return float(sum(s.v for s in self.per_lag))

    @property
    def T(self) -> int:
        return self.per_lag[0].T

    @property
    def scaled(self) -> float:
        return self.T * self.p


def u_center(raw: np.ndarray) -> np.ndarray:
    """U-centre a square Gram block.

    The diagonal is discarded before any sums are taken; row and column
    means use the divisor n - 2 and the grand mean (n - 1)(n - 2).
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {raw.shape}")
    n = raw.shape[0]
    if n < 4:
        raise TooShort(f"U-centring needs n >= 4, got n={n}")
    # U-centring ignores constant offsets; removing one off-diagonal entry
    # first makes constant blocks centre to exact zeros.
    a = raw - raw[0, 1]
    np.fill_diagonal(a, 0.0)
    row = a.sum(axis=1)
    # reuse row sums for symmetric input so the output is exactly symmetric
    col = row if np.array_equal(a, a.T) else a.sum(axis=0)
    grand = row.sum()
    out = a - (row[:, None] + col[None, :]) / (n - 2)
    out += grand / ((n - 1) * (n - 2))
    np.fill_diagonal(out, 0.0)
    return out


def _check_lag(T: int, m: int):
    if m < 1:
        raise ValueError(f"lag must be >= 1, got {m}")
    if T - m < 4:
        raise TooShort(f"T - m = {T - m} < 4 (T={T}, m={m})")


class LagGrams:
    """Full-series Gram matrices for the k and l kernels, built once.

    Lag blocks are views into these matrices, so every lag shares the same
    bandwidths (resolved from all T observations).
    """

    def __init__(self, series: ObjectSeries, k_spec: KernelSpec,
                 l_spec: KernelSpec | None = None):
        l_spec = k_spec if l_spec is None else l_spec
        self.T = series.T
        self.k_spec, self.l_spec = k_spec, l_spec
        self.K, self.k_bandwidth = full_gram(k_spec, series)
        if l_spec == k_spec:
            self.L, self.l_bandwidth = self.K, self.k_bandwidth
        else:
            self.L, self.l_bandwidth = full_gram(l_spec, series)

    def pair(self, m: int) -> CenteredGramPair:
        _check_lag(self.T, m)
        T = self.T
        a = u_center(self.K[m:, m:])
        b = u_center(self.L[: T - m, : T - m])
        return CenteredGramPair(m, a, b)

    def statistic(self, m: int) -> LagStatistic:
        return LagStatistic(m, self.pair(m).statistic(), self.T)


def centered_pair(series: ObjectSeries, k_spec: KernelSpec,
                  l_spec: KernelSpec, m: int) -> CenteredGramPair:
    _check_lag(series.T, m)
    return LagGrams(series, k_spec, l_spec).pair(m)


def auto_hsic(series: ObjectSeries, k_spec: KernelSpec, l_spec: KernelSpec,
              m: int) -> LagStatistic:
    """Sample AutoHSIC at lag ``m``."""
    _check_lag(series.T, m)
    return LagGrams(series, k_spec, l_spec).statistic(m)


def portmanteau(series: ObjectSeries, k_spec: KernelSpec, l_spec: KernelSpec,
                M: int) -> PortmanteauStatistic:
    """Per-lag statistics for m = 1..M and their sum."""
    _check_lag(series.T, M)
    grams = LagGrams(series, k_spec, l_spec)
    return PortmanteauStatistic(
        M, tuple(grams.statistic(m) for m in range(1, M + 1))
    )


_PERMUTATIONS = tuple(itertools.permutations(range(4)))


def h_kernel(kx: np.ndarray, ly: np.ndarray) -> float:
    """Symmetric fourth-order kernel from the 4 x 4 kernel matrices.

    ``kx[p, q] = k(x_p, x_q)`` and ``ly[p, q] = l(y_p, y_q)`` for the four
    pairs z_p = (x_p, y_p).  Averages
    k(x_1, x_2) {l(y_3, y_4) + l(y_1, y_2) - 2 l(y_1, y_3)}
    over all 24 orderings of the four pairs.
    """
    total = 0.0
    for i1, i2, i3, i4 in _PERMUTATIONS:
        total += kx[i1, i2] * (ly[i3, i4] + ly[i1, i2] - 2.0 * ly[i1, i3])
    return total / 24.0


def h_kernel_points(z, k, l) -> float:
    """:func:`h_kernel` on four explicit pairs with kernel callables ``k``, ``l``."""
    xs = [p[0] for p in z]
    ys = [p[1] for p in z]
    kx = np.array([[k(a, b) for b in xs] for a in xs])
    ly = np.array([[l(a, b) for b in ys] for a in ys])
    return h_kernel(kx, ly)


def auto_hsic_ustat_oracle(series: ObjectSeries, k_spec: KernelSpec,
                           l_spec: KernelSpec, m: int) -> float:
    """Brute-force U-statistic over all quadruples of lagged pairs.

    Cost is O((T - m)^4); refused beyond 40 lagged pairs.
    """
    _check_lag(series.T, m)
    n = series.T - m
    if n > ORACLE_MAX_PAIRS:
        raise OracleTooLarge(f"oracle limited to {ORACLE_MAX_PAIRS} pairs, got {n}")
    K, _ = full_gram(k_spec, series)
    L, _ = full_gram(l_spec, series)
    # pair t (0-based, t = 0..n-1) is (X_{t+m}, X_t)
    Kp = K[m:, m:]
    Lp = L[:n, :n]
    total = 0.0
    for quad in itertools.combinations(range(n), 4):
        idx = np.array(quad)
        total += h_kernel(Kp[np.ix_(idx, idx)], Lp[np.ix_(idx, idx)])
    return total / comb(n, 4)
