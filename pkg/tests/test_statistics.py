"""U-centring, AutoHSIC, the portmanteau sum and the U-statistic oracle."""
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autohsic import statistics, verify
from autohsic.errors import OracleTooLarge, TooShort
from autohsic.simulation import IIDNormal, ProductMA, dgp_sample
from autohsic.spaces import (
    BROWNIAN,
    GAUSSIAN,
    LAPLACIAN,
    KernelSpec,
    ObjectSeries,
    SpaceDescriptor,
    eval_kernel,
    gram_matrix,
)
from autohsic.statistics import (
    LagGrams,
    auto_hsic,
    auto_hsic_ustat_oracle,
    centered_pair,
    h_kernel,
    h_kernel_points,
    portmanteau,
    u_center,
)

KERNELS = (GAUSSIAN, LAPLACIAN, BROWNIAN)


def _u_center_exact(raw):
    """Rational-arithmetic evaluation of the U-centring display formula."""
    n = len(raw)
    a = [[Fraction(0) if i == j else Fraction(raw[i][j]) for j in range(n)]
         for i in range(n)]
    row = [sum(a[i]) for i in range(n)]
    col = [sum(a[i][j] for i in range(n)) for j in range(n)]
    grand = sum(row)
    return [[Fraction(0) if i == j else
             a[i][j] - row[i] / (n - 2) - col[j] / (n - 2)
             + grand / ((n - 1) * (n - 2)) for j in range(n)] for i in range(n)]


# -- u_center ----------------------------------------------------------------

def test_u_center_constant_offdiagonal_is_zero():
    raw = np.ones((4, 4))
    assert np.array_equal(u_center(raw), np.zeros((4, 4)))


def test_u_center_hand_example_matches_direct_formula():
    # the diagonal is ignored, so fill it with junk
    raw = [[7, 1, 2, 3], [1, -9, 4, 5], [2, 4, 11, 6], [3, 5, 6, 0.5]]
    expected = np.array(_u_center_exact(raw), dtype=float)
    assert np.array_equal(u_center(np.array(raw, dtype=float)), expected)


def test_u_center_matches_exact_formula_on_integer_block():
    rng = np.random.default_rng(17)
    raw = rng.integers(-20, 20, size=(7, 7))
    raw = raw + raw.T
    expected = np.array(_u_center_exact(raw.tolist()), dtype=float)
    assert np.max(np.abs(u_center(raw.astype(float)) - expected)) <= 1e-13


def test_u_center_too_short():
    with pytest.raises(TooShort):
        u_center(np.ones((3, 3)))


def test_u_center_row_sums_on_gaussian_blocks():
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = int(rng.integers(4, 40))
        series = ObjectSeries.vectors(rng.standard_normal((n, 2)))
        out = u_center(gram_matrix(GAUSSIAN, series))
        assert np.max(np.abs(out.sum(axis=1))) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 30), st.integers(0, 2**32 - 1), st.floats(-50, 50))
def test_u_center_invariants(n, seed, shift):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, n))
    raw = x + x.T
    out = u_center(raw)
    scale = max(1.0, np.max(np.abs(out)))
    assert np.all(np.diag(out) == 0.0)
    assert np.max(np.abs(out.sum(axis=0))) <= 1e-9 * n * scale
    assert np.max(np.abs(out.sum(axis=1))) <= 1e-9 * n * scale
    assert np.array_equal(out, out.T)
    # adding a constant to every entry changes nothing
    assert np.max(np.abs(u_center(raw + shift) - out)) <= 1e-10 * (1 + abs(shift))


# -- auto_hsic ---------------------------------------------------------------

def test_auto_hsic_constant_series_is_zero():
    series = ObjectSeries.vectors(np.full((12, 2), 3.0))
    assert auto_hsic(series, BROWNIAN, BROWNIAN, 1).v == 0.0
    fixed = KernelSpec("gaussian", 1.0)
    assert auto_hsic(series, fixed, fixed, 2).v == 0.0


def test_auto_hsic_matches_oracle_t10():
    series = ObjectSeries.vectors(np.random.default_rng(10).standard_normal(10))
    v = auto_hsic(series, GAUSSIAN, GAUSSIAN, 1).v
    oracle = auto_hsic_ustat_oracle(series, GAUSSIAN, GAUSSIAN, 1)
    assert v == pytest.approx(oracle, rel=1e-10)


def test_oracle_matches_auto_hsic_t12_lag2():
    series = ObjectSeries.vectors(np.random.default_rng(12).standard_normal(12))
    oracle = auto_hsic_ustat_oracle(series, LAPLACIAN, GAUSSIAN, 2)
    assert oracle == pytest.approx(auto_hsic(series, LAPLACIAN, GAUSSIAN, 2).v,
                                   rel=1e-10)


@pytest.mark.parametrize("T", [8, 9, 11, 14])
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("k", KERNELS, ids=lambda s: s.label)
@pytest.mark.parametrize("dim", [1, 3])
def test_oracle_identity_grid(T, m, k, dim):
    rng = np.random.default_rng(1000 * T + 10 * m + dim)
    series = ObjectSeries.vectors(rng.standard_normal((T, dim)))
    oracle = auto_hsic_ustat_oracle(series, k, k, m)
    assert abs(auto_hsic(series, k, k, m).v - oracle) <= 1e-9 * (1 + abs(oracle))


def test_oracle_identity_matrix_and_functional_spaces():
    rng = np.random.default_rng(31)
    for series in (ObjectSeries.matrices(rng.standard_normal((11, 2, 2))),
                   ObjectSeries.curves(rng.standard_normal((11, 15)))):
        for k in KERNELS:
            oracle = auto_hsic_ustat_oracle(series, k, GAUSSIAN, 2)
            fast = auto_hsic(series, k, GAUSSIAN, 2).v
            assert abs(fast - oracle) <= 1e-9 * (1 + abs(oracle))


def test_oracle_single_quadruple():
    rng = np.random.default_rng(4)
    series = ObjectSeries.vectors(rng.standard_normal(5))
    K = gram_matrix(GAUSSIAN, series)
    single = h_kernel(K[1:, 1:], K[:4, :4])
    assert auto_hsic_ustat_oracle(series, GAUSSIAN, GAUSSIAN, 1) == pytest.approx(
        single, rel=1e-14)


def test_oracle_constant_series_and_size_guard():
    series = ObjectSeries.vectors(np.zeros(10))
    assert auto_hsic_ustat_oracle(series, BROWNIAN, BROWNIAN, 1) == 0.0
    big = ObjectSeries.vectors(np.random.default_rng(0).standard_normal(42))
    with pytest.raises(OracleTooLarge):
        auto_hsic_ustat_oracle(big, GAUSSIAN, GAUSSIAN, 1)


def test_auto_hsic_too_short():
    series = ObjectSeries.vectors(np.arange(6.0))
    with pytest.raises(TooShort):
        auto_hsic(series, GAUSSIAN, GAUSSIAN, 3)
    auto_hsic(series, GAUSSIAN, GAUSSIAN, 2)


def test_auto_hsic_frozen_value():
    # regression pin, agreeing with the brute-force oracle to 1e-10
    x = np.sin(np.arange(1, 21) * 1.7) + 0.1 * np.arange(20) % 3
    series = ObjectSeries.vectors(x)
    v = auto_hsic(series, GAUSSIAN, GAUSSIAN, 1).v
    assert v == pytest.approx(-0.0039782688371032835, rel=1e-10)
    assert v == pytest.approx(auto_hsic_ustat_oracle(series, GAUSSIAN, GAUSSIAN, 1),
                              rel=1e-10)


def test_lag_statistic_scaling():
    series = ObjectSeries.vectors(np.random.default_rng(2).standard_normal(50))
    s = auto_hsic(series, GAUSSIAN, GAUSSIAN, 1)
    assert s.scaled == pytest.approx(50 * s.v, rel=1e-15)


def test_centered_pair_invariants():
    series = ObjectSeries.vectors(np.random.default_rng(9).standard_normal((40, 3)))
    pair = centered_pair(series, GAUSSIAN, LAPLACIAN, 2)
    assert pair.n == 38
    for M in (pair.a, pair.b):
        assert np.all(np.diag(M) == 0.0)
        assert np.array_equal(M, M.T)
        assert np.max(np.abs(M.sum(axis=1))) <= 1e-9 * pair.n * np.max(np.abs(M))


def test_lag_blocks_follow_lag_convention():
    # pair t is (X_{t+m}, X_t): the k-block drops the first m points and the
    # l-block drops the last m
    rng = np.random.default_rng(3)
    series = ObjectSeries.vectors(rng.standard_normal(15))
    grams = LagGrams(series, GAUSSIAN, LAPLACIAN)
    pair = grams.pair(2)
    assert np.array_equal(pair.a, u_center(gram_matrix(GAUSSIAN, series, 2, 15)))
    assert np.array_equal(pair.b, u_center(
        gram_matrix(LAPLACIAN, series, 0, 13,
                    gamma=grams.l_bandwidth)))


def test_portmanteau_sums_lags():
    series = ObjectSeries.vectors(np.random.default_rng(5).standard_normal((60, 2)))
    p1 = portmanteau(series, GAUSSIAN, GAUSSIAN, 1)
    assert p1.p == p1.per_lag[0].v
    p3 = portmanteau(series, GAUSSIAN, GAUSSIAN, 3)
    total = sum(auto_hsic(series, GAUSSIAN, GAUSSIAN, m).v for m in (1, 2, 3))
    assert abs(p3.p - total) <= 1e-12 * max(1.0, abs(total))
    assert p3.scaled == pytest.approx(60 * p3.p)
    const = ObjectSeries.vectors(np.ones(10))
    assert portmanteau(const, BROWNIAN, BROWNIAN, 3).p == 0.0


def test_portmanteau_too_short():
    with pytest.raises(TooShort):
        portmanteau(ObjectSeries.vectors(np.arange(7.0)), GAUSSIAN, GAUSSIAN, 4)


# -- h kernel ----------------------------------------------------------------

def _naive_h(z, k, l):
    total = 0.0
    for p in itertools.permutations(range(4)):
        x = [z[i][0] for i in p]
        y = [z[i][1] for i in p]
        total += k(x[0], x[1]) * (l(y[2], y[3]) + l(y[0], y[1]) - 2 * l(y[0], y[2]))
    return total / 24


def test_h_kernel_identical_arguments():
    one = np.ones((4, 4))
    assert h_kernel(one, one) == 0.0


def test_h_kernel_matches_naive_summation():
    space = SpaceDescriptor.vector(1)
    k = lambda a, b: eval_kernel(GAUSSIAN, 0.8, [a], [b], space)  # noqa: E731
    l = lambda a, b: eval_kernel(LAPLACIAN, 1.5, [a], [b], space)  # noqa: E731
    rng = np.random.default_rng(6)
    z = [tuple(p) for p in rng.standard_normal((4, 2))]
    assert h_kernel_points(z, k, l) == pytest.approx(_naive_h(z, k, l), rel=1e-14)


def test_h_kernel_permutation_invariance():
    rng = np.random.default_rng(7)
    space = SpaceDescriptor.vector(1)
    k = lambda a, b: eval_kernel(GAUSSIAN, 1.0, [a], [b], space)  # noqa: E731
    z = [tuple(p) for p in rng.standard_normal((4, 2))]
    base = h_kernel_points(z, k, k)
    for _ in range(100):
        perm = rng.permutation(4)
        kx = np.array([[k(z[i][0], z[j][0]) for j in perm] for i in perm])
        ly = np.array([[k(z[i][1], z[j][1]) for j in perm] for i in perm])
        assert h_kernel(kx, ly) == pytest.approx(base, rel=1e-14, abs=1e-16)


# -- structural properties ---------------------------------------------------

def test_gaussian_translation_invariance_fixed_bandwidth():
    rng = np.random.default_rng(8)
    x = rng.standard_normal((80, 3))
    spec = KernelSpec("gaussian", 1.1)
    v0 = auto_hsic(ObjectSeries.vectors(x), spec, spec, 2).v
    v1 = auto_hsic(ObjectSeries.vectors(x + [4.0, -7.0, 0.5]), spec, spec, 2).v
    assert abs(v0 - v1) <= 1e-10


def test_median_gaussian_translation_invariance():
    rng = np.random.default_rng(18)
    x = rng.standard_normal((60, 2))
    v0 = auto_hsic(ObjectSeries.vectors(x), GAUSSIAN, GAUSSIAN, 1).v
    v1 = auto_hsic(ObjectSeries.vectors(x + 3.0), GAUSSIAN, GAUSSIAN, 1).v
    assert abs(v0 - v1) <= 1e-10


@pytest.mark.parametrize("c", [0.25, 3.0, 17.0])
def test_brownian_scaling(c):
    x = np.random.default_rng(9).standard_normal((70, 2))
    v0 = auto_hsic(ObjectSeries.vectors(x), BROWNIAN, BROWNIAN, 1).v
    v1 = auto_hsic(ObjectSeries.vectors(c * x), BROWNIAN, BROWNIAN, 1).v
    assert v1 == pytest.approx(c * c * v0, rel=1e-10)


def test_kernel_bilinearity():
    series = ObjectSeries.vectors(np.random.default_rng(19).standard_normal(40))
    grams = LagGrams(series, GAUSSIAN, LAPLACIAN)
    m = 1
    T = series.T
    v = grams.pair(m).statistic()
    a = u_center(2.5 * grams.K[m:, m:])
    b = u_center(-0.4 * grams.L[:T - m, :T - m])
    scaled = statistics.CenteredGramPair(m, a, b).statistic()
    assert scaled == pytest.approx(2.5 * -0.4 * v, rel=1e-12)


def test_v_can_be_negative():
    vals = [auto_hsic(ObjectSeries.vectors(np.random.default_rng(s).standard_normal(30)),
                      GAUSSIAN, GAUSSIAN, 1).v for s in range(20)]
    assert min(vals) < 0 < max(vals)


def test_consistency_direction():
    """V_1 grows toward a positive plateau under dependence, T V_1 stays bounded
    under independence."""
    means = {}
    for T in (50, 400):
        dep, ind = [], []
        for r in range(200):
            rng = np.random.default_rng([T, r])
            dep.append(auto_hsic(dgp_sample(ProductMA(1), T, rng),
                                 GAUSSIAN, GAUSSIAN, 1).v)
            ind.append(T * auto_hsic(dgp_sample(IIDNormal(1), T, rng),
                                     GAUSSIAN, GAUSSIAN, 1).v)
        means[T] = (np.mean(dep), np.mean(ind))
    assert means[400][0] > means[50][0] > 0
    assert abs(means[50][1]) < 0.1 and abs(means[400][1]) < 0.1


# -- self-check mutation -----------------------------------------------------

def test_verify_detects_wrong_u_centring_divisor(monkeypatch):
    def mutated(raw):
        a = np.array(raw, dtype=float)
        np.fill_diagonal(a, 0.0)
        n = a.shape[0]
        row, col = a.sum(1), a.sum(0)
        out = a - row[:, None] / (n - 1) - col[None, :] / (n - 1)
        out += row.sum() / ((n - 1) * (n - 2))
        np.fill_diagonal(out, 0.0)
        return out

    assert verify.check_oracle_grid().passed
    monkeypatch.setattr(statistics, "u_center", mutated)
    assert not verify.check_oracle_grid().passed
