"""Object spaces, distances, kernels and Gram matrices."""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from autohsic.errors import DegenerateBandwidth, MissingBandwidth, ShapeMismatch
from autohsic.spaces import (
    BROWNIAN,
    GAUSSIAN,
    LAPLACIAN,
    KernelSpec,
    ObjectSeries,
    SpaceDescriptor,
    distance,
    eval_kernel,
    gram_matrix,
    median_bandwidth,
    trapezoid_weights,
)

KERNELS = (GAUSSIAN, LAPLACIAN, BROWNIAN)


def _gamma(spec, value=1.3):
    return value if spec.needs_bandwidth else None


# -- distances ---------------------------------------------------------------

def test_euclidean_distance_pythagorean():
    assert distance(SpaceDescriptor.vector(2), [3, 4], [0, 0]) == 5.0


@pytest.mark.parametrize("space, x", [
    (SpaceDescriptor.vector(3), [1.0, -2.0, 0.5]),
    (SpaceDescriptor.matrix(2, 2), [[1.0, 2.0], [3.0, 4.0]]),
    (SpaceDescriptor.uniform_grid(11), np.linspace(0, 1, 11) ** 2),
])
def test_distance_to_self_is_zero(space, x):
    assert distance(space, x, x) == 0.0


def test_frobenius_distance():
    space = SpaceDescriptor.matrix(2, 2)
    x = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert distance(space, x, np.zeros((2, 2))) == pytest.approx(np.sqrt(30.0))


def test_functional_l2_norm_of_identity_curve():
    # the trapezoid rule on 1001 points approximates sqrt(int_0^1 t^2 dt)
    space = SpaceDescriptor.uniform_grid(1001)
    grid = np.linspace(0.0, 1.0, 1001)
    assert abs(distance(space, grid, np.zeros(1001)) - 1 / np.sqrt(3)) < 1e-6


def test_trapezoid_weights_non_uniform_grid():
    grid = np.array([0.0, 0.1, 0.5, 1.0])
    w = trapezoid_weights(grid)
    f = grid ** 3 - grid
    assert np.dot(w, f) == pytest.approx(np.trapezoid(f, grid)
                                         if hasattr(np, "trapezoid")
                                         else np.trapz(f, grid))


def test_distance_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        distance(SpaceDescriptor.vector(3), [1.0, 2.0], [0.0, 0.0])


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (2, 4), elements=st.floats(-1e3, 1e3)))
def test_distance_symmetric(xy):
    space = SpaceDescriptor.vector(4)
    assert distance(space, xy[0], xy[1]) == distance(space, xy[1], xy[0])


# -- bandwidth ---------------------------------------------------------------

def test_median_bandwidth_three_points():
    assert median_bandwidth(ObjectSeries.vectors([0.0, 1.0, 3.0])) == 2.0


def test_median_bandwidth_constant_series():
    with pytest.raises(DegenerateBandwidth):
        median_bandwidth(ObjectSeries.vectors([5.0, 5.0, 5.0, 5.0]))


def test_median_bandwidth_matches_sorted_pairs():
    x = np.random.default_rng(3).standard_normal(50)
    pairs = sorted(abs(a - b) for a, b in itertools.combinations(x, 2))
    n = len(pairs)
    brute = pairs[n // 2] if n % 2 else 0.5 * (pairs[n // 2 - 1] + pairs[n // 2])
    assert median_bandwidth(ObjectSeries.vectors(x)) == brute


def test_median_bandwidth_even_count_averages_middle_pair():
    # six distances (1, 1, 1, 2, 2, 3): mean of the two middle values
    x = [0.0, 1.0, 2.0, 3.0]
    assert median_bandwidth(ObjectSeries.vectors(x)) == 1.5


# -- kernels -----------------------------------------------------------------

def test_gaussian_at_zero_distance():
    assert eval_kernel(GAUSSIAN, 1.0, [0.3], [0.3],
                       SpaceDescriptor.vector(1)) == 1.0


def test_laplacian_value():
    v = eval_kernel(LAPLACIAN, 2.0, [0.0], [2.0], SpaceDescriptor.vector(1))
    assert v == pytest.approx(np.exp(-1.0), abs=1e-12)


def test_brownian_opposite_signs():
    assert eval_kernel(BROWNIAN, None, [3.0], [-4.0],
                       SpaceDescriptor.vector(1)) == 0.0


def test_missing_bandwidth():
    with pytest.raises(MissingBandwidth):
        eval_kernel(GAUSSIAN, None, [0.0], [1.0], SpaceDescriptor.vector(1))


def test_kernel_spec_rejects_bad_bandwidth():
    with pytest.raises(ValueError):
        KernelSpec("gaussian", -1.0)


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.label)
def test_kernel_symmetry_and_cauchy_schwarz(spec):
    rng = np.random.default_rng(11)
    space = SpaceDescriptor.vector(3)
    gamma = _gamma(spec)
    for _ in range(1000):
        x, y = rng.standard_normal((2, 3)) * rng.exponential(2.0)
        kxy = eval_kernel(spec, gamma, x, y, space)
        assert kxy == eval_kernel(spec, gamma, y, x, space)
        bound = np.sqrt(eval_kernel(spec, gamma, x, x, space)
                        * eval_kernel(spec, gamma, y, y, space))
        assert abs(kxy) <= bound * (1 + 1e-12) + 1e-12


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.label)
@pytest.mark.parametrize("space", ["vector", "matrix", "functional"])
def test_gram_psd(spec, space):
    rng = np.random.default_rng(5)
    if space == "vector":
        series = ObjectSeries.vectors(rng.standard_normal((50, 4)))
    elif space == "matrix":
        series = ObjectSeries.matrices(rng.standard_normal((50, 2, 3)))
    else:
        series = ObjectSeries.curves(np.cumsum(rng.standard_normal((50, 21)), 1))
    G = gram_matrix(spec, series)
    assert np.linalg.eigvalsh(G).min() >= -1e-8


def test_gram_matches_double_loop():
    rng = np.random.default_rng(2)
    series = ObjectSeries.vectors(rng.standard_normal((5, 2)))
    gamma = median_bandwidth(series)
    G = gram_matrix(GAUSSIAN, series)
    x = series.elements()
    ref = np.array([[eval_kernel(GAUSSIAN, gamma, a, b, series.space) for b in x]
                    for a in x])
    assert np.max(np.abs(G - ref)) == 0.0


def test_gram_matrix_points_symmetric():
    series = ObjectSeries.matrices(np.random.default_rng(8).standard_normal((20, 3, 3)))
    for spec in KERNELS:
        G = gram_matrix(spec, series)
        assert np.max(np.abs(G - G.T)) == 0.0


def test_gram_single_entry_range():
    series = ObjectSeries.vectors(np.random.default_rng(1).standard_normal((6, 2)))
    G = gram_matrix(GAUSSIAN, series, lo=2, hi=3)
    assert G.shape == (1, 1) and G[0, 0] == 1.0
    B = gram_matrix(BROWNIAN, series, lo=2, hi=3)
    assert B[0, 0] == pytest.approx(2 * np.linalg.norm(series.elements()[2]))


def test_gram_block_uses_full_series_bandwidth():
    x = np.random.default_rng(4).standard_normal((30, 1))
    series = ObjectSeries.vectors(x)
    full = gram_matrix(GAUSSIAN, series)
    block = gram_matrix(GAUSSIAN, series, lo=5, hi=20)
    assert np.array_equal(block, full[5:20, 5:20])


def test_gaussian_gram_translation_invariant():
    rng = np.random.default_rng(6)
    x = rng.standard_normal((40, 3))
    spec = KernelSpec("gaussian", 0.9)
    G0 = gram_matrix(spec, ObjectSeries.vectors(x))
    G1 = gram_matrix(spec, ObjectSeries.vectors(x + np.array([5.0, -2.0, 1.0])))
    assert np.max(np.abs(G0 - G1)) <= 1e-12


def test_gaussian_and_laplacian_diagonal_is_one():
    series = ObjectSeries.vectors(np.random.default_rng(0).standard_normal((10, 2)))
    for spec in (GAUSSIAN, LAPLACIAN):
        assert np.all(np.diag(gram_matrix(spec, series)) == 1.0)


def test_series_is_read_only():
    series = ObjectSeries.vectors(np.zeros((4, 2)))
    with pytest.raises(ValueError):
        series.data[0, 0] = 1.0
