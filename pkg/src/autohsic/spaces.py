"""
Observation spaces, kernels and Gram matrices.

Every observation is stored as a flat real block.  Distances are computed
through an isometric embedding: for Euclidean vectors and matrices (Frobenius
norm) the block is used as is, while curves sampled on a grid are multiplied
by the square roots of the composite-trapezoid weights, so that the ordinary
Euclidean distance of embedded blocks is the trapezoid approximation of the
L2[0, 1] distance between the curves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Literal, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .errors import DegenerateBandwidth, MissingBandwidth, ShapeMismatch

BANDWIDTH_FLOOR = 1e-12


class SpaceKind(str, Enum):
    VECTOR = "vector"
    MATRIX = "matrix"
    FUNCTIONAL = "functional"


@dataclass(frozen=True)
class SpaceDescriptor:
    """Metric space shared by all observations of a series.

    Use the :meth:`vector`, :meth:`matrix`, :meth:`functional` and
    :meth:`uniform_grid` constructors rather than the raw initializer.
    """

    kind: SpaceKind
    shape: tuple[int, ...]
    grid: tuple[float, ...] | None = None
    _sqrt_weights: np.ndarray | None = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        if any(int(s) < 1 for s in self.shape):
            raise ValueError(f"dimensions must be positive, got {self.shape}")
        if self.kind is SpaceKind.FUNCTIONAL:
            g = np.asarray(self.grid, dtype=float)
            if g.ndim != 1 or g.size < 2:
                raise ValueError("a functional grid needs at least 2 points")
            if g[0] != 0.0 or g[-1] != 1.0:
                raise ValueError("a functional grid must start at 0 and end at 1")
            if np.any(np.diff(g) <= 0):
                raise ValueError("grid abscissae must be strictly increasing")
            w = trapezoid_weights(g)
            sw = np.sqrt(w)
            sw.flags.writeable = False
            object.__setattr__(self, "_sqrt_weights", sw)

    @classmethod
    def vector(cls, d: int) -> "SpaceDescriptor":
        return cls(SpaceKind.VECTOR, (int(d),))

    @classmethod
    def matrix(cls, rows: int, cols: int) -> "SpaceDescriptor":
        return cls(SpaceKind.MATRIX, (int(rows), int(cols)))

    @classmethod
    def functional(cls, grid: Sequence[float]) -> "SpaceDescriptor":
        grid = tuple(float(g) for g in grid)
        return cls(SpaceKind.FUNCTIONAL, (len(grid),), grid)

    @classmethod
    def uniform_grid(cls, n_points: int) -> "SpaceDescriptor":
        return cls.functional(np.linspace(0.0, 1.0, int(n_points)))

    @property
    def size(self) -> int:
        """Length of the flat block holding one observation."""
        return int(np.prod(self.shape))

    def embed(self, blocks: np.ndarray) -> np.ndarray:
        """Map flat blocks (last axis of length ``size``) into plain R^size."""
        blocks = np.asarray(blocks, dtype=float)
        if blocks.shape[-1] != self.size:
            raise ShapeMismatch(
                f"block of length {blocks.shape[-1]} does not match space "
                f"element size {self.size}"
            )
        if self._sqrt_weights is None:
            return blocks
        return blocks * self._sqrt_weights

    def flatten(self, element) -> np.ndarray:
        """Flatten a single element (vector, matrix or curve) to its block."""
        arr = np.asarray(element, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if self.kind is SpaceKind.MATRIX and arr.shape == self.shape:
            return arr.reshape(-1)
        if arr.shape != (self.size,):
            raise ShapeMismatch(
                f"element of shape {arr.shape} does not conform to {self}"
            )
        return arr


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    """Composite trapezoid quadrature weights on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    h = np.diff(grid)
    w = np.zeros_like(grid)
    w[:-1] += h / 2
    w[1:] += h / 2
    return w


@dataclass(frozen=True)
class ObjectSeries:
    """A length-T series of observations in one metric space.

    ``data`` has shape ``(T, space.size)`` and is made read-only.
    """

    space: SpaceDescriptor
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=float, copy=True)
        if data.ndim == 1 and self.space.size == 1:
            data = data.reshape(-1, 1)
        elif data.ndim >= 2 and data.shape[0] > 0:
            data = data.reshape(data.shape[0], -1)
        if data.ndim != 2 or data.shape[1] != self.space.size:
            raise ShapeMismatch(
                f"data of shape {np.shape(self.data)} does not conform to "
                f"element size {self.space.size}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("series contains NaN or infinite entries")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def vectors(cls, x) -> "ObjectSeries":
        """Series in R^d from an array of shape (T,) or (T, d)."""
        x = np.asarray(x, dtype=float)
        d = 1 if x.ndim == 1 else x.shape[1]
        return cls(SpaceDescriptor.vector(d), x)

    @classmethod
    def matrices(cls, x) -> "ObjectSeries":
        """Series of matrices from an array of shape (T, rows, cols)."""
        x = np.asarray(x, dtype=float)
        return cls(SpaceDescriptor.matrix(x.shape[1], x.shape[2]), x)

    @classmethod
    def curves(cls, x, grid=None) -> "ObjectSeries":
        """Series of curves from an array of shape (T, n_points)."""
        x = np.asarray(x, dtype=float)
        if grid is None:
            space = SpaceDescriptor.uniform_grid(x.shape[1])
        else:
            space = SpaceDescriptor.functional(grid)
        return cls(space, x)

    @property
    def T(self) -> int:
        return self.data.shape[0]

    def __len__(self) -> int:
        return self.T

    def embedded(self) -> np.ndarray:
        return self.space.embed(self.data)

    def elements(self) -> np.ndarray:
        """Observations reshaped to their natural shape."""
        return self.data.reshape((self.T,) + self.space.shape)


class KernelFamily(str, Enum):
    GAUSSIAN = "gaussian"
    LAPLACIAN = "laplacian"
    BROWNIAN = "brownian"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus bandwidth policy.

    ``bandwidth`` is either ``"median"`` (median heuristic on the full series)
    or a fixed positive float.  It is ignored for the Brownian distance kernel.
    """

    family: KernelFamily
    bandwidth: Union[float, Literal["median"]] = "median"

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        if self.family is KernelFamily.BROWNIAN:
            object.__setattr__(self, "bandwidth", "median")
        elif self.bandwidth != "median":
            gamma = float(self.bandwidth)
            if not gamma > 0 or not np.isfinite(gamma):
                raise ValueError(f"fixed bandwidth must be positive, got {gamma}")
            object.__setattr__(self, "bandwidth", gamma)

    @property
    def needs_bandwidth(self) -> bool:
        return self.family is not KernelFamily.BROWNIAN

    @property
    def label(self) -> str:
        return {"gaussian": "GK", "laplacian": "LK", "brownian": "BDK"}[
            self.family.value
        ]


GAUSSIAN = KernelSpec(KernelFamily.GAUSSIAN)
LAPLACIAN = KernelSpec(KernelFamily.LAPLACIAN)
BROWNIAN = KernelSpec(KernelFamily.BROWNIAN)


def distance(space: SpaceDescriptor, x, y) -> float:
    """Distance between two elements of ``space``.

    Euclidean norm for vectors, Frobenius norm for matrices and the
    trapezoid-rule L2[0, 1] norm for curves on the space's grid.
    """
    ex = space.embed(space.flatten(x))
    ey = space.embed(space.flatten(y))
    # same routine as the Gram path, so both agree to the last bit
    return float(pdist(np.stack([ex, ey]), metric="euclidean")[0])


def pairwise_distances(series: ObjectSeries) -> np.ndarray:
    """Full symmetric T x T distance matrix with an exactly zero diagonal."""
    if series.T == 1:
        return np.zeros((1, 1))
    return squareform(pdist(series.embedded(), metric="euclidean"))


def median_bandwidth(series: ObjectSeries) -> float:
    """Median of the T(T-1)/2 pairwise distances."""
    if series.T < 2:
        raise ValueError("the median heuristic needs at least two observations")
    gamma = float(np.median(pdist(series.embedded(), metric="euclidean")))
    if gamma < BANDWIDTH_FLOOR:
        raise DegenerateBandwidth(
            f"median pairwise distance {gamma:.3g} is below {BANDWIDTH_FLOOR}"
        )
    return gamma


def resolve_bandwidth(spec: KernelSpec, series: ObjectSeries) -> float | None:
    """Bandwidth actually used for ``spec`` on ``series`` (None for Brownian)."""
    if not spec.needs_bandwidth:
        return None
    if spec.bandwidth == "median":
        return median_bandwidth(series)
    return float(spec.bandwidth)


def _kernel_values(spec, gamma, dist, norm_x=None, norm_y=None):
    if spec.family is KernelFamily.BROWNIAN:
        if gamma is not None:
            raise ValueError("the Brownian distance kernel takes no bandwidth")
        return norm_x + norm_y - dist
    if gamma is None:
        raise MissingBandwidth(f"{spec.family.value} kernel needs a bandwidth")
    if spec.family is KernelFamily.GAUSSIAN:
        return np.exp(-(dist**2) / (2.0 * gamma**2))
    return np.exp(-dist / gamma)


def eval_kernel(spec: KernelSpec, gamma: float | None, x, y,
                space: SpaceDescriptor) -> float:
    """Kernel value k(x, y) for a resolved bandwidth ``gamma``."""
    dist = distance(space, x, y)
    if spec.family is KernelFamily.BROWNIAN:
        zero = np.zeros(space.size)
        nx = distance(space, x, zero)
        ny = distance(space, y, zero)
        return float(_kernel_values(spec, gamma, dist, nx, ny))
    return float(_kernel_values(spec, gamma, dist))


def gram_from_distances(spec: KernelSpec, gamma: float | None,
                        dist: np.ndarray, norms: np.ndarray | None = None):
    """Gram matrix from a precomputed distance matrix.

    ``norms`` (distances of each point to the origin) is required for the
    Brownian distance kernel.
    """
    if spec.family is KernelFamily.BROWNIAN:
        if norms is None:
            raise ValueError("Brownian distance kernel needs the point norms")
        return _kernel_values(spec, gamma, dist, norms[:, None], norms[None, :])
    return _kernel_values(spec, gamma, dist)


def full_gram(spec: KernelSpec, series: ObjectSeries,
              gamma: float | None = None) -> tuple[np.ndarray, float | None]:
    """Gram matrix over all T observations and the bandwidth it used."""
    if gamma is None:
        gamma = resolve_bandwidth(spec, series)
    dist = pairwise_distances(series)
    norms = None
    if spec.family is KernelFamily.BROWNIAN:
        emb = series.embedded()
        norms = cdist(emb, np.zeros((1, emb.shape[1])), metric="euclidean")[:, 0]
    return gram_from_distances(spec, gamma, dist, norms), gamma


def gram_matrix(spec: KernelSpec, series: ObjectSeries, lo: int = 0,
                hi: int | None = None, gamma: float | None = None) -> np.ndarray:
    """Raw Gram block k(X_i, X_j) for ``lo <= i, j < hi``.

    The bandwidth is resolved once from the full series (not the block) unless
    given explicitly, so blocks for different lags share it.
    """
    hi = series.T if hi is None else hi
    if not 0 <= lo < hi <= series.T:
        raise ValueError(f"invalid index range [{lo}, {hi}) for T={series.T}")
    if gamma is None:
        gamma = resolve_bandwidth(spec, series)
    block = ObjectSeries(series.space, series.data[lo:hi])
    return full_gram(spec, block, gamma)[0]
