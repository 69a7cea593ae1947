"""
Data-generating processes for the Monte Carlo studies.

Each process is a frozen dataclass with a ``sample(T, rng)`` method returning
an :class:`~autohsic.spaces.ObjectSeries`; :func:`dgp_sample` is the
functional entry point.  Recursive processes discard a burn-in of
``BURN_IN`` steps.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import ClassVar, Union

import numpy as np

from ..errors import NumericalBlowup
from ..spaces import ObjectSeries, SpaceDescriptor, trapezoid_weights

BURN_IN = 200
BLOWUP = 1e12
DEFAULT_GRID_POINTS = 101


@lru_cache(maxsize=None)
def sigma_factor(d: int) -> np.ndarray:
    """Lower Cholesky factor of Sigma_ij = 0.5^|i-j|."""
    idx = np.arange(d)
    sigma = 0.5 ** np.abs(idx[:, None] - idx[None, :])
    L = np.linalg.cholesky(sigma)
    L.flags.writeable = False
    return L


def mvn_sample(rng: np.random.Generator, d: int, factor: np.ndarray,
               size: int | None = None) -> np.ndarray:
    """N_d(0, L L') draws; shape (d,) or (size, d)."""
    shape = (d,) if size is None else (size, d)
    z = rng.standard_normal(shape)
    return z @ factor.T


def mvt_sample(rng: np.random.Generator, d: int, nu: float,
               factor: np.ndarray, size: int | None = None) -> np.ndarray:
    """Multivariate t with scale matrix L L', as a normal scale mixture."""
    if not nu > 0:
        raise ValueError(f"degrees of freedom must be positive, got {nu}")
    z = mvn_sample(rng, d, factor, size)
    w = rng.chisquare(nu, size=None if size is None else (size, 1))
    return z / np.sqrt(w / nu)


def brownian_path(rng: np.random.Generator, grid, size: int | None = None):
    """Standard Brownian motion on ``grid`` (B(0) = 0 when grid[0] = 0)."""
    grid = np.asarray(grid, dtype=float)
    steps = np.sqrt(np.diff(grid))
    shape = (grid.size - 1,) if size is None else (size, grid.size - 1)
    inc = rng.standard_normal(shape) * steps
    path = np.zeros(shape[:-1] + (grid.size,))
    path[..., 1:] = np.cumsum(inc, axis=-1)
    return path


@dataclass(frozen=True)
class Innovation:
    """Innovation law: ``"normal"`` or ``"t"`` with ``df`` degrees of freedom."""

    kind: str = "normal"
    df: float | None = None

    def __post_init__(self):
        if self.kind not in ("normal", "t"):
            raise ValueError(f"unknown innovation law {self.kind!r}")
        if self.kind == "t" and not (self.df and self.df > 0):
            raise ValueError("Student t innovations need df > 0")

    def draw(self, rng, d: int, size: int) -> np.ndarray:
        factor = sigma_factor(d)
        if self.kind == "normal":
            return mvn_sample(rng, d, factor, size)
        return mvt_sample(rng, d, self.df, factor, size)

    @property
    def label(self) -> str:
        return "N" if self.kind == "normal" else f"t{self.df:g}"


NORMAL = Innovation()


def _check_finite(arr, what: str):
    if not np.all(np.isfinite(arr)) or np.max(np.abs(arr)) > BLOWUP:
        raise NumericalBlowup(f"{what} exceeded {BLOWUP:g} in magnitude")


@dataclass(frozen=True)
class IIDNormal:
    """X_t i.i.d. N_d(0, Sigma)."""

    d: int = 1
    name: ClassVar[str] = "iid-normal"

    def sample(self, T: int, rng) -> ObjectSeries:
        return ObjectSeries.vectors(NORMAL.draw(rng, self.d, T))


@dataclass(frozen=True)
class IIDStudentT:
    """X_t i.i.d. t_nu(Sigma)."""

    d: int = 1
    nu: float = 2.0
    name: ClassVar[str] = "iid-t"

    def sample(self, T: int, rng) -> ObjectSeries:
        return ObjectSeries.vectors(Innovation("t", self.nu).draw(rng, self.d, T))


@dataclass(frozen=True)
class ProductMA:
    """X_t = eta_t * eta_{t-1} * eta_{t-2} (componentwise)."""

    d: int = 1
    innovation: Innovation = NORMAL
    name: ClassVar[str] = "product-ma"

    def sample(self, T: int, rng) -> ObjectSeries:
        eta = self.innovation.draw(rng, self.d, T + 2)
        return ObjectSeries.vectors(eta[2:] * eta[1:-1] * eta[:-2])


@dataclass(frozen=True)
class VAR1:
    """X_t = rho X_{t-1} + eta_t."""

    d: int = 1
    rho: float = 0.3
    innovation: Innovation = NORMAL
    name: ClassVar[str] = "var1"

    def sample(self, T: int, rng) -> ObjectSeries:
        eta = self.innovation.draw(rng, self.d, T + BURN_IN)
        x = np.empty_like(eta)
        prev = np.zeros(self.d)
        for t in range(eta.shape[0]):
            prev = self.rho * prev + eta[t]
            x[t] = prev
        _check_finite(x, "VAR(1) state")
        return ObjectSeries.vectors(x[BURN_IN:])


@dataclass(frozen=True)
class ComponentGARCH:
    """X_t = eta_t * sigma_t with componentwise GARCH(1,1) variances."""

    d: int = 1
    innovation: Innovation = NORMAL
    omega: float = 0.1
    alpha: float = 0.6
    beta: float = 0.2
    name: ClassVar[str] = "component-garch"

    def sample(self, T: int, rng) -> ObjectSeries:
        eta = self.innovation.draw(rng, self.d, T + BURN_IN)
        x = np.empty_like(eta)
        s2 = np.full(self.d, self.omega / (1.0 - self.alpha - self.beta))
        prev = np.zeros(self.d)
        for t in range(eta.shape[0]):
            s2 = self.omega + self.alpha * prev**2 + self.beta * s2
            prev = eta[t] * np.sqrt(s2)
            x[t] = prev
        _check_finite(x, "GARCH state")
        return ObjectSeries.vectors(x[BURN_IN:])


@dataclass(frozen=True)
class FunctionalIID:
    """X_t(tau) = eta_t(tau), i.i.d. Brownian motions."""

    grid_points: int = DEFAULT_GRID_POINTS
    name: ClassVar[str] = "functional-iid"

    @property
    def d(self) -> int:
        return self.grid_points

    def sample(self, T: int, rng) -> ObjectSeries:
        space = SpaceDescriptor.uniform_grid(self.grid_points)
        return ObjectSeries(space, brownian_path(rng, space.grid, T))


@dataclass(frozen=True)
class FunctionalARCH:
    """X_t(tau) = sigma_t(tau) eta_t(tau) with

    sigma_t^2(tau) = tau + 0.6 exp(tau^2/2) int exp(s^2/2) X_{t-1}^2(s) ds,

    the integral evaluated by the trapezoid rule and X_0 = 0.
    """

    grid_points: int = DEFAULT_GRID_POINTS
    coefficient: float = 0.6
    name: ClassVar[str] = "functional-arch"

    @property
    def d(self) -> int:
        return self.grid_points

    def sample(self, T: int, rng) -> ObjectSeries:
        space = SpaceDescriptor.uniform_grid(self.grid_points)
        tau = np.asarray(space.grid)
        half = np.exp(tau**2 / 2.0)
        w = trapezoid_weights(tau) * half
        eta = brownian_path(rng, tau, T + BURN_IN)
        x = np.empty_like(eta)
        prev = np.zeros_like(tau)
        for t in range(eta.shape[0]):
            s2 = tau + self.coefficient * half * np.dot(w, prev**2)
            prev = np.sqrt(s2) * eta[t]
            x[t] = prev
        _check_finite(x, "functional ARCH state")
        return ObjectSeries(space, x[BURN_IN:])


@dataclass(frozen=True)
class FunctionalProductMA:
    """X_t(tau) = eta_t(tau) eta_{t-1}(tau)."""

    grid_points: int = DEFAULT_GRID_POINTS
    name: ClassVar[str] = "functional-product-ma"

    @property
    def d(self) -> int:
        return self.grid_points

    def sample(self, T: int, rng) -> ObjectSeries:
        space = SpaceDescriptor.uniform_grid(self.grid_points)
        eta = brownian_path(rng, space.grid, T + 1)
        return ObjectSeries(space, eta[1:] * eta[:-1])


def _psd_sqrt(S: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(S)
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.T


def matrix_garch_intercept(d: int) -> np.ndarray:
    """Lower-triangular A0 = B0: 1 at (0, 0), 0.4 elsewhere on and below the diagonal."""
    A = np.tril(np.full((d, d), 0.4))
    A[0, 0] = 1.0
    return A


@dataclass(frozen=True)
class MatrixGarch:
    """Matrix GARCH X_t = U_t^{1/2} eta_t V_t^{1/2}.

    U_t = y_t S1_t / tr(S1_t), V_t = S2_t / tr(S2_t), with
    y_t = omega + c tr(X X') + beta y_{t-1},
    S1_t = A0 A0' + c^2 X X' + 0.36 S1_{t-1},
    S2_t = B0 B0' + c^2 X' X + 0.36 S2_{t-1}  (X = X_{t-1}),
    started at the c = 0 fixed point.
    """

    d: int = 2
    c: float = 0.0
    omega: float = 0.4
    beta: float = 0.6
    a2: float = 0.6
    name: ClassVar[str] = "matrix-garch"

    def sample(self, T: int, rng, check_traces: bool = True) -> ObjectSeries:
        d, c = self.d, self.c
        A0 = matrix_garch_intercept(d)
        base = A0 @ A0.T
        S1 = base / (1.0 - self.a2**2)
        S2 = S1.copy()
        y = self.omega / (1.0 - self.beta)
        X = np.zeros((d, d))
        eta = rng.standard_normal((T + BURN_IN, d, d))
        out = np.empty_like(eta)
        for t in range(T + BURN_IN):
            XXt, XtX = X @ X.T, X.T @ X
            y = self.omega + c * np.trace(XXt) + self.beta * y
            S1 = base + c * c * XXt + self.a2**2 * S1
            S2 = base + c * c * XtX + self.a2**2 * S2
            U = S1 / np.trace(S1) * y
            V = S2 / np.trace(S2)
            if check_traces:
                if abs(np.trace(V) - 1.0) > 1e-10 or abs(np.trace(U) - y) > 1e-8 * y:
                    raise NumericalBlowup("matrix GARCH trace normalization lost")
            X = _psd_sqrt(U) @ eta[t] @ _psd_sqrt(V)
            if not abs(y) < BLOWUP:
                raise NumericalBlowup("matrix GARCH scale exceeded bound")
            out[t] = X
        _check_finite(out, "matrix GARCH state")
        return ObjectSeries.matrices(out[BURN_IN:])


@dataclass(frozen=True)
class GarchEgp:
    """Scalar GARCH(1,1) driven by one of three error processes.

    egp=1: N(0, 1); egp=2: t_4; egp=3: e_t e_{t-1} e_{t-2} with e_t ~ N(0, 1).
    """

    egp: int = 1
    omega: float = 0.2
    alpha: float = 0.1
    beta: float = 0.5
    name: ClassVar[str] = "garch-egp"

    def __post_init__(self):
        if self.egp not in (1, 2, 3):
            raise ValueError(f"egp must be 1, 2 or 3, got {self.egp}")

    @property
    def d(self) -> int:
        return 1

    def innovations(self, n: int, rng) -> np.ndarray:
        if self.egp == 1:
            return rng.standard_normal(n)
        if self.egp == 2:
            return rng.standard_t(4.0, n)
        e = rng.standard_normal(n + 2)
        return e[2:] * e[1:-1] * e[:-2]

    def sample(self, T: int, rng) -> ObjectSeries:
        from ..diagnostics import Garch11Params, garch11_simulate

        params = Garch11Params(self.omega, self.alpha, self.beta)
        x = garch11_simulate(params, self.innovations(T + BURN_IN, rng), BURN_IN)
        _check_finite(x, "GARCH state")
        return ObjectSeries.vectors(x)


DgpSpec = Union[IIDNormal, IIDStudentT, ProductMA, VAR1, ComponentGARCH,
                FunctionalIID, FunctionalARCH, FunctionalProductMA,
                MatrixGarch, GarchEgp]

DGP_TYPES = {cls.name: cls for cls in DgpSpec.__args__}


def dgp_sample(spec: DgpSpec, T: int, rng: np.random.Generator) -> ObjectSeries:
    """Draw a length-T series from ``spec``."""
    if T < 10:
        raise ValueError(f"simulated series need T >= 10, got {T}")
    return spec.sample(T, rng)


def describe(spec: DgpSpec) -> str:
    """Compact label, e.g. ``product-ma(d=1,innovation=N)``."""
    parts = []
    for key, value in vars(spec).items():
        if isinstance(value, Innovation):
            value = value.label
        parts.append(f"{key}={value:g}" if isinstance(value, float)
                     else f"{key}={value}")
    return f"{spec.name}({','.join(parts)})"
