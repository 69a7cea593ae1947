"""Named experiment grids matching the published simulation tables."""
from __future__ import annotations

from typing import Callable

from .._rng import derive_seed
from ..spaces import BROWNIAN, GAUSSIAN, LAPLACIAN
from .dgp import (
    VAR1,
    ComponentGARCH,
    FunctionalARCH,
    FunctionalIID,
    FunctionalProductMA,
    GarchEgp,
    IIDNormal,
    IIDStudentT,
    Innovation,
    MatrixGarch,
    ProductMA,
)
from .experiment import ExperimentConfig

ALL_KERNELS = (LAPLACIAN, GAUSSIAN, BROWNIAN)
DIMENSIONS = (1, 5, 10, 20, 40, 80, 160)
HEAVY = Innovation("t", 2.0)


def _vector_grid(make, innovations=(None,)):
    return [(make(d, inn) if inn is not None else make(d), T)
            for T in (100, 200) for inn in innovations for d in DIMENSIONS]


_GRIDS: dict[str, Callable[[int], list]] = {
    "table1": lambda grid_points: [
        (cls(grid_points), T)
        for cls in (FunctionalIID, FunctionalARCH, FunctionalProductMA)
        for T in (100, 200)
    ],
    "table2": lambda _: [(MatrixGarch(d, c), 200)
                         for c in (0.0, 0.2, 0.3) for d in (2, 5, 8)],
    "supp-table5": lambda _: [(GarchEgp(e), T)
                              for e in (1, 2, 3) for T in (200, 400)],
    "supp-table6": lambda _: _vector_grid(IIDNormal),
    "supp-table7": lambda _: [(IIDStudentT(d, nu), T) for T in (100, 200)
                              for nu in (2.0, 1.0) for d in DIMENSIONS],
    "supp-table8": lambda _: _vector_grid(ProductMA, (Innovation(), HEAVY)),
    "supp-table9": lambda _: _vector_grid(ComponentGARCH, (Innovation(), HEAVY)),
    "supp-table10": lambda _: _vector_grid(
        lambda d, inn: VAR1(d, 0.3, inn), (Innovation(), HEAVY)),
    "supp-table11": lambda _: [(MatrixGarch(d, c), 100)
                               for c in (0.0, 0.2, 0.3) for d in (2, 5, 8)],
}

PRESETS = tuple(_GRIDS)


def preset(name: str, R: int = 1000, B: int = 500, seed: int = 0,
           workers: int = 1, grid_points: int = 101,
           kernels=ALL_KERNELS) -> list[ExperimentConfig]:
    """Experiment configs for every cell of a published table.

    Defaults follow the published protocol (1000 replications, 500 bootstrap
    draws); pass smaller ``R`` and ``B`` for desk-scale runs.  Each cell gets
    its own seed derived from ``seed`` and the cell index.
    """
    if name not in _GRIDS:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return [
        ExperimentConfig(dgp, T, R=R, B=B, lags=(1, 3), portmanteau=(3, 6),
                         kernels=tuple(kernels),
                         seed=derive_seed(seed, i), workers=workers)
        for i, (dgp, T) in enumerate(_GRIDS[name](grid_points))
    ]
