"""
Seeded Monte Carlo rejection-rate experiments.

Replication r draws its series from substream (seed, r, 0) and its bootstrap
weights or resamples from a child seed of (seed, r, 1), so the resulting
table is bit-identical for any number of workers.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from .._parallel import ordered_map
from .._rng import derive_seed, substream
from ..bootstrap import BootstrapConfig, critical_value, wild_bootstrap_replicates
from ..diagnostics import MODELS, residual_bootstrap_core
from ..errors import AutoHSICError
from ..spaces import GAUSSIAN, KernelSpec
from ..statistics import LagGrams
from .dgp import DgpSpec, GarchEgp, describe, dgp_sample

logger = logging.getLogger(__name__)

MAX_FAILURE_FRACTION = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    """One table cell group: a DGP at one T, several kernels and statistics.

    ``procedure`` is ``"wild"`` (Algorithm-1 style calibration of the raw
    series) or ``"residual"`` (GARCH(1,1) residual bootstrap); ``"auto"``
    picks ``"residual"`` for :class:`GarchEgp` and ``"wild"`` otherwise.
    """

    dgp: DgpSpec
    T: int
    R: int = 1000
    B: int = 500
    alpha: float = 0.05
    lags: tuple[int, ...] = (1, 3)
    portmanteau: tuple[int, ...] = (3, 6)
    kernels: tuple[KernelSpec, ...] = (GAUSSIAN,)
    seed: int = 0
    workers: int = 1
    procedure: str = "auto"
    model: str = "garch11"

    def __post_init__(self):
        if self.R < 1 or self.B < 1:
            raise ValueError("R and B must be >= 1")
        if not self.lags and not self.portmanteau:
            raise ValueError("at least one lag or portmanteau order is required")
        if self.procedure not in ("auto", "wild", "residual"):
            raise ValueError(f"unknown procedure {self.procedure!r}")
        object.__setattr__(self, "lags", tuple(int(m) for m in self.lags))
        object.__setattr__(self, "portmanteau",
                           tuple(int(m) for m in self.portmanteau))
        object.__setattr__(self, "kernels", tuple(self.kernels))

    @property
    def max_lag(self) -> int:
        return max(self.lags + self.portmanteau)

    @property
    def resolved_procedure(self) -> str:
        if self.procedure != "auto":
            return self.procedure
        return "residual" if isinstance(self.dgp, GarchEgp) else "wild"

    def cells(self) -> list[tuple[str, str, int]]:
        """(kernel label, statistic, lag-or-order) in output order."""
        out = []
        for k in self.kernels:
            out += [(k.label, "V", m) for m in self.lags]
            out += [(k.label, "P", M) for M in self.portmanteau]
        return out


@dataclass(frozen=True)
class RejectionRow:
    kernel: str
    statistic: str
    lag: int
    rejection_pct: float
    se_pct: float


@dataclass(frozen=True)
class RejectionTable:
    config: ExperimentConfig
    rows: tuple[RejectionRow, ...]
    completed: int
    failures: int = 0
    failure_messages: tuple[str, ...] = field(default=(), repr=False)

    def row(self, kernel: str, statistic: str, lag: int) -> RejectionRow:
        for r in self.rows:
            if (r.kernel, r.statistic, r.lag) == (kernel, statistic, lag):
                return r
        raise KeyError((kernel, statistic, lag))

    def rate(self, kernel: str, statistic: str, lag: int) -> float:
        return self.row(kernel, statistic, lag).rejection_pct

    def records(self) -> list[dict]:
        cfg = self.config
        base = {"dgp": describe(cfg.dgp), "T": cfg.T, "d": cfg.dgp.d,
                "R": self.completed, "B": cfg.B, "seed": cfg.seed}
        return [dict(base, kernel=r.kernel, statistic=f"{r.statistic}_{r.lag}",
                     lag=r.lag, rejection_pct=r.rejection_pct, se_pct=r.se_pct)
                for r in self.rows]

    def to_records(self) -> str:
        return "".join(json.dumps(rec, sort_keys=True) + "\n"
                       for rec in self.records())

    def to_text(self) -> str:
        cfg = self.config
        head = (f"{describe(cfg.dgp)}  T={cfg.T}  R={self.completed}  "
                f"B={cfg.B}  seed={cfg.seed}")
        lines = [head]
        labels = []
        for k in cfg.kernels:
            if k.label not in labels:
                labels.append(k.label)
        stats = [("V", m) for m in cfg.lags] + [("P", M) for M in cfg.portmanteau]
        lines.append("kernel " + "".join(f"{s}_{m:<11d}" for s, m in stats))
        for label in labels:
            cells = [self.row(label, s, m) for s, m in stats]
            lines.append(f"{label:<6} " + "".join(
                f"{c.rejection_pct:5.1f} ({c.se_pct:3.1f}) " for c in cells))
        return "\n".join(lines) + "\n"


def _decisions(stats: dict[int, tuple[float, np.ndarray]], cfg: ExperimentConfig,
               T: int) -> list[bool]:
    out = []
    for m in cfg.lags:
        v, reps = stats[m]
        out.append(T * v > critical_value(T * reps, cfg.alpha))
    for M in cfg.portmanteau:
        p = sum(stats[m][0] for m in range(1, M + 1))
        reps = np.sum([stats[m][1] for m in range(1, M + 1)], axis=0)
        out.append(T * p > critical_value(T * reps, cfg.alpha))
    return out


def run_replicate(r: int, cfg: ExperimentConfig) -> list[bool] | str:
    """Reject flags for replication ``r`` in :meth:`ExperimentConfig.cells` order.

    Returns an error message instead when the replicate fails.
    """
    try:
        series = dgp_sample(cfg.dgp, cfg.T, substream(cfg.seed, r, 0))
        boot_seed = derive_seed(cfg.seed, r, 1)
        lags = range(1, cfg.max_lag + 1)
        flags = []
        if cfg.resolved_procedure == "wild":
            for k in cfg.kernels:
                grams = LagGrams(series, k, k)
                stats = wild_bootstrap_replicates(grams, lags, boot_seed, cfg.B)
                flags += _decisions(stats, cfg, series.T)
        else:
            bcfg = BootstrapConfig(B=cfg.B, alpha=cfg.alpha, seed=boot_seed)
            per_kernel = residual_bootstrap_core(
                series, MODELS[cfg.model](), [(k, k) for k in cfg.kernels],
                cfg.max_lag, bcfg)
            for observed, reps in per_kernel:
                stats = {m: (observed[m - 1], reps[:, m - 1]) for m in lags}
                flags += _decisions(stats, cfg, series.T)
        return flags
    except AutoHSICError as exc:
        return f"replicate {r}: {type(exc).__name__}: {exc}"


def run_experiment(cfg: ExperimentConfig) -> RejectionTable:
    """Rejection percentages and Monte Carlo standard errors for every cell."""
    results = ordered_map(partial(run_replicate, cfg=cfg),
                          range(1, cfg.R + 1), cfg.workers)
    failed = [res for res in results if isinstance(res, str)]
    good = [res for res in results if not isinstance(res, str)]
    if len(failed) > MAX_FAILURE_FRACTION * cfg.R:
        raise AutoHSICError(
            f"{len(failed)} of {cfg.R} replicates failed; first: {failed[0]}")
    for msg in failed:
        logger.warning(msg)
    n = len(good)
    counts = np.sum(np.array(good, dtype=int), axis=0) if n else None
    rows = []
    for i, (label, stat, lag) in enumerate(cfg.cells()):
        p = counts[i] / n
        rows.append(RejectionRow(label, stat, lag, 100.0 * p,
                                 100.0 * math.sqrt(p * (1.0 - p) / n)))
    return RejectionTable(cfg, tuple(rows), n, len(failed), tuple(failed))


def run_experiments(configs: Sequence[ExperimentConfig]) -> list[RejectionTable]:
    return [run_experiment(cfg) for cfg in configs]
