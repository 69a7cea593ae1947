"""
End-to-end self-check of the numerical core.

Runs the oracle equivalence grid, U-centring identities, kernel positive
semidefiniteness and the wild-bootstrap conditional-mean check.  Every check
reports the inputs of its first failing case.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import statistics
from ._rng import substream
from .bootstrap import lag_replicates
from .spaces import BROWNIAN, GAUSSIAN, LAPLACIAN, ObjectSeries, full_gram

KERNELS = (GAUSSIAN, LAPLACIAN, BROWNIAN)
VERIFY_SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" -- {self.detail}" if self.detail else ""
        return f"{status} {self.name} ({self.cases} cases){tail}"


def check_oracle_grid(seed: int = VERIFY_SEED) -> CheckResult:
    """Fast estimator vs brute-force U-statistic on small samples."""
    cases = 0
    for dim in (1, 3):
        for T in (8, 10, 12, 14):
            rng = substream(seed, 1, dim, T)
            series = ObjectSeries.vectors(rng.standard_normal((T, dim)))
            for m in (1, 2, 3):
                for k in KERNELS:
                    cases += 1
                    fast = statistics.auto_hsic(series, k, k, m).v
                    slow = statistics.auto_hsic_ustat_oracle(series, k, k, m)
                    if not abs(fast - slow) <= 1e-9 * (1.0 + abs(slow)):
                        return CheckResult(
                            "oracle-equivalence", False, cases,
                            f"T={T} m={m} dim={dim} kernel={k.family.value}: "
                            f"centred={fast!r} ustat={slow!r}")
    return CheckResult("oracle-equivalence", True, cases)


def check_u_centering(seed: int = VERIFY_SEED, count: int = 100) -> CheckResult:
    """Zero diagonal and vanishing row/column sums of U-centred blocks."""
    rng = substream(seed, 2)
    for case in range(1, count + 1):
        n = int(rng.integers(4, 51))
        x = ObjectSeries.vectors(rng.standard_normal((n, 2)))
        k = KERNELS[case % 3]
        raw, _ = full_gram(k, x)
        a = statistics.u_center(raw)
        scale = 1e-9 * n * max(np.max(np.abs(a)), 1e-300)
        bad = (np.any(np.diag(a) != 0.0)
               or np.max(np.abs(a.sum(axis=0))) > scale
               or np.max(np.abs(a.sum(axis=1))) > scale)
        if bad:
            return CheckResult("u-centring", False, case,
                               f"n={n} kernel={k.family.value} case={case}")
    return CheckResult("u-centring", True, count)


def check_kernel_psd(seed: int = VERIFY_SEED) -> CheckResult:
    """Smallest Gram eigenvalue >= -1e-8 for 50 random points per kernel."""
    cases = 0
    for i, k in enumerate(KERNELS):
        for dim in (1, 4):
            cases += 1
            rng = substream(seed, 3, i, dim)
            x = ObjectSeries.vectors(rng.standard_normal((50, dim)))
            G, _ = full_gram(k, x)
            low = float(np.linalg.eigvalsh(G)[0])
            if low < -1e-8:
                return CheckResult("kernel-psd", False, cases,
                                   f"kernel={k.family.value} dim={dim} "
                                   f"min eigenvalue={low!r}")
    return CheckResult("kernel-psd", True, cases)


def check_bootstrap_mean(seed: int = VERIFY_SEED, B: int = 10_000) -> CheckResult:
    """Average of B wild-bootstrap replicates within 3 standard errors of 0."""
    rng = substream(seed, 4)
    x = ObjectSeries.vectors(rng.standard_normal((60, 2)))
    pair = statistics.centered_pair(x, GAUSSIAN, GAUSSIAN, 1)
    reps = lag_replicates(pair, seed, B)
    mean, se = reps.mean(), reps.std(ddof=1) / np.sqrt(B)
    ok = abs(mean) <= 3 * se
    return CheckResult("bootstrap-mean-zero", bool(ok), 1,
                       "" if ok else f"T=60 B={B} mean={mean!r} se={se!r}")


CHECKS = (check_oracle_grid, check_u_centering, check_kernel_psd,
          check_bootstrap_mean)


def run_verification() -> list[CheckResult]:
    return [check() for check in CHECKS]
