"""
Regenerate the sample series files in ``demos/data``.

Every file comes from a pinned seed, so rerunning this script reproduces the
shipped files byte for byte.  The files double as inputs for the CLI
walkthrough in the README and for the CLI tests.
"""
from pathlib import Path

import numpy as np

from autohsic.io import write_series
from autohsic.simulation import (
    FunctionalIID,
    GarchEgp,
    IIDNormal,
    MatrixGarch,
    ProductMA,
    dgp_sample,
)

DATA = Path(__file__).resolve().parent / "data"

SAMPLES = {
    # nonlinear moving average: uncorrelated but dependent, d = 1
    "product_ma_T100.txt": (ProductMA(1), 100, 20240101),
    # independent Gaussian 3-vectors
    "iid_normal_d3_T150.txt": (IIDNormal(3), 150, 20240102),
    # GARCH(1,1) with Gaussian errors, a correctly specified model
    "garch_egp1_T200.txt": (GarchEgp(1), 200, 20240103),
    # GARCH(1,1) driven by dependent product errors, a misspecified model
    "garch_egp3_T400.txt": (GarchEgp(3), 400, 20240104),
    # 2 x 2 matrix GARCH with dynamics switched on
    "matrix_garch_c03_T200.txt": (MatrixGarch(2, 0.3), 200, 20240105),
    # Brownian-motion curves on a 51-point grid
    "functional_iid_T100.txt": (FunctionalIID(51), 100, 20240106),
}


def main():
    DATA.mkdir(exist_ok=True)
    for name, (spec, T, seed) in SAMPLES.items():
        series = dgp_sample(spec, T, np.random.default_rng(seed))
        write_series(DATA / name, series)
        print(f"wrote {name}: T={series.T}, {series.space.kind.value} "
              f"of size {series.space.size}")


if __name__ == "__main__":
    main()
