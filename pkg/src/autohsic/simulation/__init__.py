"""Data-generating processes, Monte Carlo experiments and table presets."""
from .dgp import (
    VAR1,
    ComponentGARCH,
    DgpSpec,
    FunctionalARCH,
    FunctionalIID,
    FunctionalProductMA,
    GarchEgp,
    IIDNormal,
    IIDStudentT,
    Innovation,
    MatrixGarch,
    ProductMA,
    brownian_path,
    dgp_sample,
    mvn_sample,
    mvt_sample,
    sigma_factor,
)
from .experiment import (
    ExperimentConfig,
    RejectionRow,
    RejectionTable,
    run_experiment,
    run_experiments,
)
from .presets import PRESETS, preset
