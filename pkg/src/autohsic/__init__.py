"""Kernel-based (AutoHSIC) tests of serial independence for object-valued time series."""
from .bootstrap import (
    BootstrapConfig,
    TestReport,
    TestResult,
    bootstrap_statistic_once,
    draw_weights,
    wild_bootstrap_test,
)
from .diagnostics import (
    ConstantVariance,
    DiagnosticReport,
    Garch11,
    Garch11Params,
    garch11_filter,
    garch11_qmle,
    garch11_residuals,
    garch11_simulate,
    residual_bootstrap_test,
    standardize_residuals,
)
from .errors import (
    AutoHSICError,
    ConfigError,
    DegenerateBandwidth,
    DegenerateResiduals,
    EstimationFailed,
    MissingBandwidth,
    NonPositiveVariance,
    NumericalBlowup,
    OracleTooLarge,
    ShapeMismatch,
    TooShort,
)
from .spaces import (
    BROWNIAN,
    GAUSSIAN,
    LAPLACIAN,
    KernelFamily,
    KernelSpec,
    ObjectSeries,
    SpaceDescriptor,
    distance,
    eval_kernel,
    gram_matrix,
    median_bandwidth,
)
from .statistics import (
    CenteredGramPair,
    LagStatistic,
    PortmanteauStatistic,
    auto_hsic,
    auto_hsic_ustat_oracle,
    h_kernel,
    portmanteau,
    u_center,
)

__version__ = "0.1.0"
