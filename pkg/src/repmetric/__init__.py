"""Uniform Kernel Prober (UKP) distance between representations, with GULP,
kernel ridge-CCA, CKA and CCA, low-rank approximations and analysis tools."""

from .approx import ApproxConfig, LowRankFactor, exact_factor, nystrom_map, rff_map, ukp_lowrank
from .errors import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    NotPSDError,
    NumericError,
    NumericWarning,
    RepMetricError,
    UndefinedCorrelationError,
)
from .kernels import (
    KernelFamily,
    KernelSpec,
    Representation,
    center_gram,
    cross_gram,
    eval_kernel,
    gram_matrix,
)
from .metrics import (
    Metric,
    MetricConfig,
    MetricValue,
    cca,
    cka,
    gulp_primal,
    rcca,
    ukp,
    ukp_eigenform,
)
from .spectral import SymmetricEigen, hat_matrix, sym_eig, trace_product

__version__ = "0.1.0"
