"""netgof: spectral goodness-of-fit testing for random-graph models.

Fit any of six random-graph families to an undirected, unweighted
network, standardize the residuals entrywise, and test model fit through
the cubed trace of the residual matrix, which is asymptotically standard
normal under a correctly specified model. A sequential scan of the test
over candidate community counts estimates the number of communities in
mixed-membership models.
"""

__version__ = "0.1.0"

from .datasets import DATASETS, DatasetMissingError, load_dataset
from .estimators import (
    EPS_CLIP,
    BetaModelEstimator,
    BlockModelEstimator,
    DegreeCorrectedBlockModelEstimator,
    ErdosRenyiEstimator,
    FitError,
    LatentSpaceEstimator,
    MixedMembershipEstimator,
    fit_model,
    make_estimator,
)
from .gof import (
    SelectionResult,
    TestResult,
    delta_cubed_diagnostic,
    gof_test,
    max_abs_deviation,
    normalize_residuals,
    normalize_true,
    select_k,
    trace_statistic,
)
from .graph import degrees, load_edge_list, save_edge_list, summarize
from .models import (
    BlockModel,
    DegreeCorrectedBlockModel,
    ErdosRenyi,
    LatentSpaceModel,
    MixedMembershipModel,
    NodeAttractiveness,
    build_probability_matrix,
    preset,
    sample_adjacency,
)
from .numerics import SeededStream, derive_stream, sym_eigs, trace_cubed

__all__ = [
    "__version__",
    "DATASETS",
    "DatasetMissingError",
    "load_dataset",
    "EPS_CLIP",
    "FitError",
    "ErdosRenyiEstimator",
    "BetaModelEstimator",
    "BlockModelEstimator",
    "DegreeCorrectedBlockModelEstimator",
    "MixedMembershipEstimator",
    "LatentSpaceEstimator",
    "make_estimator",
    "fit_model",
    "TestResult",
    "SelectionResult",
    "gof_test",
    "select_k",
    "trace_statistic",
    "normalize_residuals",
    "normalize_true",
    "delta_cubed_diagnostic",
    "max_abs_deviation",
    "degrees",
    "load_edge_list",
    "save_edge_list",
    "summarize",
    "ErdosRenyi",
    "NodeAttractiveness",
    "BlockModel",
    "DegreeCorrectedBlockModel",
    "MixedMembershipModel",
    "LatentSpaceModel",
    "build_probability_matrix",
    "sample_adjacency",
    "preset",
    "SeededStream",
    "derive_stream",
    "sym_eigs",
    "trace_cubed",
]
