"""sublra: low-rank approximation at sublinear cost.

Sketching algorithms with sparse and sampling test matrices, CUR
decompositions driven by maxvol pivoting and cross-approximation
iterations, leverage-score refinement, and a seeded benchmark harness
that verifies the deterministic and probabilistic error bounds.
"""

from .counting import OpCounter
from .cross import CaState, DegenerateCrossError, ca_column_step, ca_iterate, ca_row_step
from .cur import (
    CurFactors,
    VolumeReport,
    brute_force_maxvol,
    brute_force_maxvol_cross,
    build_cur,
    cheb_bound_f,
    maxvol_pinv_bound,
    maxvol_rows,
    select_maxvol_rows,
    volume,
)
from .leverage import (
    LeverageSample,
    draw_leverage_sample,
    leverage_scores,
    refine_lra,
    sample_size,
)
from .linalg import (
    QrFactors,
    SvdFactors,
    factorize_qr,
    norm,
    numerical_rank,
    pinv,
    relative_error,
    svd,
    truncate_rank,
)
from .sketch import (
    AprioriBound,
    LraFactors,
    PosteriorBound,
    SketchConfig,
    apriori_bounds,
    posterior_error_bound,
    premult_bound,
    range_finder,
    row_column_sketch,
    transposed_range_finder,
)
from .synth import (
    InputSpec,
    class1_svd_generated,
    factor_gaussian,
    laplacian_single_layer,
    random_singular_space_matrix,
    regtools_kernel,
)
from .testmat import (
    SamplingMatrix,
    TestMatrixSpec,
    abridged_fourier,
    abridged_hadamard,
    family_matrix,
    gaussian,
    sampling_matrix,
    scaled_permuted,
)

__version__ = "0.1.0"

__all__ = [
    "OpCounter",
    "CaState", "DegenerateCrossError", "ca_column_step", "ca_iterate",
    "ca_row_step",
    "CurFactors", "VolumeReport", "brute_force_maxvol",
    "brute_force_maxvol_cross", "build_cur", "cheb_bound_f",
    "maxvol_pinv_bound", "maxvol_rows", "select_maxvol_rows", "volume",
    "LeverageSample", "draw_leverage_sample", "leverage_scores",
    "refine_lra", "sample_size",
    "QrFactors", "SvdFactors", "factorize_qr", "norm", "numerical_rank",
    "pinv", "relative_error", "svd", "truncate_rank",
    "AprioriBound", "LraFactors", "PosteriorBound", "SketchConfig",
    "apriori_bounds", "posterior_error_bound", "premult_bound",
    "range_finder", "row_column_sketch", "transposed_range_finder",
    "InputSpec", "class1_svd_generated", "factor_gaussian",
    "laplacian_single_layer", "random_singular_space_matrix",
    "regtools_kernel",
    "SamplingMatrix", "TestMatrixSpec", "abridged_fourier",
    "abridged_hadamard", "family_matrix", "gaussian", "sampling_matrix",
    "scaled_permuted",
]
