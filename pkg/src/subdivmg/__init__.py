"""Multigrid solvers for symmetric positive definite circulant/Toeplitz
systems whose grid transfer operators come from subdivision symbols,
plus certification of the optimality conditions and benchmark problems."""

from .analysis import (
    CertificationReport,
    CohenResult,
    TrigSymbol,
    ZeroOrderReport,
    certify_tgm,
    certify_vcycle,
    coarse_symbol,
    cohen_check,
    g_corners,
    generation_degree,
    mirror_points,
    order_of_zero,
)
from .errors import (
    BadDimension,
    DimensionMismatch,
    HypothesisViolated,
    IncompatibleDimension,
    IndexOutOfRange,
    InvalidDegree,
    InvalidOrder,
    OrderTooLarge,
    ParseError,
    SingularCoarseMatrix,
    SubdivMgError,
    TooFewIterations,
    ZeroDiagonal,
)
from .linalg import (
    BandedOperator,
    CirculantOperator,
    CutVariant,
    DenseOperator,
    GridTransfer,
    StructuredOperator,
    ToeplitzOperator,
    downsample,
    galerkin_coarsen,
    packaging_check,
    upsample,
)
from .multigrid import (
    GAUSS_SEIDEL,
    MgHierarchy,
    MgLevel,
    SmootherConfig,
    SolveReport,
    build_hierarchy,
    conv_rate,
    mgm_solve,
    smooth,
    tgm_solve,
)
from .problems import (
    BSplineBasis,
    ProblemInstance,
    biharmonic_problem,
    bspline_eval,
    iga_laplacian_problem,
    iga_symbol,
)
from .symbols import (
    LaurentPoly,
    SubdivisionSymbol,
    binary_pseudo_spline,
    smoothing_factor_split,
    symbol_from_text,
    symbol_to_text,
    ternary_pseudo_spline,
)

__version__ = "0.1.0"
