"""Exact rank-1 L1-norm TUCKER2 decomposition of matrix stacks."""

from .arrangement import (
    CandidateSet,
    build_candidate_set,
    build_exhaustive_set,
    cell_count,
    check_general_position,
)
from .baselines import (
    alt_heuristic,
    glram_rank1,
    hooi_rank1,
    hosvd_rank1,
    l1pca_rank1_exact,
    pca_rank1_vectorized,
    reconstruct,
)
from .exceptions import (
    CapacityError,
    ConfigError,
    DegenerateInputError,
    DimensionError,
    GeneralPositionError,
    InputError,
    L1Tucker2Error,
)
from .harness import ExperimentConfig, SweepRecord, corrupt, generate_dataset, mse, run_sweep
from .linalg import (
    SingularTriplet,
    ThinSVD,
    matricize,
    orthonormal_complement_vector,
    signed_sum,
    thin_svd,
    top_singular_triplet,
    vectorize,
)
from .solvers import (
    Rank1Solution,
    objective,
    sign_pattern,
    solve_auto,
    solve_exhaustive,
    solve_polynomial,
    verify_certificate,
)

__version__ = "0.1.0"
