"""Low-rank Gaussian perturbation of matrices: spectra, probability bounds,
and the downstream solver experiments."""
from .ballprob import (
    BALL_MODES,
    KMEANS_CSV_HEADER,
    AccuracyError,
    BallProbQuery,
    ball_prob_mc,
    product_cdf_quadrature,
)
from .bounds import (
    BOUNDS_CSV_HEADER,
    TAIL_EVENTS,
    BoundParams,
    McEstimate,
    beyond_rhs,
    clopper_pearson,
    main_rhs,
    main_threshold,
    mc_small_sn,
    sample_small_sn,
    tail_lemma_mc,
)
from .cg import CgReport, NotSpdError, cg_solve
from .dense import (
    SingularMatrixError,
    SingularSpectrum,
    block_inverse_bound_check,
    condition_number,
    solve_dense,
    svd_values,
    svd_values_complex,
    top_right_singular_vector,
)
from .experiments import (
    SIMPLEX_CSV_HEADER,
    ExperimentConfig,
    gen_antidiag,
    median_time_ns,
    rademacher_counterexample,
    registered_experiments,
    run_experiment,
)
from .operators import (
    DENSIFY_CAP,
    CsrMatrix,
    DensifyCapError,
    LowRankUpdate,
    PerturbedOperator,
    apply,
    det_rank1_diag,
    diagonal_model,
    load_matrix_market,
    to_dense,
)
from .rng import (
    COMPLEX_GAUSSIAN,
    DISTRIBUTION_KINDS,
    RADEMACHER,
    REAL_GAUSSIAN,
    SPHERE,
    DistributionSpec,
    Seed,
    sample_gaussians,
    sample_matrix,
    sample_orthogonal,
)
from .simplex import (
    PERTURBATION_MODES,
    InfeasibleStartError,
    LinearProgram,
    PivotStats,
    SimplexResult,
    dantzig_solve,
    klee_minty_lp,
    perturbed_pivots,
)

__version__ = "0.1.0"
