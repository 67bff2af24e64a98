"""Schmidt-restricted and cone norms of bipartite operators via SDPs.

The core objects are Hermitian operators on a tensor product C^n (x) C^m,
the S(k) norms that restrict the operator norm to Schmidt-rank-k vectors,
and the semidefinite programs that bound them from above with extractable
block-positivity certificates.  See-saw iteration supplies matching lower
bounds, and closed-form families (Werner states, recursive projections)
calibrate everything.
"""

from .qops import (
    BipartiteDims,
    HermitianOperator,
    MapRep,
    OperatorFormatError,
    adjoint_map,
    apply_map_second,
    hermitian_eig,
    identity_map,
    kron,
    load_operator,
    max_entangled,
    partial_transpose,
    realify,
    reduction_map,
    save_operator,
    swap_operator,
    transpose_map,
    unrealify,
)
from .schmidt import (
    PureState,
    SchmidtDecomposition,
    pure_norm_sk,
    random_rank_k_state,
    schmidt_decompose,
    schmidt_rank,
)
from .sdp import (
    GeneralSDP,
    SdpSolverError,
    SolveResult,
    SolveStatus,
    SolverOptions,
    StandardSDP,
    build_cone_sdp,
    build_sk_sdp,
    dump_standard_form,
    extract_certificate,
    psi_adjoint_apply,
    psi_apply,
    solve,
    solve_general,
    to_standard_form,
)
from .norms import (
    Certification,
    NormBound,
    Verdict,
    cone_norm,
    default_maps,
    dual_char_spotcheck,
    is_k_block_positive,
    sk_bracket,
    sk_exact_small,
    sk_lower_bound_seesaw,
    sk_upper_bound,
)
from .states import (
    DimensionCapError,
    ProjectionFamily,
    UndistillabilityReport,
    WernerState,
    brandao_rhs,
    bures_sample,
    check_r_undistillable,
    haar_unitary,
    p_value,
    proj_family,
    proj_pt_max_eig,
    proj_s1_exact,
    proj_s2_upper,
    random_projection,
    undistill_threshold,
    undistill_threshold_simple,
    werner,
    werner_norm_exact,
    werner_pt_eigs,
    werner_pt_spectrum,
)

__version__ = "0.1.0"
