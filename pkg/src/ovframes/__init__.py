"""Finite-dimensional laboratory for factorable weak operator-valued frames."""

__version__ = "0.1.0"

from .errors import (
    FrameFormatError,
    HypothesisFailedError,
    InconsistentDecompositionError,
    InvalidSystemError,
    NotInvertibleError,
    NotSimilarError,
    OvfError,
    PreconditionFailedError,
    RankDeficientError,
    ShapeMismatchError,
    TheoremViolatedError,
)
from .linalg import (
    Tolerance,
    adjoint,
    direct_sum,
    kron,
    orthonormal_complement,
    random_op,
    random_unitary,
    spectral_norm,
    try_invert,
)
from .frames import (
    FrameReport,
    OperatorONB,
    WeakOvf,
    analysis_operator,
    check_representation_identity,
    classic_ovf_check,
    classify,
    embedding,
    frame_operator,
    from_factors,
    from_operator_onb,
    idempotent_P,
    onb_from_embeddings,
)
from .duality import (
    DualPair,
    canonical_dual,
    direct_sum_frames,
    dual_bounds_check,
    dual_from_parameters,
    interpolate,
    is_dual,
    is_orthogonal,
    left_inverse_of_analysis,
    right_inverse_of_synthesis,
)
from .dilation import (
    Dilation,
    SimilarityWitness,
    dilate,
    parsevalize,
    similarity_witness,
    unique_similar_dual_check,
)
from .groups import (
    FiniteGroup,
    Representation,
    check_commutation,
    check_shift_conditions,
    cyclic_group,
    dihedral_group,
    direct_product,
    finite_group,
    generate_frame,
    left_regular,
    reconstruct_representation,
    right_regular,
    twisted_shift_conditions,
)
from .grouplike import (
    GroupLikeRepresentation,
    GroupLikeSystem,
    check_grouplike_conditions,
    generate_grouplike_frame,
    group_like_system,
    reconstruct_grouplike_representation,
    regular_representation,
    system_from_cocycle,
    system_from_group,
    system_from_unitaries,
    validate_system,
)
from .perturb import (
    HildingReport,
    HildingStatus,
    PerturbCert,
    hilding_check,
    perturbation_constants,
    sample_admissible_perturbation,
    tightness_rows,
    verify_perturbation,
)
from .io import FrameDocument, frame_from_dict, frame_to_dict, load_frame, save_frame
