"""Computational symbolic dynamics over two-sided leveled labeled graphs."""

from .core import (
    Alphabet,
    CoreError,
    FormalSum,
    Specification,
    SymbolicMatrix,
    find_specification,
    formal_sum_product,
    kappa_exchange,
    kappa_matrix,
    specified_equivalent,
    symbolic_matrix_multiply,
)
from .subshift import (
    BlockCode,
    LabeledGraph,
    SftMatrix,
    SubshiftError,
    SubshiftPresentation,
    admissible_words,
    apply_block_code,
    fill_in_words,
    future_state_set,
    higher_block_recode,
    past_state_set,
)
from .bisystem import (
    BisystemError,
    LambdaGraphBisystem,
    LambdaGraphSystem,
    ValidationReport,
    fpcc_check,
    follower_set,
    from_lambda_graph_system,
    predecessor_set,
    presented_words,
    sigma1_minus,
    sigma1_plus,
    sigma_condition_I_witness,
    transition_matrices,
    transpose,
    validate,
)
from .smb import (
    SmbError,
    SymbolicMatrixBisystem,
    bisystem_isomorphic,
    from_smb,
    sft_smb,
    smb_isomorphic,
    to_smb,
    validate_smb,
)
from .canonical import (
    CanonicalBuild,
    CanonicalError,
    CentralClass,
    canonical_bisystem,
    canonical_smb,
    central_classes,
)
from .equivalence import (
    EquivalenceError,
    PsseWitness,
    SseWitness,
    bipartite_split,
    conjugacy_block_map,
    detect_bipartite,
    psse_to_sse,
    trivial_psse_witness,
    verify_psse_1step,
    verify_sse_1step,
)
from .ktheory import (
    FgAbelianGroup,
    KResult,
    build_ladder,
    ck_oracle,
    k_groups,
    kernel_contains_constant,
    smith_normal_form,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
