"""Accurate polynomial least squares in the Lagrange basis via total positivity."""
from .bd_core import (
    BDMatrix,
    NodeConfig,
    ScalingDiag,
    build_A,
    build_L,
    make_config,
    nic_audit,
    reconstruct_from_bd,
    scaling_diag,
    tnbdlr,
    validate_ordering,
)
from .errors import (
    DimensionMismatch,
    MissingReference,
    MixedNode,
    NonPositiveBD,
    NotOrdered,
    NotSTP,
    OracleCancelled,
    RankDeficient,
    RepeatedNode,
    SingularR,
    TplagError,
    UnsortedNodes,
)
from .lagrange_ls import (
    ChangeOfVariable,
    FitModel,
    LSSolution,
    evaluate,
    evaluate_direct,
    evaluation_scale,
    fit,
    ls_solve_A,
    ls_solve_L,
    make_change_of_variable,
    mp_inverse_A,
    mp_inverse_L,
    project_data,
    projection_matrix,
)
from .tn_kernels import QRFactors, tninverse_expand, tnqr, tnsolve

__version__ = "0.1.0"
