"""Nonlinear entanglement identifiers and their induced positive maps.

The package evaluates functional entanglement identifiers built from maps of
correlation tensors, converts each evaluated identifier into a witness and a
state-dependent positive map, and scans standard state families with the
resulting detection criteria.  An HTTP service and a CLI expose the same
operations; `entmaps.verify` cross-checks the numerical identities the
construction relies on.
"""

from .linalg import (
    NEGATIVITY_TOL,
    hs_inner,
    min_eigenvalue,
    negativity_verdict,
    partial_trace,
    partial_transpose,
)
from .bases import (
    HermitianBasis,
    correlation_tensor,
    gell_mann_basis,
    state_from_tensor,
    tripartite_correlation_tensor,
)
from .states import (
    StateSpec,
    bell_diagonal,
    bell_state,
    qutrit_werner,
    random_separable,
    random_state,
    singlet,
    w_noise,
    werner,
    weyl_state,
)
from .identifiers import (
    DETECTION_TOL,
    GMap,
    IdentifierResult,
    apply_gmap,
    bell_diagonal_boundary,
    identifier_value,
    pptgen_map,
    product_max,
    product_max_bloch_bound,
    product_max_oracle,
    sign_criterion,
    sign_map,
    standard_metric,
    tensor_cross_norm,
    weyl_condition,
)
from .positive_maps import (
    MapConditionResult,
    WitnessOperator,
    induced_map_operator,
    isomorphism_check,
    lambda_apply,
    lambda_dual_apply,
    map_condition,
    ppt_check,
    witness_coefficients,
    witness_operator,
)
from .multipartite import (
    Bipartition,
    map_condition_bipartition,
    metric_identifier_bipartition,
    ppt_check_bipartition,
    threshold_scan,
)
from .scans import (
    DetectionReport,
    ScanConfig,
    ScanResult,
    analyze_state,
    applicable_criteria,
    detection_indicator,
    render_csv,
    render_json,
    run_scan,
)
from .verify import VerificationReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "NEGATIVITY_TOL",
    "hs_inner",
    "min_eigenvalue",
    "negativity_verdict",
    "partial_trace",
    "partial_transpose",
    "HermitianBasis",
    "correlation_tensor",
    "gell_mann_basis",
    "state_from_tensor",
    "tripartite_correlation_tensor",
    "StateSpec",
    "bell_diagonal",
    "bell_state",
    "qutrit_werner",
    "random_separable",
    "random_state",
    "singlet",
    "w_noise",
    "werner",
    "weyl_state",
    "DETECTION_TOL",
    "GMap",
    "IdentifierResult",
    "apply_gmap",
    "bell_diagonal_boundary",
    "identifier_value",
    "pptgen_map",
    "product_max",
    "product_max_bloch_bound",
    "product_max_oracle",
    "sign_criterion",
    "sign_map",
    "standard_metric",
    "tensor_cross_norm",
    "weyl_condition",
    "MapConditionResult",
    "WitnessOperator",
    "induced_map_operator",
    "isomorphism_check",
    "lambda_apply",
    "lambda_dual_apply",
    "map_condition",
    "ppt_check",
    "witness_coefficients",
    "witness_operator",
    "Bipartition",
    "map_condition_bipartition",
    "metric_identifier_bipartition",
    "ppt_check_bipartition",
    "threshold_scan",
    "DetectionReport",
    "ScanConfig",
    "ScanResult",
    "analyze_state",
    "applicable_criteria",
    "detection_indicator",
    "render_csv",
    "render_json",
    "run_scan",
    "VerificationReport",
    "run_verification",
]
