"""Hermitian self-orthogonal evaluation codes over GF(q^2), with certificates
for self-orthogonality, MDS-ness and distances, and the derived quantum
stabilizer parameters [[n, n-2k, d]]_q.
"""

from .codes import (
    DistanceResult,
    GramCertificate,
    LinearCode,
    dual,
    dual_distance_by_columns,
    evaluation_code,
    exhaustive_distance,
    export_matrix,
    hermitian_gram,
    import_matrix,
    is_mds,
)
from .constructions import (
    CertifiedCode,
    ConstructionRequest,
    construct,
    construct_chain,
    deep_dimension,
    embed_iterate,
    embed_once,
)
from .curves import CurveFamily, CurveSpec, MonomialBasis, curve, fiber, rr_basis, x_support
from .fields import (
    AdditiveMap,
    FieldElement,
    FieldTower,
    build_tower,
    norm_preimage,
    relative_norm,
    relative_trace,
    solve_additive,
)
from .points import (
    EvaluationSet,
    TwistVector,
    affine_grid_set,
    coset_union_set,
    explicit_set,
    local_derivatives,
    roots_of_unity_set,
    twist_vector,
)
from .quantum import QuantumParams, singleton_defect, stabilizer_params

__version__ = "0.1.0"

__all__ = [
    "AdditiveMap",
    "CertifiedCode",
    "ConstructionRequest",
    "CurveFamily",
    "CurveSpec",
    "DistanceResult",
    "EvaluationSet",
    "FieldElement",
    "FieldTower",
    "GramCertificate",
    "LinearCode",
    "MonomialBasis",
    "QuantumParams",
    "TwistVector",
    "affine_grid_set",
    "build_tower",
    "construct",
    "construct_chain",
    "coset_union_set",
    "curve",
    "deep_dimension",
    "dual",
    "dual_distance_by_columns",
    "embed_iterate",
    "embed_once",
    "evaluation_code",
    "exhaustive_distance",
    "explicit_set",
    "export_matrix",
    "fiber",
    "hermitian_gram",
    "import_matrix",
    "is_mds",
    "local_derivatives",
    "norm_preimage",
    "relative_norm",
    "relative_trace",
    "roots_of_unity_set",
    "rr_basis",
    "singleton_defect",
    "solve_additive",
    "stabilizer_params",
    "twist_vector",
    "x_support",
]
