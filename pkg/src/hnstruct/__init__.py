"""Exact verification of Nijenhuis-tensor identities for almost hypercomplex
structures with Hermitian-Norden metrics on Lie groups."""

from .calculus import (
    assoc_nijenhuis_pair,
    barwedge_left,
    barwedge_right,
    nijenhuis_pair,
    verify_barwedge_identities,
    verify_identity_pairs,
    verify_lemma_2_1,
)
from .frame import (
    LieFrame,
    braces,
    bracket,
    build_lie_frame,
    covariant,
    nabla_endo,
    structure_constants,
)
from .instances import (
    Instance,
    example_g4,
    random_hn,
    random_instance,
    standard_quaternion,
)
from .linalg import (
    FLOAT,
    RATIONAL,
    Backend,
    SolutionSet,
    mat_inverse,
    rank,
    signature,
    solve_affine,
)
from .structure import (
    HNStructure,
    assoc_six,
    build_hn,
    class_report,
    fundamental,
    verify_en_formulas,
    verify_lemma_3_1,
    verify_nn_nhat,
)
from .tensors import Endo, Residual, Tensor03, Tensor12
from .torsion import (
    TorsionProblem,
    TorsionResult,
    solve_skew_torsion,
    verify_connection,
)

__all__ = [
    "FLOAT", "RATIONAL", "Backend", "SolutionSet", "mat_inverse", "rank", "signature", "solve_affine",
    "LieFrame", "braces", "bracket", "build_lie_frame", "covariant", "nabla_endo", "structure_constants",
    "Endo", "Residual", "Tensor03", "Tensor12",
    "assoc_nijenhuis_pair", "barwedge_left", "barwedge_right", "nijenhuis_pair",
    "verify_barwedge_identities", "verify_identity_pairs", "verify_lemma_2_1",
    "HNStructure", "assoc_six", "build_hn", "class_report", "fundamental",
    "verify_en_formulas", "verify_lemma_3_1", "verify_nn_nhat",
    "TorsionProblem", "TorsionResult", "solve_skew_torsion", "verify_connection",
    "Instance", "example_g4", "random_hn", "random_instance", "standard_quaternion",
]
