"""
dgcat-workbench: exact computations with finite dg-categories.

Public API re-exports.
"""

from .enums import ExitCode, FieldKind, Level, ReprKind, Side
from .constants import *  # noqa: F401,F403
from .errors import (
    DimensionMismatchError, NotClosedError, NotQuasiIsomorphismError,
    UncertifiedResolutionError, UnknownObjectError, ValidationError,
    WorkbenchError, WorkspaceFormatError,
)
from .models import Report, SearchProvenance, first_failure
from .exact_linalg import Field, Matrix, kernel_basis, rank, solve
from .complexes import (
    Complex, GradedMap, IsoWitness, cohomology, cone, internal_hom,
    is_quasi_iso, shift, tensor,
)
from .dgcat import (
    AdjunctionReport, DgCategory, DgFunctor, compose_functors, h0_category,
    identity_functor, opposite, swap_functor, tensor_dgcat, unit_category,
    validate_dgcat, validate_functor, verify_dg_adjunction, z0_category,
)
from .dgmod import (
    Bimodule, LeftModule, ModuleMorphism, RightModule, diagonal, direct_sum,
    external_tensor, from_functor, hFG, module_cone, nat_complex,
    representable_left, representable_right, shift_module, validate_module,
    yoneda_iso,
)
from .endcoend import (
    CoendResult, EndResult, FubiniWitness, associativity_witness, coend_bimodule,
    coend_oracle, compose, coyoneda_witness, end_bimodule, end_oracle, fubini_witness,
)
from .duality import (
    L_dual, LR_counit, LR_unit, R_dual, ReprWitness, SearchOutcome,
    isbell_O, isbell_adjunction, isbell_counit, isbell_spec, isbell_unit,
    search_representability,
)
from .derived import (
    AdjointDecision, AdjunctionWitness, ResolutionResult, StructuralMaps,
    bar_resolution, build_adjunction, co_build_adjunction, derived_compose,
    derived_duality_unit, derived_hom, has_left_adjoint, quasi_functor_compose,
    reduced_nilpotency_index, structural_maps, verify_quasiadj_diagrams,
)
from .fixtures import dg_interval, dual_numbers, q2, q2_adjunctions, truncated_polynomial
from .workspace import Workspace, load_workspace, read_workspace, dump_workspace

__all__ = [
    "ExitCode", "FieldKind", "Level", "ReprKind", "Side",
    "WorkbenchError", "DimensionMismatchError", "ValidationError", "UnknownObjectError",
    "NotClosedError", "NotQuasiIsomorphismError", "UncertifiedResolutionError",
    "WorkspaceFormatError",
    "Report", "SearchProvenance", "first_failure",
    "Field", "Matrix", "kernel_basis", "rank", "solve",
    "Complex", "GradedMap", "IsoWitness", "cohomology", "cone", "internal_hom",
    "is_quasi_iso", "shift", "tensor",
    "DgCategory", "DgFunctor", "AdjunctionReport", "compose_functors", "h0_category",
    "identity_functor", "opposite", "swap_functor", "tensor_dgcat", "unit_category",
    "validate_dgcat", "validate_functor", "verify_dg_adjunction", "z0_category",
    "Bimodule", "LeftModule", "RightModule", "ModuleMorphism", "diagonal", "direct_sum",
    "external_tensor", "from_functor", "hFG", "module_cone", "nat_complex",
    "representable_left", "representable_right", "shift_module", "validate_module",
    "yoneda_iso",
    "EndResult", "CoendResult", "FubiniWitness", "associativity_witness", "coend_bimodule",
    "coend_oracle", "compose", "coyoneda_witness", "end_bimodule", "end_oracle",
    "fubini_witness",
    "L_dual", "R_dual", "LR_unit", "LR_counit", "ReprWitness", "SearchOutcome",
    "isbell_O", "isbell_spec", "isbell_unit", "isbell_counit", "isbell_adjunction",
    "search_representability",
    "ResolutionResult", "StructuralMaps", "AdjunctionWitness", "AdjointDecision",
    "bar_resolution", "build_adjunction", "co_build_adjunction", "derived_compose",
    "derived_duality_unit", "derived_hom", "has_left_adjoint", "quasi_functor_compose",
    "reduced_nilpotency_index", "structural_maps", "verify_quasiadj_diagrams",
    "q2", "dual_numbers", "truncated_polynomial", "dg_interval", "q2_adjunctions",
    "Workspace", "load_workspace", "read_workspace", "dump_workspace",
]
