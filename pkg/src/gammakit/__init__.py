"""Numerical and combinatorial toolkit for the closed symmetrized polydisc."""

__version__ = "0.1.0"

from .combinatorics import F, G, binom, k_const, verify_sign_tables
from .dilation import (build_coisometry_model, build_isometric_dilation, build_unitary_dilation,
                       dilate, pure_isometry_model, verify_dilation_moments, verify_step_identities,
                       wold_split_check)
from .errors import DomainError, GammaError, StructuralError
from .fundamental import (lemma72_suite, lemma43_check, prop66_conditions, radius_bound_check,
                          solve_fundamental, thm73_gate, uniqueness_check)
from .geometry import (bboundary_check, costara_decompose, counterexample_point,
                       roots_membership, schur_membership, symmetrize, verify_estimates)
from .linalg import (OperatorTuple, commute_check, defect_pair, joint_eigenvalues,
                     numerical_radius, pseudoinverse, psd_sqrt)
from .pencils import (classify_coisometry, classify_isometry, classify_unitary,
                      gamma_unitary_from_unitaries, necessary_contraction_suite, op_pencil,
                      symmetrize_tuple)

__all__ = [
    "__version__", "F", "G", "binom", "k_const", "verify_sign_tables",
    "build_coisometry_model", "build_isometric_dilation", "build_unitary_dilation", "dilate",
    "pure_isometry_model", "verify_dilation_moments", "verify_step_identities",
    "wold_split_check", "DomainError", "GammaError", "StructuralError",
    "lemma72_suite", "lemma43_check", "prop66_conditions", "radius_bound_check",
    "solve_fundamental", "thm73_gate", "uniqueness_check", "bboundary_check",
    "costara_decompose", "counterexample_point", "roots_membership", "schur_membership",
    "symmetrize", "verify_estimates", "OperatorTuple", "commute_check", "defect_pair",
    "joint_eigenvalues", "numerical_radius", "pseudoinverse", "psd_sqrt",
    "classify_coisometry", "classify_isometry", "classify_unitary",
    "gamma_unitary_from_unitaries", "necessary_contraction_suite", "op_pencil",
    "symmetrize_tuple",
]
