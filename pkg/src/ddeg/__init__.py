"""Exact dynamical degrees of polynomial endomorphisms of affine space."""
from .algebraic import RealAlgebraicNumber, compare, largest_real_root
from .config import DEFAULT, JobConfig
from .errors import DdegError, DomainError, InternalError, ParseError, ResourceLimitError, StructuralError
from .matrices import contained_matrices, maximal_eigenvalue, maximal_eigenvector, spectral_radius
from .normal_forms import (affine_triangular_A3_dynamical_degree, bruhat_conjugate, classify_shape,
                           enumerate_shiftlike_set_A3, enumerate_theorem1_set, perm_elem_dynamical_degree,
                           perm_elem_normal_form, reduce_A3_step)
from .oracle import oracle_degree_sequence
from .perron import (AlgebraicCandidate, classify, examplerst_family, is_handelman, is_perron, is_weak_perron,
                     minimal_dimension_quadratic, realize_weak_perron)
from .polynomial import Budget, Endomorphism, Polynomial, compose, iterate
from .stability import dynamical_degree, stability_test
from .textio import format_endomorphism, parse_endomorphism, parse_polynomial
from .weights import WeightVector, mu_degree_endo, mu_degree_poly, mu_leading_endo

__version__ = "0.1.0"

__all__ = [
    "RealAlgebraicNumber", "compare", "largest_real_root", "DEFAULT", "JobConfig", "DdegError", "DomainError",
    "InternalError", "ParseError", "ResourceLimitError", "StructuralError", "contained_matrices",
    "maximal_eigenvalue", "maximal_eigenvector", "spectral_radius", "affine_triangular_A3_dynamical_degree",
    "bruhat_conjugate", "classify_shape", "enumerate_shiftlike_set_A3", "enumerate_theorem1_set",
    "perm_elem_dynamical_degree", "perm_elem_normal_form", "reduce_A3_step", "oracle_degree_sequence",
    "AlgebraicCandidate", "classify", "examplerst_family", "is_handelman", "is_perron", "is_weak_perron",
    "minimal_dimension_quadratic", "realize_weak_perron", "Budget", "Endomorphism", "Polynomial", "compose",
    "iterate", "dynamical_degree", "stability_test", "format_endomorphism", "parse_endomorphism",
    "parse_polynomial", "WeightVector", "mu_degree_endo", "mu_degree_poly", "mu_leading_endo",
]
