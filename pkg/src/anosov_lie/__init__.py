"""Exact construction and verification of Anosov Lie algebras from algebraic units."""

from .certificate import AnosovCertificate, IntegerAutomorphism, VerificationReport, quotient_certificate, verify_certificate
from .errors import (
    AnosovError,
    CertificateFormatError,
    ConstructionError,
    InvalidInputError,
    NotAUnitError,
    NotHyperbolicError,
    NotIrreducibleError,
    NotNilpotentError,
    PrecisionError,
    ScopeExceededError,
)
from .families import (
    build_13dim,
    build_16dim,
    build_bipartite,
    build_family,
    build_p2_family,
    build_three_unit_2step,
    build_three_unit_3step,
    build_type_pq,
    realize_integer_basis,
)
from .lie import NilpotentLieAlgebra, StructureConstants, basis_aligned_decomposition, type_of
from .poly import IntPolynomial, composed_product, power_sum, resultant, unit_circle_verdict
from .units import AlgebraicUnit, make_unit, search_units, validate_system

__version__ = "0.1.0"

__all__ = [
    "AnosovCertificate",
    "IntegerAutomorphism",
    "VerificationReport",
    "quotient_certificate",
    "verify_certificate",
    "AnosovError",
    "CertificateFormatError",
    "ConstructionError",
    "InvalidInputError",
    "NotAUnitError",
    "NotHyperbolicError",
    "NotIrreducibleError",
    "NotNilpotentError",
    "PrecisionError",
    "ScopeExceededError",
    "build_13dim",
    "build_16dim",
    "build_bipartite",
    "build_family",
    "build_p2_family",
    "build_three_unit_2step",
    "build_three_unit_3step",
    "build_type_pq",
    "realize_integer_basis",
    "NilpotentLieAlgebra",
    "StructureConstants",
    "basis_aligned_decomposition",
    "type_of",
    "IntPolynomial",
    "composed_product",
    "power_sum",
    "resultant",
    "unit_circle_verdict",
    "AlgebraicUnit",
    "make_unit",
    "search_units",
    "validate_system",
]
