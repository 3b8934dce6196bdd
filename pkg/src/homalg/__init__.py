"""Exact computations with hom-associative algebras over GF(p) and Q."""

from .algebra import (
    Algebra,
    AlgebraError,
    HomAlgebra,
    PreconditionError,
    check_associative,
    check_commutative,
    check_hom_associative,
    check_identity,
    find_units,
)
from .linalg import Field, Subspace
from .structure import associative_factor, codim_analysis, nucleus, verify_unital_identities
from .twisting import (
    detwist,
    enumerate_twists,
    generalized_twist,
    unitalize_associative,
    verify_weak_unit_identities,
    weak_embedding_obstruction,
    yau_twist,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraError",
    "Field",
    "HomAlgebra",
    "PreconditionError",
    "Subspace",
    "__version__",
    "associative_factor",
    "check_associative",
    "check_commutative",
    "check_hom_associative",
    "check_identity",
    "codim_analysis",
    "detwist",
    "enumerate_twists",
    "find_units",
    "generalized_twist",
    "nucleus",
    "unitalize_associative",
    "verify_unital_identities",
    "verify_weak_unit_identities",
    "weak_embedding_obstruction",
    "yau_twist",
]
