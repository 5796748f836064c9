"""Exact-arithmetic toolkit for terminal algebras.

Structure-constant algebras over Q, the terminal identity, second
cohomology, central extensions, automorphism actions on classes, and a
machine-readable catalog with a verification harness.
"""

from .algebra import Algebra, AlgebraTemplate
from .cohomology import CohomologyBasis
from .extensions import ExtensionSpec, extend
from .identities import DefectReport, is_terminal
from .morphisms import AutFamily, InvariantProfile

__all__ = [
    "Algebra",
    "AlgebraTemplate",
    "AutFamily",
    "CohomologyBasis",
    "DefectReport",
    "ExtensionSpec",
    "InvariantProfile",
    "extend",
    "is_terminal",
]

__version__ = "0.1.0"
