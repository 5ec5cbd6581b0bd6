"""Exact tools for Schett polynomials and their matrix certificates."""

from .polyring import (
    MINUS_INFINITY,
    DivisibilityError,
    Poly,
    UnknownVariableError,
    VarOrderError,
    VarSet,
    halve_even_exponents,
)

__version__ = "0.1.0"

__all__ = [
    "MINUS_INFINITY",
    "DivisibilityError",
    "Poly",
    "UnknownVariableError",
    "VarOrderError",
    "VarSet",
    "halve_even_exponents",
    "__version__",
]
