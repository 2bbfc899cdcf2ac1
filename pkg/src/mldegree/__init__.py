"""Exact verification of ML-degrees of generic linear covariance models."""

__version__ = "0.1.0"

from .enumerative import delta, expand_ml4_assembly, ml_formula, ml_naive, ml_via_intersection  # noqa: E402
from .groebner import Budget, BudgetExceeded, buchberger, count_solutions, quotient_dimension  # noqa: E402
from .model import (  # noqa: E402
    Encoding,
    build_corank2_slice,
    build_eliminated,
    build_primal,
    build_reduced,
    random_instance,
)
from .polyring import PolyRing  # noqa: E402
from .scalar import PrimeModulus  # noqa: E402

__all__ = [
    "Budget",
    "BudgetExceeded",
    "Encoding",
    "PolyRing",
    "PrimeModulus",
    "buchberger",
    "build_corank2_slice",
    "build_eliminated",
    "build_primal",
    "build_reduced",
    "count_solutions",
    "delta",
    "expand_ml4_assembly",
    "ml_formula",
    "ml_naive",
    "ml_via_intersection",
    "quotient_dimension",
    "random_instance",
]
