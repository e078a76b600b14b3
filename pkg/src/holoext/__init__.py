"""Numerical laboratory for norm-preserving extension from subvarieties.

Modules: ``domains`` (domain zoo and convexity tests), ``hyperbolic``
(pseudo-hyperbolic geometry, extremal maps), ``pick`` (kernels and Pick
matrices), ``operator_model`` (the commuting model tuple), ``extension_lab``
(variety experiments) and ``cli``.
"""

from . import domains, extension_lab, hyperbolic, operator_model, pick
from .domains import DomainSpec, ball, bidisk, ellipsoid, symmetrized_bidisk
from .errors import (
    ConsistencyError,
    DomainError,
    HoloextError,
    IllConditionedError,
    InputError,
    RangeViolationError,
    SearchFailure,
    UnsupportedDomainError,
)
from .hyperbolic import Datum, caratheodory_search, kobayashi_ball, rho
from .operator_model import build_model, evaluate_poly, operator_norm
from .pick import gram, is_psd, minimal_sup_norm, pick_matrix
from .polys import AnalyticDisc, BoundaryFunctional, Poly, PolyMap, VectorPolyMap

__version__ = "0.1.0"

__all__ = [
    "domains", "extension_lab", "hyperbolic", "operator_model", "pick",
    "DomainSpec", "ball", "bidisk", "ellipsoid", "symmetrized_bidisk",
    "ConsistencyError", "DomainError", "HoloextError", "IllConditionedError", "InputError",
    "RangeViolationError", "SearchFailure", "UnsupportedDomainError",
    "Datum", "caratheodory_search", "kobayashi_ball", "rho",
    "build_model", "evaluate_poly", "operator_norm",
    "gram", "is_psd", "minimal_sup_norm", "pick_matrix",
    "AnalyticDisc", "BoundaryFunctional", "Poly", "PolyMap", "VectorPolyMap",
]
