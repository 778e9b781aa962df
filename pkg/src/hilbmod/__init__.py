"""Numerical experiments on Hilbert modules over the disc algebra.

Truncated Hardy and Lebesgue spaces, polynomial functional calculus,
extension operators, Z-space profiles, model spaces and CAR-based
counterexamples.
"""

from . import extensions, funcalc, model_space, pisier, spaces, zspaces
from .errors import (ConstructionError, HilbmodError, HypothesisFailure, ResourceBoundError,
                     ShapeError, UnsupportedSpaceError)

__version__ = "0.1.0"

__all__ = [
    "spaces", "funcalc", "extensions", "zspaces", "model_space", "pisier",
    "HilbmodError", "UnsupportedSpaceError", "ShapeError", "HypothesisFailure",
    "ConstructionError", "ResourceBoundError",
]
