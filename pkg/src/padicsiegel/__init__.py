"""Exact computational machinery for p-adic standard L-functions of Siegel
Eisenstein families: capped-precision p-adic and cyclotomic arithmetic,
Dirichlet characters and Gauss sums, Kubota-Leopoldt values, half-integral
quadratic forms and Siegel-series polynomials, Eisenstein coefficient
families, the ordinary projector, and the trivial-zero derivative engine.
"""

from .errors import (ConvergenceError, DomainError, PadicSiegelError,
                     PoleError, PrecisionError, UnsupportedCharacterError)
from .padic import PAdic, angle, exponent_l, padic_log, teichmuller
from .cyclotomic import CycNumber, root_of_unity

__all__ = [
    "ConvergenceError", "DomainError", "PadicSiegelError", "PoleError",
    "PrecisionError", "UnsupportedCharacterError",
    "PAdic", "angle", "exponent_l", "padic_log", "teichmuller",
    "CycNumber", "root_of_unity",
]
