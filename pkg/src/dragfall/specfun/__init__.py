"""Special functions and quadrature used throughout the package."""

from .airy import airy_ai, airy_ai_and_prime, airy_ai_prime, airy_zero, airy_zeros
from .dawson import dawson, dawson_derivatives, dawson_prime, erfi, ln_erfi
from .gamma import (
    digamma,
    digamma_diff_half,
    ln_gamma,
    ln_gamma_ratio_half,
    trigamma,
    trigamma_diff_half,
)
from .quadrature import QuadratureResult, QuadratureSpec, integrate_1d

__all__ = [
    "airy_ai",
    "airy_ai_prime",
    "airy_ai_and_prime",
    "airy_zero",
    "airy_zeros",
    "dawson",
    "dawson_prime",
    "dawson_derivatives",
    "erfi",
    "ln_erfi",
    "ln_gamma",
    "digamma",
    "trigamma",
    "ln_gamma_ratio_half",
    "digamma_diff_half",
    "trigamma_diff_half",
    "QuadratureSpec",
    "QuadratureResult",
    "integrate_1d",
]
