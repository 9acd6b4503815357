"""Exact arithmetic substrate: valuations, primes, factoring, polynomials."""

from . import gfp
from .ntheory import (
    FactorBudget,
    Factorization,
    as_fraction,
    euler_symbol,
    factor,
    format_rational,
    is_prime,
    is_square,
    legendre,
    primes_between,
    primes_up_to,
    rational_height,
    residue_mod,
    squarefree_part,
    v_p,
)
from .poly import QPoly, disc_direct, int_poly_mul, int_resultant, product_over_roots, resultant

__all__ = [
    "FactorBudget",
    "Factorization",
    "QPoly",
    "as_fraction",
    "disc_direct",
    "euler_symbol",
    "factor",
    "format_rational",
    "gfp",
    "int_poly_mul",
    "int_resultant",
    "is_prime",
    "is_square",
    "legendre",
    "primes_between",
    "primes_up_to",
    "product_over_roots",
    "rational_height",
    "residue_mod",
    "resultant",
    "squarefree_part",
    "v_p",
]
