"""Exact arithmetic on repunits R_n = (10^n - 1)/9 and initial numbers E_{n,k}."""
from .core import (
    DigitRecord,
    InitialIndexPair,
    RepunitIndex,
    cofactor,
    initial_value,
    render_digit_record,
    repunit_plus_value,
    repunit_value,
)
from .numkernel import (
    Effort,
    ModulusContext,
    bounded_factor,
    is_probable_prime,
    multiplicative_order,
    pow_mod,
    primes_up_to,
)

__version__ = "0.1.0"
