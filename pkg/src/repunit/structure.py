"""gcd and divisibility identities for repunits and initial numbers.

Each identity has a fast path (index arithmetic only) and an oracle that
materializes the numbers and runs Euclid, so the two can be cross-checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import RepunitIndex, cofactor, initial_value, repunit_value
from .numkernel import is_prime, primes_up_to
from .valuation import ORACLE_DIGITS, BoundExceededError, conjectured_gcd, repunit_divisible


class NotADivisorError(ValueError):
    pass


@dataclass(frozen=True)
class GcdReport:
    a: int
    b: int
    fast_result: int
    oracle_result: int | None = None

    @property
    def agreement(self) -> bool | None:
        if self.oracle_result is None:
            return None
        return self.fast_result == self.oracle_result


@dataclass(frozen=True)
class DivisorWitness:
    subject: str
    divisor: int
    quotient: int

    def verify(self, value: int) -> bool:
        return self.divisor * self.quotient == value


@dataclass(frozen=True)
class ProductRefusal:
    """gcd(a, b) > 1: R_a R_b does not divide R_ab; the two-sided bound instead."""

    a: int
    b: int
    gcd_value: int
    lower: int  # R_a R_b / R_(a,b)
    upper: int  # R_a R_b
    conjectured: int
    conjecture_formula: str

    @property
    def bounds_hold(self) -> bool:
        return self.lower <= self.gcd_value < self.upper

    @property
    def conjecture_matches(self) -> bool:
        return self.conjectured == self.gcd_value


def witness(subject: str, value: int, divisor: int) -> DivisorWitness:
    q, r = divmod(value, divisor)
    if r:
        raise NotADivisorError(f"{divisor} does not divide {subject}")
    return DivisorWitness(subject, divisor, q)


def _check_bound(digits: int, bound: int):
    if digits > bound:
        raise BoundExceededError(f"{digits} digits exceeds oracle bound {bound}")


def gcd_repunit_fast(a: int, b: int) -> RepunitIndex:
    """gcd(R_a, R_b) = R_gcd(a,b); returns the index only."""
    if a < 1 or b < 1:
        raise ValueError("indices must be >= 1")
    return RepunitIndex(math.gcd(a, b))


def gcd_repunit_oracle(a: int, b: int, bound: int = ORACLE_DIGITS) -> int:
    if a < 1 or b < 1:
        raise ValueError("indices must be >= 1")
    _check_bound(max(a, b), bound)
    return math.gcd(repunit_value(a), repunit_value(b))


def gcd_report(a: int, b: int, bound: int = ORACLE_DIGITS) -> GcdReport:
    fast = repunit_value(gcd_repunit_fast(a, b))
    return GcdReport(a, b, fast, gcd_repunit_oracle(a, b, bound))


def gcd_initial(n: int, m: int, k: int) -> int:
    """gcd(E_{n,k}, E_{m,k}) = E_{gcd(n+1, m+1) - 1, k}."""
    if n < 1 or m < 1 or k < 0:
        raise ValueError("need n, m >= 1 and k >= 0")
    return initial_value((math.gcd(n + 1, m + 1) - 1, k))


def gcd_initial_oracle(n: int, m: int, k: int, bound: int = ORACLE_DIGITS) -> int:
    _check_bound((max(n, m) + 1) * (k + 1), bound)
    return math.gcd(initial_value((n, k)), initial_value((m, k)))


def divisor_form_check(p: int, q: int) -> bool:
    """For a prime q dividing R_p (p > 3 prime): is q of the form 1 + 2px?"""
    if p <= 3 or not is_prime(p):
        raise ValueError(f"p must be a prime > 3, got {p}")
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if not repunit_divisible(p, q):
        raise NotADivisorError(f"{q} does not divide R_{p}")
    return q % (2 * p) == 1


def prime_power_gcd_check(p: int, k: int, t: int, s: int, bound: int = ORACLE_DIGITS) -> GcdReport:
    """gcd(R_(p^k) / R_(p^t), R_(p^s)) is 1 for p > 3."""
    if p <= 3 or not is_prime(p):
        raise ValueError(f"p must be a prime > 3, got {p}")
    if not (k >= t >= s >= 1):
        raise ValueError(f"need k >= t >= s >= 1, got ({k}, {t}, {s})")
    _check_bound(p**k, bound)
    quotient = cofactor(p**k, p**t)
    return GcdReport(p**k, p**s, 1, math.gcd(quotient, repunit_value(p**s)))


def product_divisibility(a: int, b: int, bound: int = ORACLE_DIGITS) -> DivisorWitness | ProductRefusal:
    """R_a R_b divides R_ab exactly when gcd(a, b) = 1."""
    if a < 1 or b < 1:
        raise ValueError("indices must be >= 1")
    _check_bound(a * b, bound)
    ra, rb, rab = repunit_value(a), repunit_value(b), repunit_value(a * b)
    d = math.gcd(a, b)
    if d == 1:
        return witness(f"R_{a * b}", rab, ra * rb)
    conjectured, formula = conjectured_gcd(a, b)
    return ProductRefusal(
        a, b, math.gcd(rab, ra * rb), ra * rb // repunit_value(d), ra * rb, conjectured, formula
    )


def composite_index_witness(n: int) -> DivisorWitness:
    """For composite n, R_d divides R_n where d is the least prime factor of n."""
    for d in primes_up_to(math.isqrt(n)):
        if n % d == 0:
            return witness(f"R_{n}", repunit_value(n), repunit_value(d))
    raise ValueError(f"{n} is not composite")


def repunit_exceeds_index(x: int) -> bool:
    """(10^x - 1)/9 > x, from digit counts alone.

    R_x has x digits, so R_x >= 10^(x-1); x has len(str(x)) digits, so
    x < 10^len(str(x)).  len(str(x)) <= x - 1 is therefore enough.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    return len(str(x)) <= x - 1
