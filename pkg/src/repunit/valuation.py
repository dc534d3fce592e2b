"""3-adic and 11-adic valuations of repunits, prime-power divisor lemmas,
and the checker for the conjectured closed form of gcd(R_ab, R_a R_b).

p^e | R_a  <=>  9 p^e | 10^a - 1  <=>  10^a == 1 (mod 9 p^e), for every
prime p.  For p not in {2, 3, 5} this is also 10^a == 1 (mod p^e); for p = 3
the factor 9 matters.  All oracles here work modulo 9 p^e, so nothing of size
R_a is ever built.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import repunit_value
from .numkernel import is_prime, pow_mod
from .numkernel import valuation as int_valuation

ORACLE_DIGITS = 200_000
# auxiliary_rn_check needs 11^n as an exponent; keep it modest.
MAX_AUX_N = 200
# max power of q a lemma check may work modulo
MAX_MODULUS_BITS = 1 << 16

LEMMA1 = "lemma1"
LEMMA3_ODD = "lemma3-odd"
LEMMA3_EVEN = "lemma3-even"
ORACLE_ONLY = "oracle-only"


class HypothesisViolatedError(ValueError):
    pass


class BudgetExceededError(ValueError):
    pass


class BoundExceededError(ValueError):
    pass


@dataclass(frozen=True)
class ValuationReport:
    index: int
    prime: int
    predicted: int | None
    oracle: int
    lemma: str

    @property
    def agrees(self) -> bool:
        return self.predicted is None or self.predicted == self.oracle


@dataclass(frozen=True)
class AuxiliaryRn:
    n: int
    valuation: int
    expected: int
    materialized: bool

    @property
    def holds(self) -> bool:
        return self.valuation == self.expected


@dataclass(frozen=True)
class LemmaVerdict:
    lemma: str
    p: int
    q: int
    index: int
    modulus_power: int
    holds: bool


@dataclass(frozen=True)
class ConjectureRecord:
    a: int
    b: int
    d: int
    L: int
    S: int
    c: int
    formula: str  # "c-odd" or "c-even", by parity of c
    predicted: int
    actual: int
    verdict: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "verdict", "match" if self.predicted == self.actual else "counterexample")


def repunit_divisible(a: int, q: int, e: int = 1) -> bool:
    """Whether q^e divides R_a, via 10^a mod 9 q^e."""
    return pow_mod(10, a, 9 * q**e) == 1


def oracle_valuation(a: int, p: int) -> int:
    """v_p(R_a) by raising e until 10^a stops being 1 mod 9 p^(e+1)."""
    if a < 1:
        raise ValueError("index must be >= 1")
    if p in (2, 5):
        return 0
    e = 0
    while repunit_divisible(a, p, e + 1):
        e += 1
    return e


def valuation_3(a: int) -> ValuationReport:
    """v_3(R_a) = v_3(a)."""
    if a < 1:
        raise ValueError("index must be >= 1")
    return ValuationReport(a, 3, int_valuation(a, 3), oracle_valuation(a, 3), LEMMA1)


def valuation_11(a: int) -> ValuationReport:
    """v_11(R_a) is 0 for odd a and v_11(a) + 1 for even a."""
    if a < 1:
        raise ValueError("index must be >= 1")
    if a % 2:
        predicted, tag = 0, LEMMA3_ODD
    else:
        predicted, tag = int_valuation(a, 11) + 1, LEMMA3_EVEN
    return ValuationReport(a, 11, predicted, oracle_valuation(a, 11), tag)


def valuation_any(a: int, p: int) -> ValuationReport:
    if p == 3:
        return valuation_3(a)
    if p == 11:
        return valuation_11(a)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return ValuationReport(a, p, None, oracle_valuation(a, p), ORACLE_ONLY)


def auxiliary_rn_check(n: int, materialize_upto: int = 3) -> AuxiliaryRn:
    """11-adic valuation of r_n = 10^(11^n) + 1; expected n + 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > MAX_AUX_N:
        raise BudgetExceededError(f"n = {n} exceeds the budget {MAX_AUX_N}")
    if n <= materialize_upto:
        v = int_valuation(10 ** (11**n) + 1, 11)
        return AuxiliaryRn(n, v, n + 1, True)
    top = n + 2
    m = 11**top
    residue = (pow_mod(10, 11**n, m) + 1) % m
    v = top if residue == 0 else int_valuation(residue, 11)
    return AuxiliaryRn(n, v, n + 1, False)


def _require_prime(x: int, name: str):
    if not is_prime(x):
        raise ValueError(f"{name} = {x} is not prime")


def lemma4_check(p: int, q: int, r_bound: int, n_bound: int) -> list[LemmaVerdict]:
    """Given q || R_p: q^2 never divides R_pr (0 < r < q) nor R_(p^n)."""
    _require_prime(p, "p")
    _require_prime(q, "q")
    if not repunit_divisible(p, q):
        raise HypothesisViolatedError(f"{q} does not divide R_{p}")
    if repunit_divisible(p, q, 2):
        raise HypothesisViolatedError(f"{q}^2 divides R_{p}")
    out = []
    for r in range(1, min(q, r_bound)):
        out.append(LemmaVerdict("lemma4.1", p, q, p * r, 2, not repunit_divisible(p * r, q, 2)))
    for n in range(1, n_bound + 1):
        out.append(LemmaVerdict("lemma4.2", p, q, p**n, 2, not repunit_divisible(p**n, q, 2)))
    return out


def lemma5_check(p: int, q: int, n: int) -> LemmaVerdict:
    """Given q | R_p: q^(n+1) divides R_(p q^n)."""
    _require_prime(p, "p")
    _require_prime(q, "q")
    if n < 0:
        raise ValueError("n must be >= 0")
    if not repunit_divisible(p, q):
        raise HypothesisViolatedError(f"{q} does not divide R_{p}")
    if (n + 1) * q.bit_length() > MAX_MODULUS_BITS:
        raise BudgetExceededError(f"{q}^{n + 1} exceeds the modulus budget")
    index = p * q**n
    return LemmaVerdict("lemma5", p, q, index, n + 1, repunit_divisible(index, q, n + 1))


def decompose(d: int) -> tuple[int, int, int]:
    """d = 3^L 11^S c with c prime to 33."""
    L = int_valuation(d, 3)
    S = int_valuation(d, 11)
    return L, S, d // (3**L * 11**S)


def conjectured_gcd(a: int, b: int) -> tuple[int, str]:
    """The conjectured value of gcd(R_ab, R_a R_b) and which formula gave it."""
    d = math.gcd(a, b)
    L, S, c = decompose(d)
    base = repunit_value(a) * repunit_value(b) // repunit_value(d) * 3**L
    if c % 2:
        return base, "c-odd"
    return base * 11**S, "c-even"


def conjecture_check(a: int, b: int, oracle_digits: int = ORACLE_DIGITS) -> ConjectureRecord:
    """Compare the conjectured gcd(R_ab, R_a R_b) with the Euclidean one."""
    if a < 1 or b < 1:
        raise ValueError("indices must be >= 1")
    if a * b > oracle_digits:
        raise BoundExceededError(f"a*b = {a * b} exceeds oracle bound {oracle_digits} digits")
    d = math.gcd(a, b)
    L, S, c = decompose(d)
    predicted, formula = conjectured_gcd(a, b)
    actual = math.gcd(repunit_value(a * b), repunit_value(a) * repunit_value(b))
    return ConjectureRecord(a, b, d, L, S, c, formula, predicted, actual)
