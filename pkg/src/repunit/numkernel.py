"""Arithmetic substrate: modular powers, sieving, probable-prime tests,
bounded factoring and multiplicative orders.

Everything here is a pure function of its arguments.  The strong-pseudoprime
witness schedule is fixed (the first primes, in order), so a verdict never
depends on the run, the process or the shard that computed it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

try:
    import gmpy2
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    gmpy2 = None

# Deterministic Miller-Rabin with the first 13 primes as bases is exact
# below this bound (Sorenson & Webster).
DETERMINISTIC_BOUND = 3317044064679887385961981
WITNESS_SCHEDULE = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
SMALL_PRIMES_BOUND = 1000
DEFAULT_TRIAL_BOUND = 10**5
DEFAULT_ROUNDS = 4


class Effort(str, enum.Enum):
    LOW = "low"
    DEFAULT = "default"
    HIGH = "high"


# Pollard-Brent iteration budget per effort level; LOW means trial division only.
RHO_BUDGET = {Effort.LOW: 0, Effort.DEFAULT: 200_000, Effort.HIGH: 4_000_000}


class Verdict(str, enum.Enum):
    COMPOSITE = "composite-with-witness"
    PROBABLE_PRIME = "probable-prime"
    PROVEN_PRIME = "proven-prime-below-sieve-bound"
    UNIT = "unit"


class NotCoprimeError(ValueError):
    pass


class NotComputableError(ArithmeticError):
    """Raised when an answer would need a factorization we could not finish."""


@dataclass(frozen=True)
class ModulusContext:
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")


@dataclass(frozen=True)
class PrimalityVerdict:
    value: int
    verdict: Verdict
    witness: int | None = None
    # "factor" or "base": what kind of evidence the witness is
    witness_kind: str | None = None

    @property
    def is_prime(self) -> bool:
        return self.verdict in (Verdict.PROBABLE_PRIME, Verdict.PROVEN_PRIME)


@dataclass(frozen=True)
class OrderResult:
    base: int
    modulus: int
    order: int


@dataclass
class Factorization:
    value: int
    factors: dict[int, int] = field(default_factory=dict)
    remainder: int = 1
    # None when remainder == 1, else "probable-prime" or "composite"
    remainder_status: str | None = None

    @property
    def complete(self) -> bool:
        return self.remainder == 1

    def product(self) -> int:
        out = self.remainder
        for p, e in self.factors.items():
            out *= p**e
        return out


def pow_mod(base: int, exponent: int, ctx: ModulusContext | int) -> int:
    """base**exponent mod m by square-and-multiply (GMP when available)."""
    m = ctx.modulus if isinstance(ctx, ModulusContext) else ctx
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if exponent < 0:
        raise ValueError("negative exponent")
    if gmpy2 is not None and m.bit_length() > 512:
        return int(gmpy2.powmod(base, exponent, m))
    return pow(base, exponent, m)


def primes_up_to(bound: int) -> list[int]:
    """Sieve of Eratosthenes: all primes <= bound, ascending."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, bound + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


@lru_cache(maxsize=None)
def _small_primes(bound: int) -> tuple[int, ...]:
    return tuple(primes_up_to(bound))


def _strong_probable_prime(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow_mod(base, d, n)
    if x == 1 or x == n - 1:
        return True
    if gmpy2 is not None and n.bit_length() > 512:
        x, n_ = gmpy2.mpz(x), gmpy2.mpz(n)
    else:
        n_ = n
    for _ in range(s - 1):
        x = x * x % n_
        if x == n_ - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge's parameters (D = 5, -7, 9, -11, ...)."""
    if math.isqrt(n) ** 2 == n:
        return False
    if gmpy2 is not None:
        return bool(gmpy2.is_strong_selfridge_prp(n))
    d = 5
    while _jacobi(d, n) != -1:
        d = -d - 2 if d > 0 else -d + 2
    p, q = 1, (1 - d) // 4
    k, s = n + 1, 0
    while k % 2 == 0:
        k //= 2
        s += 1
    # binary ladder for U_k, V_k
    u, v, qk = 0, 2, 1
    inv2 = (n + 1) // 2
    for bit in bin(k)[2:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) * inv2 % n, (d * u + p * v) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_probable_prime(value: int, rounds: int = DEFAULT_ROUNDS) -> PrimalityVerdict:
    """Classify ``value``.

    Below DETERMINISTIC_BOUND the answer is exact.  Above it: trial division by
    primes below SMALL_PRIMES_BOUND, ``rounds`` strong-pseudoprime tests with
    the fixed WITNESS_SCHEDULE, then a strong Lucas test.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if value < 0:
        raise ValueError("value must be >= 0")
    if value == 0:
        return PrimalityVerdict(0, Verdict.COMPOSITE)
    if value == 1:
        return PrimalityVerdict(1, Verdict.UNIT)
    for p in _small_primes(SMALL_PRIMES_BOUND):
        if value == p:
            return PrimalityVerdict(value, Verdict.PROVEN_PRIME)
        if value % p == 0:
            return PrimalityVerdict(value, Verdict.COMPOSITE, p, "factor")
    if value < SMALL_PRIMES_BOUND**2:
        return PrimalityVerdict(value, Verdict.PROVEN_PRIME)
    if value < DETERMINISTIC_BOUND:
        for base in WITNESS_SCHEDULE:
            if not _strong_probable_prime(value, base):
                return PrimalityVerdict(value, Verdict.COMPOSITE, base, "base")
        return PrimalityVerdict(value, Verdict.PROVEN_PRIME)
    for base in WITNESS_SCHEDULE[: min(rounds, len(WITNESS_SCHEDULE))]:
        if not _strong_probable_prime(value, base):
            return PrimalityVerdict(value, Verdict.COMPOSITE, base, "base")
    if not _strong_lucas_probable_prime(value):
        return PrimalityVerdict(value, Verdict.COMPOSITE)
    return PrimalityVerdict(value, Verdict.PROBABLE_PRIME)


def is_prime(value: int) -> bool:
    return is_probable_prime(value).is_prime


def _brent_rho(n: int, c: int, budget: int) -> int | None:
    """One Pollard-Brent run with f(x) = x^2 + c; returns a proper factor or None."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    spent = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        spent += r
        if spent > budget:
            return None
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if 1 < g < n else None


def _split(n: int, budget: int, out: dict[int, int]) -> list[int]:
    """Split n with rho; record prime pieces in ``out``, return unsplit pieces."""
    if n == 1:
        return []
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return []
    for c in (1, 3, 5, 7):
        g = _brent_rho(n, c, budget)
        if g is not None:
            return _split(g, budget, out) + _split(n // g, budget, out)
    return [n]


def bounded_factor(
    value: int,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    effort: Effort | str = Effort.DEFAULT,
) -> Factorization:
    """Trial division up to ``trial_bound``, then a budgeted Pollard-Brent stage.

    At LOW effort there is no second stage and the leftover cofactor is only
    classified.  The product of the returned prime powers and the remainder is
    always ``value``.
    """
    if value < 1:
        raise ValueError("value must be >= 1")
    effort = Effort(effort)
    result = Factorization(value)
    n = value
    n_is_prime = True
    for p in _small_primes(trial_bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            result.factors[p] = e
    else:
        # all primes <= trial_bound removed; n is prime only below the next square
        n_is_prime = n < (trial_bound + 1) ** 2
    if n > 1 and n_is_prime:
        result.factors[n] = result.factors.get(n, 0) + 1
        n = 1
    if n > 1 and RHO_BUDGET[effort]:
        found: dict[int, int] = {}
        leftovers = _split(n, RHO_BUDGET[effort], found)
        for p, e in found.items():
            result.factors[p] = result.factors.get(p, 0) + e
        n = math.prod(leftovers)
    result.factors = dict(sorted(result.factors.items()))
    result.remainder = n
    if n > 1:
        result.remainder_status = "probable-prime" if is_prime(n) else "composite"
    return result


def carmichael_lambda(factors: dict[int, int]) -> int:
    """Carmichael exponent of the group of units mod prod(p**e)."""
    lam = 1
    for p, e in factors.items():
        if p == 2:
            part = 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        lam = lam * part // math.gcd(lam, part)
    return lam


def _full_factor(n: int, effort: Effort) -> dict[int, int]:
    fac = bounded_factor(n, effort=effort)
    if not fac.complete:
        if fac.remainder_status == "probable-prime":
            fac.factors[fac.remainder] = fac.factors.get(fac.remainder, 0) + 1
        else:
            raise NotComputableError(f"could not factor {n} at effort {effort.value}")
    return fac.factors


def multiplicative_order(
    base: int, ctx: ModulusContext | int, effort: Effort | str = Effort.DEFAULT
) -> OrderResult:
    """Least d >= 1 with base**d == 1 mod m.

    Factors the modulus to get its Carmichael exponent, factors that, and
    strips prime factors off the exponent while the power stays 1.
    """
    m = ctx.modulus if isinstance(ctx, ModulusContext) else ModulusContext(ctx).modulus
    if math.gcd(base, m) != 1:
        raise NotCoprimeError(f"gcd({base}, {m}) != 1")
    effort = Effort(effort)
    lam = carmichael_lambda(_full_factor(m, effort))
    order = lam
    for p in _full_factor(lam, effort) if lam > 1 else {}:
        while order % p == 0 and pow_mod(base, order // p, m) == 1:
            order //= p
    return OrderResult(base, m, order)


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in the integer n != 0."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e
