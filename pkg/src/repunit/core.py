"""Repunits, initial numbers and digit records, materialized on demand.

Indices are the unit of identity; values are built only when asked for and
memoized per index.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

try:
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None

# Values with more digits than this are shown abbreviated in reports.
DEFAULT_TRUNCATE_DIGITS = 64
_EDGE = 8


class InvalidIndexError(ValueError):
    """Invalid repunit / initial-number index."""


class EmptyRecordError(ValueError):
    pass


class NonExactDivisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DigitRecord:
    """``block`` written ``repetitions`` times, followed by ``suffix``."""

    block: str
    repetitions: int
    suffix: str = ""

    def __post_init__(self):
        if self.repetitions < 0:
            raise ValueError("repetitions must be >= 0")
        for part in (self.block, self.suffix):
            if part and not part.isdigit():
                raise ValueError(f"not a digit string: {part!r}")


@dataclass(frozen=True)
class RepunitIndex:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidIndexError(f"repunit index must be >= 1, got {self.n} (R_0 is undefined)")


@dataclass(frozen=True)
class InitialIndexPair:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise InvalidIndexError(f"initial-number indices must be >= 0, got ({self.n}, {self.k})")


def _n(idx: RepunitIndex | int) -> int:
    return RepunitIndex(idx).n if isinstance(idx, int) else idx.n


@lru_cache(maxsize=4096)
def _repunit(n: int) -> int:
    return (10**n - 1) // 9


def repunit_value(idx: RepunitIndex | int) -> int:
    """R_n = (10^n - 1) / 9, the number written with n ones."""
    return _repunit(_n(idx))


def initial_value(idx: InitialIndexPair | tuple[int, int]) -> int:
    """E_{n,k}: '1' + k zeros, n times, then a closing '1'.

    Computed as (10^((k+1)(n+1)) - 1) / (10^(k+1) - 1).
    """
    if not isinstance(idx, InitialIndexPair):
        idx = InitialIndexPair(*idx)
    step = idx.k + 1
    return (10 ** (step * (idx.n + 1)) - 1) // (10**step - 1)


def render_digit_record(rec: DigitRecord) -> str:
    out = rec.block * rec.repetitions + rec.suffix
    if not out:
        raise EmptyRecordError("the empty record has no numeric value")
    return out


def repunit_plus_value(p: int) -> int:
    """(10^p + 1) / 11, exact for odd p."""
    if p < 1:
        raise InvalidIndexError(f"index must be >= 1, got {p}")
    if p % 2 == 0:
        raise NonExactDivisionError(f"11 does not divide 10^{p} + 1 for even p")
    return (10**p + 1) // 11


def cofactor(a: RepunitIndex | int, d: RepunitIndex | int) -> int:
    """R_a / R_d for d | a, i.e. the sum of 10^(d*i) for 0 <= i < a/d."""
    a, d = _n(a), _n(d)
    if a % d:
        raise NonExactDivisionError(f"{d} does not divide {a}")
    return (10**a - 1) // (10**d - 1)


def generalized_fermat_value(n: int, base: int = 10) -> int:
    """f_n(a) = a^(2^n) + 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return base ** (2**n) + 1


def decimal(value: int) -> str:
    """Exact decimal digits; not subject to the interpreter's int-to-str limit."""
    if gmpy2 is not None:
        return gmpy2.mpz(value).digits(10)
    return "%d" % value  # pragma: no cover


def digit_count(value: int) -> int:
    return len(decimal(value))


def render_value(value: int, limit: int | None = DEFAULT_TRUNCATE_DIGITS) -> str:
    """Decimal digits, abbreviated to lead...trail when longer than ``limit``."""
    s = decimal(value)
    if limit is None or len(s) <= limit:
        return s
    return f"{s[:_EDGE]}...{s[-_EDGE:]}"


def describe(label: str, value: int, limit: int | None = DEFAULT_TRUNCATE_DIGITS) -> dict:
    """Report form of a value: label, digit count, and (possibly abbreviated) digits."""
    s = decimal(value)
    return {
        "subject": label,
        "digits": len(s),
        "value": render_value(value, limit),
        "truncated": limit is not None and len(s) > limit,
    }
