"""Compositeness screens and bounded searches around repunits.

The ``*_item`` functions each handle one index of a scan and return a plain
JSON-ready dict; ``repunit.scanning`` shards, checkpoints and merges them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (
    digit_count,
    generalized_fermat_value,
    initial_value,
    render_value,
    repunit_value,
)
from .numkernel import (
    DEFAULT_ROUNDS,
    Effort,
    PrimalityVerdict,
    Verdict,
    _small_primes,
    bounded_factor,
    is_prime,
    is_probable_prime,
    pow_mod,
)

DEFAULT_SIEVE_X_BOUND = 10**4
DEFAULT_SCAN_X_BOUND = 10**3
DEFAULT_Q_BOUND = 10**5
SCREEN_TRIAL_BOUND = 10**4

# Structured candidate count and the largest E_{p-1,p-1} (in digits) that
# gets a compositeness test, per effort level.
EPP_X_BOUND = {Effort.LOW: 10**3, Effort.DEFAULT: 10**4, Effort.HIGH: 10**5}
EPP_TEST_DIGITS = {Effort.LOW: 1000, Effort.DEFAULT: 5000, Effort.HIGH: None}

COMPOSITE_BY_RULE = "composite-by-rule"
COMPOSITE_WITH_FACTOR = "composite-with-factor"
COMPOSITE_BY_TEST = "composite-by-test"
PROBABLE_PRIME = "probable-prime"
UNRESOLVED = "unresolved"


class InvariantViolation(AssertionError):
    """A proven property failed at runtime: a bug, not a discovery."""


class OutOfHypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class ScreenVerdict:
    subject: str
    verdict: str
    rule: int | None = None
    factor: int | None = None
    evidence: dict = field(default_factory=dict)

    def to_payload(self) -> dict:
        out = {"subject": self.subject, "verdict": self.verdict}
        if self.rule is not None:
            out["rule"] = self.rule
        if self.factor is not None:
            out["factor"] = render_value(self.factor)
        out.update(self.evidence)
        return out


@dataclass(frozen=True)
class Hit:
    """q = 1 + 2px divides R_p."""

    p: int
    x: int
    q: int


def _check_factor(subject: str, value: int, factor: int):
    if not 1 < factor < value or value % factor:
        raise InvariantViolation(f"{factor} is not a proper divisor of {subject}")


def compositeness_rule(n: int, k: int) -> tuple[int, int] | None:
    """First matching compositeness rule for E_{n,k} and the divisor its proof exhibits."""
    if n % 2 == 1:
        t = (n + 1) // 2
        return 1, initial_value((t - 1, k))
    if k % 2 == 1:
        t = (k + 1) // 2
        return 2, initial_value((n, t - 1))
    if (n + 1) % 3 == 0:
        return 3, 3
    if math.gcd(n + 1, k + 1) == 1:
        return 4, repunit_value(n + 1)
    return None


def screen_initial(n: int, k: int, effort: Effort | str = Effort.DEFAULT) -> ScreenVerdict:
    """Classify E_{n,k} for n > 1, k > 0.

    Rules are tried in order 1-4 and the first match wins.  Otherwise trial
    division, then a probable-prime test; primality is never claimed.
    """
    if n <= 1 or k <= 0:
        raise OutOfHypothesisError(
            f"E_{{{n},{k}}} is outside n > 1, k > 0 (k = 0: repunits, n = 1: generalized Fermat)"
        )
    effort = Effort(effort)
    subject = f"E_{n},{k}"
    value = initial_value((n, k))
    matched = compositeness_rule(n, k)
    if matched is not None:
        rule, divisor = matched
        _check_factor(subject, value, divisor)
        return ScreenVerdict(subject, COMPOSITE_BY_RULE, rule, divisor)
    for q in _small_primes(SCREEN_TRIAL_BOUND):
        if q >= value:
            break
        if value % q == 0:
            return ScreenVerdict(subject, COMPOSITE_WITH_FACTOR, factor=q)
    return _test_verdict(subject, value, DEFAULT_ROUNDS)


def _test_verdict(subject: str, value: int, rounds: int) -> ScreenVerdict:
    v = is_probable_prime(value, rounds)
    if v.is_prime:
        return ScreenVerdict(subject, PROBABLE_PRIME, evidence={"test": v.verdict.value})
    if v.witness_kind == "factor":
        _check_factor(subject, value, v.witness)
        return ScreenVerdict(subject, COMPOSITE_WITH_FACTOR, factor=v.witness)
    return ScreenVerdict(subject, COMPOSITE_BY_TEST, evidence={"base": v.witness})


def confirm_composite(value: int, effort: Effort | str = Effort.DEFAULT) -> bool:
    """Independent confirmation by bounded factoring: a nontrivial split was found."""
    fac = bounded_factor(value, trial_bound=SCREEN_TRIAL_BOUND, effort=effort)
    pieces = sum(fac.factors.values()) + (fac.remainder > 1)
    return pieces >= 2 or fac.remainder_status == "composite"


def sieve_divisors(p: int, x_bound: int = DEFAULT_SIEVE_X_BOUND, first_only: bool = False) -> list[Hit]:
    """Primes q = 1 + 2px (1 <= x <= x_bound) dividing R_p."""
    if p <= 3 or not is_prime(p):
        raise ValueError(f"p must be a prime > 3, got {p}")
    hits = []
    step = 2 * p
    q = 1
    for x in range(1, x_bound + 1):
        q += step
        if pow(10, p, q) == 1 and is_prime(q):
            hits.append(Hit(p, x, q))
            if first_only:
                break
    return hits


def prime_repunit_item(p: int, x_bound: int = DEFAULT_SCAN_X_BOUND, rounds: int = DEFAULT_ROUNDS) -> dict:
    """Primality verdict for R_p, with a structured factor when the sieve finds one."""
    out = {"index": p, "digits": p}
    if p > 3:
        hits = sieve_divisors(p, x_bound, first_only=True)
        if hits:
            h = hits[0]
            if h.q % (2 * p) != 1:
                raise InvariantViolation(f"factor {h.q} of R_{p} is not 1 mod {2 * p}")
            out.update(verdict=Verdict.COMPOSITE.value, witness=h.q, witness_kind="factor", x=h.x)
            return out
    v = is_probable_prime(repunit_value(p), rounds)
    out.update(verdict=v.verdict.value, witness=v.witness, witness_kind=v.witness_kind)
    if v.witness_kind == "factor" and p > 3 and v.witness % (2 * p) != 1:
        raise InvariantViolation(f"factor {v.witness} of R_{p} is not 1 mod {2 * p}")
    return out


def scan_prime_repunits(max_index: int, x_bound: int = DEFAULT_SCAN_X_BOUND) -> list[tuple[int, PrimalityVerdict]]:
    """R_p for every prime p <= max_index; composite indices are skipped."""
    if max_index < 2:
        raise ValueError("max_index must be >= 2")
    out = []
    for p in _small_primes(max_index):
        rec = prime_repunit_item(p, x_bound)
        out.append((p, PrimalityVerdict(repunit_value(p), Verdict(rec["verdict"]), rec["witness"], rec["witness_kind"])))
    return out


def divisors_item(p: int, x_bound: int = DEFAULT_SIEVE_X_BOUND) -> dict:
    hits = sieve_divisors(p, x_bound)
    for h in hits:
        if h.q % (2 * p) != 1:
            raise InvariantViolation(f"factor {h.q} of R_{p} is not 1 mod {2 * p}")
    return {"p": p, "x_bound": x_bound, "hits": [[h.x, h.q] for h in hits]}


def probe_squarefree(p: int, q_bound: int = DEFAULT_Q_BOUND) -> list[int]:
    """Primes q <= q_bound with q^2 | R_p.

    An empty list means squarefree up to q_bound only.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return [q for q in _small_primes(q_bound) if q not in (2, 5) and pow(10, p, 9 * q * q) == 1]


def squarefree_item(p: int, q_bound: int = DEFAULT_Q_BOUND) -> dict:
    hits = probe_squarefree(p, q_bound)
    return {
        "p": p,
        "q_bound": q_bound,
        "square_divisors": hits,
        "verdict": "counterexample" if hits else "squarefree-up-to-bound",
    }


def probe_epp(p: int, effort: Effort | str = Effort.DEFAULT) -> ScreenVerdict:
    """Look for a factor of E_{p-1,p-1} = R_(p^2) / R_p, then test it.

    A prime q dividing the quotient but not R_p has ord_q(10) = p^2, hence
    q == 1 (mod lcm(2, p^2)); those candidates are tried first.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    effort = Effort(effort)
    subject = f"E_{p - 1},{p - 1}"
    value = initial_value((p - 1, p - 1))
    step = p * p if p == 2 else 2 * p * p
    sq = p * p
    q = 1
    for x in range(1, EPP_X_BOUND[effort] + 1):
        q += step
        if q >= value:
            break
        if pow(10, sq, q) == 1 and pow(10, p, q) != 1 and is_prime(q):
            _check_factor(subject, value, q)
            return ScreenVerdict(subject, COMPOSITE_WITH_FACTOR, factor=q, evidence={"x": x, "step": step})
    cap = EPP_TEST_DIGITS[effort]
    digits = digit_count(value)
    if cap is not None and digits > cap:
        return ScreenVerdict(subject, UNRESOLVED, evidence={"digits": digits, "test_digit_cap": cap})
    return _test_verdict(subject, value, rounds=1)


def epp_item(p: int, effort: str = Effort.DEFAULT.value) -> dict:
    out = {"p": p}
    out.update(probe_epp(p, effort).to_payload())
    if p == 2:
        # E_1,1 = 101 is prime; the compositeness question concerns odd p
        out["flag"] = "even-prime"
    return out


def fermat_item(n: int, base: int = 10, rounds: int = DEFAULT_ROUNDS) -> dict:
    v = is_probable_prime(generalized_fermat_value(n, base), rounds)
    return {
        "n": n,
        "base": base,
        "verdict": v.verdict.value,
        "witness": v.witness,
        "witness_kind": v.witness_kind,
    }


def scan_generalized_fermat(base: int, max_n: int) -> list[tuple[int, PrimalityVerdict]]:
    if base <= 2 or base % 2:
        raise ValueError(f"base must be even and > 2, got {base}")
    return [(n, is_probable_prime(generalized_fermat_value(n, base))) for n in range(max_n + 1)]


def sophie_germain_check(p: int) -> dict:
    """For p > 5 with 2p + 1 prime: exactly one of R_p, (10^p + 1)/11 is divisible by 2p + 1."""
    if p <= 5 or not is_prime(p):
        raise ValueError(f"p must be a prime > 5, got {p}")
    q = 2 * p + 1
    if not is_prime(q):
        return {"p": p, "q": q, "verdict": "not-applicable"}
    residue = pow_mod(10, p, q)
    in_repunit = residue == 1
    in_plus = residue == q - 1
    if in_repunit == in_plus:
        raise InvariantViolation(f"10^{p} mod {q} = {residue}, neither +1 nor -1")
    return {"p": p, "q": q, "residue": residue, "verdict": "R_p" if in_repunit else "R_p+"}
