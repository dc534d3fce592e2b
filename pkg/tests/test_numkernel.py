import math
import random
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repunit import numkernel
from repunit.core import repunit_value
from repunit.numkernel import (
    Effort,
    ModulusContext,
    NotComputableError,
    NotCoprimeError,
    Verdict,
    bounded_factor,
    carmichael_lambda,
    is_probable_prime,
    multiplicative_order,
    pow_mod,
    primes_up_to,
)


def brute_order(b, m):
    x, d = b % m, 1
    while x != 1:
        x = x * b % m
        d += 1
    return d


def naive_primes(n):
    flags = [True] * (n + 1)
    flags[:2] = [False, False][: n + 1]
    for i in range(2, n + 1):
        if flags[i]:
            for j in range(2 * i, n + 1, i):
                flags[j] = False
    return flags


def test_modulus_context_rejects_small():
    with pytest.raises(ValueError):
        ModulusContext(1)


@pytest.mark.parametrize(
    "base, exp, mod, expected",
    [(10, 3, 7, 6), (10, 0, 97, 1), (10, 41, 83, 1)],
)
def test_pow_mod_examples(base, exp, mod, expected):
    assert pow_mod(base, exp, ModulusContext(mod)) == expected
    assert 1000 == 142 * 7 + 6


def test_pow_mod_big_modulus_matches_builtin():
    m = repunit_value(300) + 2
    assert pow_mod(3, 10**40 + 7, m) == pow(3, 10**40 + 7, m)


@pytest.mark.parametrize("mod, expected", [(3, 1), (7, 6), (11, 2)])
def test_multiplicative_order_examples(mod, expected):
    res = multiplicative_order(10, ModulusContext(mod))
    assert res.order == expected == brute_order(10, mod)


def test_multiplicative_order_not_coprime():
    with pytest.raises(NotCoprimeError):
        multiplicative_order(10, 15)


def test_multiplicative_order_refuses_unfactorable(monkeypatch):
    def stuck(n, trial_bound=0, effort=Effort.DEFAULT):
        return numkernel.Factorization(n, {}, n, "composite")

    monkeypatch.setattr(numkernel, "bounded_factor", stuck)
    with pytest.raises(NotComputableError):
        multiplicative_order(10, 91)


def test_multiplicative_order_against_brute_force():
    rng = random.Random(7)
    for _ in range(400):
        m = rng.randrange(2, 5000)
        b = rng.randrange(1, 10**6)
        if math.gcd(b, m) != 1:
            continue
        assert multiplicative_order(b, m).order == brute_order(b, m)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10**12), st.integers(2, 10**9))
def test_order_is_minimal(m, b):
    if math.gcd(b, m) != 1:
        return
    order = multiplicative_order(b, m).order
    assert pow_mod(b, order, m) == 1
    lam = carmichael_lambda(bounded_factor(m).factors)
    assert lam % order == 0
    for s in bounded_factor(order).factors:
        assert pow_mod(b, order // s, m) != 1


@pytest.mark.parametrize(
    "factors, expected",
    [({2: 1}, 1), ({2: 3}, 2), ({2: 5}, 8), ({3: 2, 239: 2}, 6 * 239 * 238 // math.gcd(6, 239 * 238))],
)
def test_carmichael_lambda(factors, expected):
    assert carmichael_lambda(factors) == expected


def test_is_probable_prime_examples():
    assert is_probable_prime(11).verdict is Verdict.PROVEN_PRIME
    assert is_probable_prime(repunit_value(19)).verdict in (Verdict.PROBABLE_PRIME, Verdict.PROVEN_PRIME)
    v = is_probable_prime(111)
    assert v.verdict is Verdict.COMPOSITE and v.witness == 3 and v.witness_kind == "factor"


def test_zero_and_one_are_not_prime():
    zero, one = is_probable_prime(0), is_probable_prime(1)
    assert zero.verdict is Verdict.COMPOSITE and zero.witness is None
    assert one.verdict is Verdict.UNIT
    assert not zero.is_prime and not one.is_prime


def test_large_repunit_primes_are_probable_not_proven():
    v = is_probable_prime(repunit_value(317))
    assert v.verdict is Verdict.PROBABLE_PRIME


def test_agrees_with_trial_division_below_million():
    truth = naive_primes(10**6 - 1)
    for n in range(10**6):
        assert is_probable_prime(n).is_prime == truth[n], n


@pytest.mark.parametrize(
    "n",
    # strong pseudoprimes to several small bases, Carmichael numbers
    [2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321,
     3825123056546413051, 318665857834031151167461, 561, 41041, 825265],
)
def test_known_pseudoprimes_are_composite(n):
    assert not is_probable_prime(n).is_prime


def test_composite_above_bound_gets_base_witness():
    n = repunit_value(23) * repunit_value(19)
    v = is_probable_prime(n)
    assert v.verdict is Verdict.COMPOSITE and v.witness_kind == "base"


def test_verdicts_reproducible_across_threads():
    values = [repunit_value(p) for p in primes_up_to(120)] + list(range(10**9, 10**9 + 200))
    serial = [is_probable_prime(v) for v in values]
    with ThreadPoolExecutor(8) as pool:
        assert list(pool.map(is_probable_prime, values)) == serial


# Selfridge strong Lucas pseudoprimes: both implementations must call them probable primes.
LUCAS_PSEUDOPRIMES = [5459, 5777, 10877, 16109, 18971, 22499, 24569, 25199, 40309, 58519]


def test_lucas_fallback_matches_gmpy2(monkeypatch):
    reference = {n: numkernel._strong_lucas_probable_prime(n) for n in range(5, 30001, 2)}
    monkeypatch.setattr(numkernel, "gmpy2", None)
    for n, expected in reference.items():
        assert numkernel._strong_lucas_probable_prime(n) == expected, n
    for n in LUCAS_PSEUDOPRIMES:
        assert numkernel._strong_lucas_probable_prime(n)


def test_pure_python_path_matches(monkeypatch):
    values = [repunit_value(p) for p in (19, 23, 29, 31, 37, 317)]
    expected = [is_probable_prime(v).verdict for v in values]
    monkeypatch.setattr(numkernel, "gmpy2", None)
    assert [is_probable_prime(v).verdict for v in values] == expected


def test_bounded_factor_examples():
    r7 = bounded_factor(1111111, 10**4)
    assert r7.factors == {239: 1, 4649: 1} and r7.remainder == 1
    assert 239 * 4649 == 1111111

    one = bounded_factor(1)
    assert one.factors == {} and one.remainder == 1

    assert 9 * 37 * 333667 == 111111111
    for effort in Effort:
        r9 = bounded_factor(111111111, 10**3, effort)
        assert r9.product() == 111111111
        assert r9.factors in ({3: 2, 37: 1, 333667: 1}, {3: 2, 37: 1})
        if r9.factors == {3: 2, 37: 1}:
            assert r9.remainder == 333667 and r9.remainder_status == "probable-prime"


def test_bounded_factor_low_effort_leaves_flagged_remainder():
    n = 1000003 * 1000033 * 7
    low = bounded_factor(n, 100, Effort.LOW)
    assert low.factors == {7: 1}
    assert low.remainder == 1000003 * 1000033 and low.remainder_status == "composite"
    full = bounded_factor(n, 100, Effort.DEFAULT)
    assert full.factors == {7: 1, 1000003: 1, 1000033: 1} and full.complete


def test_bounded_factor_remultiplies_random_inputs():
    rng = random.Random(20261015)
    for _ in range(10**4):
        n = rng.randrange(1, 10**12)
        fac = bounded_factor(n)
        assert fac.product() == n
        for p in fac.factors:
            assert is_probable_prime(p).is_prime
        assert fac.remainder == 1 or fac.remainder_status is not None


@pytest.mark.parametrize(
    "bound, expected",
    [(10, [2, 3, 5, 7]), (1, []), (0, []), (2, [2]), (30, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29])],
)
def test_primes_up_to(bound, expected):
    assert primes_up_to(bound) == expected


def test_primes_up_to_matches_naive():
    truth = naive_primes(5000)
    assert primes_up_to(5000) == [i for i, f in enumerate(truth) if f]
