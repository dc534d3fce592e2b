import math

import pytest

from repunit.core import initial_value, repunit_value
from repunit.structure import (
    DivisorWitness,
    NotADivisorError,
    ProductRefusal,
    composite_index_witness,
    divisor_form_check,
    gcd_initial,
    gcd_initial_oracle,
    gcd_report,
    gcd_repunit_fast,
    gcd_repunit_oracle,
    prime_power_gcd_check,
    product_divisibility,
    repunit_exceeds_index,
)
from repunit.numkernel import bounded_factor, is_prime
from repunit.valuation import BoundExceededError


@pytest.mark.parametrize("a, b, idx", [(6, 4, 2), (7, 7, 7), (5, 9, 1)])
def test_gcd_fast_examples(a, b, idx):
    assert gcd_repunit_fast(a, b).n == idx
    assert math.gcd(repunit_value(a), repunit_value(b)) == repunit_value(idx)


def test_gcd_oracle_examples():
    assert gcd_repunit_oracle(6, 4) == 11
    assert all(gcd_repunit_oracle(1, n) == 1 for n in range(1, 50))
    assert gcd_repunit_oracle(12, 18) == 111111


def test_gcd_oracle_bound():
    with pytest.raises(BoundExceededError):
        gcd_repunit_oracle(10, 500, bound=100)


def test_theorem3_small_exhaustive():
    for a in range(1, 61):
        for b in range(1, 61):
            assert gcd_report(a, b).agreement is True


def test_gcd_report_not_checked():
    from repunit.structure import GcdReport

    assert GcdReport(1, 1, 1).agreement is None


@pytest.mark.parametrize("n, m, k, expected", [(3, 1, 1, 101), (2, 1, 0, 1)])
def test_gcd_initial_examples(n, m, k, expected):
    assert gcd_initial(n, m, k) == expected == gcd_initial_oracle(n, m, k)


def test_gcd_initial_self():
    for n in range(1, 10):
        for k in range(4):
            assert gcd_initial(n, n, k) == initial_value((n, k))


def test_theorem1_coprime_iff():
    for k in range(6):
        for n in range(2, 41):
            for m in range(1, n):
                oracle = gcd_initial_oracle(n, m, k)
                assert (oracle == 1) == (math.gcd(n + 1, m + 1) == 1)


def test_theorem1_divisibility():
    for k in range(6):
        for n in range(1, 41):
            for m in range(1, n + 1):
                if (n + 1) % (m + 1) == 0:
                    assert initial_value((n, k)) % initial_value((m, k)) == 0


@pytest.mark.parametrize("p, q", [(7, 239), (7, 4649), (41, 83)])
def test_divisor_form_examples(p, q):
    assert divisor_form_check(p, q)


def test_divisor_form_not_a_divisor():
    with pytest.raises(NotADivisorError):
        divisor_form_check(7, 83)
    with pytest.raises(ValueError):
        divisor_form_check(3, 37)


def test_divisor_form_on_every_factor():
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
        fac = bounded_factor(repunit_value(p))
        for q in fac.factors:
            assert divisor_form_check(p, q)


@pytest.mark.parametrize("p, k, t, s", [(7, 2, 1, 1), (5, 2, 1, 1), (11, 1, 1, 1)])
def test_prime_power_examples(p, k, t, s):
    rep = prime_power_gcd_check(p, k, t, s)
    assert rep.oracle_result == 1 and rep.agreement


def test_prime_power_preconditions():
    with pytest.raises(ValueError):
        prime_power_gcd_check(3, 2, 1, 1)
    with pytest.raises(ValueError):
        prime_power_gcd_check(7, 1, 2, 1)


def test_product_examples():
    w = product_divisibility(2, 3)
    assert isinstance(w, DivisorWitness) and w.quotient == 91 and w.divisor == 1221
    assert w.verify(111111)

    r = product_divisibility(2, 2)
    assert isinstance(r, ProductRefusal)
    assert (r.gcd_value, r.lower, r.upper) == (11, 11, 121) and r.bounds_hold
    assert math.gcd(1111, 121) == 11

    for n in range(1, 30):
        w = product_divisibility(1, n)
        assert isinstance(w, DivisorWitness) and w.quotient == 1


def test_product_refusal_reports_conjecture():
    r = product_divisibility(3, 3)
    assert r.conjectured == 333 and r.conjecture_formula == "c-odd" and r.conjecture_matches


def test_composite_index_witness():
    for n in range(4, 101):
        if is_prime(n):
            with pytest.raises(ValueError):
                composite_index_witness(n)
            continue
        w = composite_index_witness(n)
        assert 1 < w.divisor < repunit_value(n) and w.verify(repunit_value(n))


def test_repunit_exceeds_index():
    assert all(repunit_exceeds_index(x) for x in range(2, 10**6 + 1))
    # cross-check the digit-count argument on values small enough to build
    for x in range(2, 300):
        assert repunit_value(x) > x
