import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewy.arith import (
    cyclotomic_value,
    digit_sum,
    digit_value,
    divisors,
    euler_phi,
    factorize,
    iroot,
    is_pierpont_prime,
    is_prime,
    moebius,
    mult_order,
    order_dividing,
    prime_power_base,
    qadic_expand,
)
from loewy.errors import CapacityError, DomainError


def test_qadic_expand_examples():
    assert qadic_expand(7592, 3) == [2, 1, 0, 2, 0, 1, 1, 0, 1]
    assert sum(qadic_expand(7592, 3)) == 8
    assert qadic_expand(0, 5) == []
    assert qadic_expand(10**4 - 1, 10) == [9, 9, 9, 9]


def test_qadic_expand_rejects_bad_base():
    with pytest.raises(DomainError):
        qadic_expand(5, 1)
    with pytest.raises(DomainError):
        digit_sum(5, 0)


def test_digit_sum_examples():
    assert digit_sum(7592, 3) == 8
    assert digit_sum(0, 7) == 0
    assert digit_sum(7, 2) == 3


@given(st.integers(0, 10**12), st.integers(2, 1000))
def test_expand_round_trip(x, q):
    digits = qadic_expand(x, q)
    assert all(0 <= d < q for d in digits)
    assert not digits or digits[-1] != 0
    assert digit_value(digits, q) == x


@given(st.integers(0, 10**9), st.integers(0, 10**9), st.integers(2, 97))
def test_digit_sum_additive_without_carries(x, y, q):
    dx, dy = qadic_expand(x, q), qadic_expand(y, q)
    length = max(len(dx), len(dy))
    dx += [0] * (length - len(dx))
    dy += [0] * (length - len(dy))
    if all(a + b < q for a, b in zip(dx, dy)):
        assert digit_sum(x + y, q) == digit_sum(x, q) + digit_sum(y, q)


def test_mult_order_examples():
    assert mult_order(3, 11) == 5
    assert mult_order(2, 7) == 3
    assert mult_order(1, 97) == 1
    assert mult_order(5, 1) == 1
    with pytest.raises(DomainError):
        mult_order(6, 9)


@given(st.integers(1, 2000), st.integers(1, 2000))
@settings(max_examples=200)
def test_mult_order_divides_phi(a, modulus):
    from math import gcd

    if gcd(a, modulus) != 1:
        return
    assert euler_phi(modulus) % mult_order(a, modulus) == 0


def test_order_dividing_matches_mult_order():
    assert order_dividing(3, 11, 10) == 5
    big = (9**15 - 1) // 5551
    assert pow(9, order_dividing(9, big, 15), big) == 1
    with pytest.raises(DomainError):
        order_dividing(2, 11, 7)  # ord_11(2) = 10 does not divide 7


def test_arithmetic_functions():
    assert euler_phi(11**2) == 110
    assert moebius(12) == 0
    assert moebius(30) == -1
    assert moebius(1) == 1
    assert factorize(531440) == {2: 4, 5: 1, 7: 1, 13: 1, 73: 1}
    assert factorize(1) == {}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    with pytest.raises(DomainError):
        factorize(0)


def test_is_prime_deterministic_range():
    assert is_prime(380808546861411923)  # 18-digit prime within 64-bit range
    assert not is_prime(1)
    assert not is_prime(3215031751)  # strong pseudoprime to first four bases
    with pytest.raises(CapacityError):
        is_prime(1 << 65)


def test_cyclotomic_values():
    assert cyclotomic_value(5, 3) == 121
    assert cyclotomic_value(6, 2) == 3
    assert cyclotomic_value(12, 5) == 601
    assert cyclotomic_value(1, 7) == 6


def test_cyclotomic_product_identity():
    for q in range(2, 21):
        for n in range(1, 41):
            prod = 1
            for d in divisors(n):
                prod *= cyclotomic_value(d, q)
            assert prod == q**n - 1


def test_pierpont_primes():
    assert is_pierpont_prime(17)
    assert not is_pierpont_prime(11)
    assert is_pierpont_prime(2)
    assert is_pierpont_prime(3) and is_pierpont_prime(5)
    assert not is_pierpont_prime(15)
    known = [p for p in range(2, 200) if is_pierpont_prime(p)]
    assert known == [2, 3, 5, 7, 13, 17, 19, 37, 73, 97, 109, 163, 193]


def test_iroot_and_prime_power_base():
    assert iroot(10**18, 2) == 10**9
    assert iroot(2**63 - 1, 63) == 1
    assert prime_power_base(2**10) == (2, 10)
    assert prime_power_base(11**3) == (11, 3)
    assert prime_power_base(1) is None
    assert prime_power_base(12) is None
    assert prime_power_base(97) == (97, 1)
