import math

import pytest
from hypothesis import given, strategies as st

from nonresidues import primes as pr


def trial_division_primes(limit):
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
    return out


def test_sieve_matches_trial_division():
    assert list(pr.sieve(1000)) == trial_division_primes(1000)
    assert list(pr.sieve(1)) == []
    assert list(pr.sieve(2)) == [2]


def test_segmented_sieve_matches_full_sieve():
    full = [p for p in pr.sieve(5000) if 1234 <= p <= 4321]
    assert list(pr.primes_in_range(1234, 4321)) == full
    assert list(pr.primes_in_range(0, 10)) == [2, 3, 5, 7]
    assert list(pr.primes_in_range(20, 10)) == []
    # segment starting beyond the base primes
    assert list(pr.primes_in_range(10**6, 10**6 + 100)) == [
        p for p in map(int, pr.sieve(10**6 + 100)) if p >= 10**6
    ]


def test_iter_primes_prefix():
    import itertools

    got = list(itertools.islice(pr.iter_primes(), 1000))
    assert got == [int(p) for p in pr.sieve(8000)][:1000]


@given(st.integers(min_value=1, max_value=10**6))
def test_factorize_roundtrip(n):
    fac = pr.factorize(n)
    assert math.prod(p**e for p, e in fac.items()) == n
    assert all(pr.is_prime(p) for p in fac)


def test_factorize_large_semiprime():
    n = 1000003 * 999983
    assert pr.factorize(n) == {999983: 1, 1000003: 1}


def test_is_prime_small_oracle():
    known = set(trial_division_primes(2000))
    for n in range(2000):
        assert pr.is_prime(n) == (n in known)


def test_is_prime_carmichael_and_large():
    assert not pr.is_prime(561)  # Carmichael
    assert not pr.is_prime(341550071728321)
    assert pr.is_prime(2**61 - 1)


def test_divisors():
    assert pr.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert pr.divisors(1) == [1]
    assert pr.divisors(97) == [1, 97]


@given(st.integers(min_value=1, max_value=3000))
def test_euler_phi_matches_gcd_count(n):
    assert pr.euler_phi(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_totient_sieve_matches_euler_phi():
    phi = pr.totient_sieve(500)
    assert phi[0] == 0
    for n in range(1, 501):
        assert int(phi[n]) == pr.euler_phi(n)


def test_errors():
    with pytest.raises(ValueError):
        pr.factorize(0)
    with pytest.raises(ValueError):
        pr.euler_phi(0)
