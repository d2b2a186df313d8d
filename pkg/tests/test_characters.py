import math

import pytest
from hypothesis import given, settings, strategies as st

from nonresidues import primes as pr
from nonresidues.characters import (
    DLOG_TABLE_THRESHOLD,
    CharacterSpec,
    DiscreteLogThresholdError,
    SearchCapExceededError,
    char_value,
    find_primitive_root,
    is_kernel,
    mod_pow,
    prime_nonresidues,
)


def naive_pow(a, e, p):
    r = 1 % p
    for _ in range(e):
        r = r * a % p
    return r


def test_mod_pow_examples():
    assert mod_pow(2, 0, 7) == 1
    assert mod_pow(3, 4, 5) == 1  # 81 mod 5
    assert mod_pow(10, 10**6, 17) == naive_pow(10, 10**6, 17)


@given(
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=0, max_value=2000),
    st.integers(min_value=2, max_value=97),
)
def test_mod_pow_matches_naive_loop(a, e, p):
    assert mod_pow(a, e, p) == naive_pow(a, e, p)


def test_mod_pow_validation():
    with pytest.raises(ValueError):
        mod_pow(2, 3, 1)
    with pytest.raises(ValueError):
        mod_pow(2, -1, 7)


def brute_force_order(a, p):
    x, k = a % p, 1
    while x != 1:
        x = x * a % p
        k += 1
    return k


def test_find_primitive_root_examples():
    assert find_primitive_root(7) == 3
    assert find_primitive_root(5) == 2
    assert find_primitive_root(3) == 2


def test_find_primitive_root_is_least_generator():
    for p in map(int, pr.sieve(200)):
        if p == 2:
            continue
        g = find_primitive_root(p)
        assert brute_force_order(g, p) == p - 1
        for smaller in range(2, g):
            assert brute_force_order(smaller, p) < p - 1


def test_find_primitive_root_rejects():
    with pytest.raises(ValueError):
        find_primitive_root(2)
    with pytest.raises(ValueError):
        find_primitive_root(10)


def test_character_spec_validation():
    with pytest.raises(ValueError):
        CharacterSpec.of_order(7, 4)  # 4 does not divide 6
    with pytest.raises(ValueError):
        CharacterSpec.of_order(9, 2)  # 9 not prime
    with pytest.raises(ValueError):
        CharacterSpec(p=7, d=2, g=2, m=3)  # 2 is not a primitive root mod 7
    with pytest.raises(ValueError):
        CharacterSpec(p=7, d=3, g=3, m=3)  # m=3 gives order 2, not 3


def test_char_value_quadratic_mod_7():
    spec = CharacterSpec.of_order(7, 2)
    squares = {a * a % 7 for a in range(1, 7)}
    assert squares == {1, 2, 4}
    assert char_value(spec, 3).t == 1
    assert char_value(spec, 7).is_zero
    assert char_value(spec, 1).t == 0
    for a in range(1, 7):
        assert (char_value(spec, a).t == 0) == (a in squares)


def test_char_value_negative_and_large_arguments():
    spec = CharacterSpec.of_order(11, 5)
    for a in (-1, -13, 123456789):
        assert char_value(spec, a).t == char_value(spec, a % 11).t


def test_char_value_multiplicative():
    for p in map(int, pr.sieve(100)):
        if p == 2:
            continue
        for d in pr.divisors(p - 1):
            if d < 2:
                continue
            spec = CharacterSpec.of_order(p, d)
            for a in range(1, p):
                for b in range(1, p):
                    lhs = char_value(spec, a * b % p).t
                    rhs = (char_value(spec, a).t + char_value(spec, b).t) % d
                    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([int(p) for p in pr.sieve(500) if p > 2]), st.data())
def test_char_value_multiplicative_sampled(p, data):
    ds = [d for d in pr.divisors(p - 1) if d >= 2]
    d = data.draw(st.sampled_from(ds))
    a = data.draw(st.integers(min_value=1, max_value=p - 1))
    b = data.draw(st.integers(min_value=1, max_value=p - 1))
    spec = CharacterSpec.of_order(p, d)
    assert char_value(spec, a * b % p).t == (
        char_value(spec, a).t + char_value(spec, b).t
    ) % d


def test_character_has_exact_order():
    for p, d in ((7, 2), (7, 3), (7, 6), (11, 5), (13, 4), (31, 15)):
        spec = CharacterSpec.of_order(p, d)
        values = {char_value(spec, a).t for a in range(1, p)}
        assert values == set(range(d))  # all of Z/d is hit
        # exact order: some value is a primitive d-th root exponent
        assert any(math.gcd(t, d) == 1 for t in values)


def test_char_value_threshold_error_points_to_is_kernel():
    big = 1000003
    assert pr.is_prime(big) and big > DLOG_TABLE_THRESHOLD
    spec = CharacterSpec.of_order(big, 2)
    with pytest.raises(DiscreteLogThresholdError, match="is_kernel"):
        char_value(spec, 17)
    # the kernel path keeps working far beyond the table threshold
    assert is_kernel(big, 2, 17) in (True, False)


def test_is_kernel_examples():
    assert is_kernel(7, 2, 2) is True  # 2^3 = 8 = 1 mod 7
    assert is_kernel(7, 2, 3) is False  # 3^3 = 27 = 6 mod 7
    assert is_kernel(101, 4, 1) is True
    with pytest.raises(ValueError):
        is_kernel(7, 4, 2)
    with pytest.raises(ValueError):
        is_kernel(7, 2, 14)


def test_is_kernel_matches_char_value():
    for p, d in ((13, 2), (13, 3), (13, 12), (29, 7)):
        spec = CharacterSpec.of_order(p, d)
        for q in range(1, p):
            assert is_kernel(p, d, q) == (char_value(spec, q).t == 0)


def test_kernel_density():
    for p, d in ((101, 2), (101, 4), (101, 25), (97, 3), (31, 6)):
        count = sum(1 for a in range(1, p) if is_kernel(p, d, a))
        assert count == (p - 1) // d


def test_prime_nonresidues_examples():
    assert prime_nonresidues(7, 2, 3) == [3, 5, 13]
    assert prime_nonresidues(5, 2, 2) == [2, 3]
    assert prime_nonresidues(7, 2, 0) == []


def test_prime_nonresidues_skips_p_itself():
    # mod 3: every prime != 3 with residue 2 is a nonresidue; 3 is skipped
    q = prime_nonresidues(3, 2, 3)
    assert q == [2, 5, 11]
    assert 3 not in q


def test_prime_nonresidues_exhaustive_against_sieve():
    for p in (7, 23, 101, 997):
        got = prime_nonresidues(p, 2, 5)
        assert got == sorted(got) and len(set(got)) == 5
        expected = [
            q for q in map(int, pr.sieve(got[-1]))
            if q != p and not is_kernel(p, 2, q)
        ]
        assert got == expected  # no smaller prime qualifies


def test_prime_nonresidues_large_modulus():
    q = prime_nonresidues(10**6 + 3, 2, 4)
    assert all(pr.is_prime(x) for x in q)
    assert q == sorted(q)


def test_prime_nonresidues_cap():
    with pytest.raises(SearchCapExceededError) as exc:
        prime_nonresidues(1000003, 2, 50, search_cap=20)
    assert exc.value.cap == 20
    assert exc.value.found == prime_nonresidues(1000003, 2, len(exc.value.found))


def test_prime_nonresidues_validation():
    with pytest.raises(ValueError):
        prime_nonresidues(7, 4, 1)
    with pytest.raises(ValueError):
        prime_nonresidues(7, 2, -1)
