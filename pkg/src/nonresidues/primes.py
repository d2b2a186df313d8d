"""Prime and multiplicative-function plumbing used across the package.

Everything here is exact integer arithmetic.  Sieves are numpy bool arrays;
factorization is trial division with a Pollard-rho (Brent) fallback that
gives up loudly when its effort budget is exhausted.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Deterministic Miller-Rabin with the witness set below is correct for all
# n < 3.3 * 10^24, far above anything this package scans.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

TRIAL_DIVISION_LIMIT = 10**7
RHO_ITERATION_BUDGET = 10**7


class FactorizationError(RuntimeError):
    """Raised when a factorization exceeds the configured effort budget."""


def is_prime(n: int) -> bool:
    """Deterministic primality test for n below ~3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    """Primes in [lo, hi] via a segmented sieve (memory ~ hi - lo)."""
    if hi < 2 or hi < lo:
        return np.array([], dtype=np.int64)
    lo = max(lo, 2)
    base = sieve(math.isqrt(hi))
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in base:
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start > hi:
            continue
        flags[start - lo :: p] = False
        if lo <= p <= hi:
            flags[p - lo] = True
    return np.flatnonzero(flags).astype(np.int64) + lo


def iter_primes() -> Iterator[int]:
    """Unbounded increasing prime stream (segment-by-segment sieve)."""
    yield 2
    yield 3
    lo = 5
    width = 1 << 16
    while True:
        for p in primes_in_range(lo, lo + width - 1):
            yield int(p)
        lo += width
        width = min(2 * width, 1 << 22)


def _pollard_brent(n: int, seed: int = 1) -> int:
    """One Brent-cycle attempt at a nontrivial factor of odd composite n."""
    if n % 2 == 0:
        return 2
    y, c, m = seed % n + 1, seed % (n - 1) + 1, 128
    g = r = q = 1
    x = ys = y
    count = 0
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
            count += m
            if count > RHO_ITERATION_BUDGET:
                raise FactorizationError(f"factor search budget exhausted for {n}")
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def factorize(n: int, trial_limit: int = TRIAL_DIVISION_LIMIT) -> dict[int, int]:
    """Prime factorization {p: exponent} of n >= 1.

    Trial division up to trial_limit, then Pollard rho; raises
    FactorizationError if the rho budget runs out.
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)  # wheel mod 30
    i = 0
    while f * f <= n and f <= trial_limit:
        if n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        else:
            f += steps[i]
            i = (i + 1) % 8
    if n == 1:
        return out
    if f * f > n:
        out[n] = out.get(n, 0) + 1
        return out
    # n still composite beyond the trial range: recurse through rho splits
    stack = [n]
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = m
        seed = 1
        while d == m:
            d = _pollard_brent(m, seed)
            seed += 1
            if seed > 20:
                raise FactorizationError(f"could not split {m}")
        stack.extend((d, m // d))
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted."""
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    r = n
    for p in factorize(n):
        r = r // p * (p - 1)
    return r


def totient_sieve(limit: int) -> np.ndarray:
    """phi(a) for a = 0..limit as an int64 array (phi(0) set to 0)."""
    phi = np.arange(limit + 1, dtype=np.int64)
    phi[0] = 0
    for p in range(2, limit + 1):
        if phi[p] == p:  # p is prime
            phi[p::p] -= phi[p::p] // p
    return phi
