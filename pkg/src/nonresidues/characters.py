"""Exact Dirichlet-character arithmetic to a prime modulus.

A character of order d mod a prime p is realized concretely: pick a
primitive root g, pick an exponent m with (p-1)/gcd(m, p-1) = d, and set
chi(g^k) = e^(2 pi i m k / (p-1)).  Values are kept exact as residue
classes t mod d, standing for the root of unity e^(2 pi i t / d); no
floating point enters until a caller asks for a complex value.

The kernel of an order-d character mod p is exactly the set of d-th power
residues, so membership is a single modular exponentiation
q^((p-1)/d) == 1 (mod p) and never needs a discrete logarithm.  That is
what makes smallest-prime-nonresidue computations cheap for large p; full
discrete-log tables are only built for small p, where the character-sum
oracles need arbitrary values of chi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from . import primes as pr

__all__ = [
    "CharacterSpec",
    "CharacterValue",
    "DiscreteLogThresholdError",
    "SearchCapExceededError",
    "char_value",
    "find_primitive_root",
    "is_kernel",
    "mod_pow",
    "prime_nonresidues",
]

# Full index tables cost O(p) memory; beyond this, use is_kernel instead.
DLOG_TABLE_THRESHOLD = 10**6

DEFAULT_SEARCH_CAP = 10**6


class DiscreteLogThresholdError(RuntimeError):
    """Modulus too large for an index table; kernel tests don't need one."""


class SearchCapExceededError(RuntimeError):
    """Nonresidue search hit its cap before finding enough primes."""

    def __init__(self, p: int, d: int, cap: int, found: list[int]):
        super().__init__(
            f"found only {len(found)} prime nonresidues for (p={p}, d={d}) "
            f"below cap {cap}"
        )
        self.p = p
        self.d = d
        self.cap = cap
        self.found = found


def mod_pow(a: int, e: int, p: int) -> int:
    """a^e mod p, result in [0, p)."""
    if p < 2:
        raise ValueError(f"modulus must be >= 2, got {p}")
    if e < 0:
        raise ValueError(f"exponent must be >= 0, got {e}")
    return pow(a, e, p)


def find_primitive_root(p: int) -> int:
    """Least g >= 2 generating the multiplicative group mod an odd prime p."""
    if p == 2:
        raise ValueError("p = 2 has a trivial unit group; no root to find")
    if not pr.is_prime(p):
        raise ValueError(f"{p} is not prime")
    q_list = list(pr.factorize(p - 1))
    exponents = [(p - 1) // q for q in q_list]
    for g in range(2, p):
        if all(pow(g, e, p) != 1 for e in exponents):
            return g
    raise AssertionError(f"no primitive root found for prime {p}")


@dataclass(frozen=True)
class CharacterValue:
    """A character value: zero, or the root of unity e^(2 pi i t / d)."""

    t: int | None
    d: int

    @property
    def is_zero(self) -> bool:
        return self.t is None

    @property
    def is_one(self) -> bool:
        return self.t == 0

    def as_complex(self) -> complex:
        if self.t is None:
            return 0j
        return complex(
            math.cos(2.0 * math.pi * self.t / self.d),
            math.sin(2.0 * math.pi * self.t / self.d),
        )


@dataclass(frozen=True)
class CharacterSpec:
    """A Dirichlet character mod prime p of order d, via primitive root g.

    chi(g^k) = e^(2 pi i m k / (p-1)); the order condition is
    (p-1)/gcd(m, p-1) = d.
    """

    p: int
    d: int
    g: int
    m: int

    def __post_init__(self) -> None:
        if not pr.is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.d < 2 or (self.p - 1) % self.d != 0:
            raise ValueError(f"order d={self.d} does not divide p-1={self.p - 1}")
        if (self.p - 1) // math.gcd(self.m, self.p - 1) != self.d:
            raise ValueError(
                f"exponent m={self.m} gives order "
                f"{(self.p - 1) // math.gcd(self.m, self.p - 1)}, expected {self.d}"
            )
        q_list = list(pr.factorize(self.p - 1))
        if any(pow(self.g, (self.p - 1) // q, self.p) == 1 for q in q_list):
            raise ValueError(f"g={self.g} is not a primitive root mod {self.p}")

    @classmethod
    def of_order(cls, p: int, d: int, g: int | None = None) -> "CharacterSpec":
        """The canonical character of order d mod p: m = (p-1)/d."""
        if g is None:
            g = find_primitive_root(p)
        if d < 2 or (p - 1) % d != 0:
            raise ValueError(f"order d={d} does not divide p-1={p - 1}")
        return cls(p=p, d=d, g=g, m=(p - 1) // d)

    @cached_property
    def _index_table(self) -> list[int]:
        """ind[a] = discrete log of a base g, for a in [1, p)."""
        if self.p > DLOG_TABLE_THRESHOLD:
            raise DiscreteLogThresholdError(
                f"p={self.p} exceeds the index-table threshold "
                f"{DLOG_TABLE_THRESHOLD}; use is_kernel for membership tests"
            )
        ind = [0] * self.p
        x = 1
        for k in range(self.p - 1):
            ind[x] = k
            x = x * self.g % self.p
        return ind

    def value_table(self) -> list[int | None]:
        """t-values for all residues 0..p-1 (None at 0); one pass, exact."""
        step = self.m * self.d // (self.p - 1)  # t advances by this per g-step
        table: list[int | None] = [None] * self.p
        x = 1
        t = 0
        for _ in range(self.p - 1):
            table[x] = t
            x = x * self.g % self.p
            t = (t + step) % self.d
        return table


def char_value(spec: CharacterSpec, a: int) -> CharacterValue:
    """chi(a) as an exact root-of-unity exponent t mod d (zero if p | a).

    Needs the index table, hence p below the table threshold; callers that
    only care whether chi(a) = 1 should use is_kernel, which works for any p.
    """
    p, d = spec.p, spec.d
    a_mod = a % p
    if a_mod == 0:
        return CharacterValue(t=None, d=d)
    k = spec._index_table[a_mod]
    t_full = spec.m * k % (p - 1)
    # order d forces t_full to be a multiple of (p-1)/d
    return CharacterValue(t=t_full * d // (p - 1) % d, d=d)


def is_kernel(p: int, d: int, q: int) -> bool:
    """True iff q is a d-th power residue mod p, i.e. chi(q) = 1 for any
    character of order d mod p.  Tested as q^((p-1)/d) == 1 (mod p)."""
    if d < 1 or (p - 1) % d != 0:
        raise ValueError(f"order d={d} does not divide p-1={p - 1}")
    if q % p == 0:
        raise ValueError(f"q={q} is divisible by the modulus {p}")
    return pow(q, (p - 1) // d, p) == 1


def prime_nonresidues(
    p: int, d: int, count: int, search_cap: int = DEFAULT_SEARCH_CAP
) -> list[int]:
    """The `count` smallest prime nonresidues of an order-d character mod p.

    A prime q != p is a nonresidue iff it is not a d-th power residue; this
    depends only on (p, d).  Primes are taken from an incremental sieve; if
    the cap is reached first, SearchCapExceededError reports the partial
    list.
    """
    if d < 2 or (p - 1) % d != 0:
        raise ValueError(f"order d={d} invalid for p={p}")
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    out: list[int] = []
    if count == 0:
        return out
    for q in pr.iter_primes():
        if q > search_cap:
            raise SearchCapExceededError(p, d, search_cap, out)
        if q == p:
            continue
        if not is_kernel(p, d, q):
            out.append(q)
            if len(out) == count:
                return out
    raise AssertionError("unreachable: prime stream is unbounded")
