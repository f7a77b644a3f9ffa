"""Exact elementary number theory on explicit prime factorizations.

Everything here is deterministic and pure: Miller-Rabin with a fixed
witness set (exact for inputs below 3.3e24), trial division backed by a
small prime sieve, and totient / Moebius / divisor computations driven by
a validated factorization object.  Python integers are arbitrary
precision, so all arithmetic is exact at any size this package handles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "PrimeFactorization",
    "factorize",
    "is_prime",
    "phi",
    "mu",
    "divisors",
    "primes_in",
]

# Deterministic Miller-Rabin witness set, exact for n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
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


def primes_in(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi, ascending."""
    if lo > hi:
        raise ValueError(f"empty range: lo={lo} > hi={hi}")
    lo = max(lo, 2)
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(hi) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(lo, hi + 1) if sieve[p]]


_SMALL_PRIMES = tuple(primes_in(2, 1000))


@dataclass(frozen=True)
class PrimeFactorization:
    """A positive integer as an ascending tuple of (prime, exponent) pairs.

    The empty tuple represents 1.  Instances are validated on construction
    and hashable, so they can key caches.
    """

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev = 1
        for p, e in self.factors:
            if p <= prev:
                raise ValueError(f"primes must be strictly ascending, got {self.factors}")
            if e < 1:
                raise ValueError(f"exponents must be >= 1, got {self.factors}")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p

    @property
    def n(self) -> int:
        """The represented integer."""
        return math.prod(p**e for p, e in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.factors)

    @property
    def tau(self) -> int:
        """Number of divisors."""
        return math.prod(e + 1 for _, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


@lru_cache(maxsize=None)
def factorize(n: int) -> PrimeFactorization:
    """Factor n >= 1 by trial division (1 gives the empty product)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}; need n >= 1")
    rest = n
    out: list[tuple[int, int]] = []

    def strip(p: int) -> None:
        nonlocal rest
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            out.append((p, e))

    for p in _SMALL_PRIMES:
        if p * p > rest:
            break
        strip(p)
    if rest > 1 and not is_prime(rest):
        d, step = 1001, 2  # continue past the sieve on the 6k+-1 wheel
        while d * d <= rest:
            strip(d)
            if is_prime(rest):
                break
            d += step
            step = 6 - step
    if rest > 1:
        out.append((rest, 1))
    return PrimeFactorization(tuple(out))


def phi(f: PrimeFactorization) -> int:
    """Euler totient; phi(1) = 1."""
    return math.prod(p ** (e - 1) * (p - 1) for p, e in f.factors)


def mu(f: PrimeFactorization) -> int:
    """Moebius function: 0 on non-squarefree, else (-1)^(prime count)."""
    if any(e >= 2 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def divisors(f: PrimeFactorization) -> list[int]:
    """All divisors, ascending; length equals f.tau."""
    out = [1]
    for p, e in f.factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)
