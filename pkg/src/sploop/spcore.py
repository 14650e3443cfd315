"""Definitional layer: primality, factorization, and SP membership.

A square-prime (SP) number is n = p * k**2 with p prime and k >= 2.
Equivalently, n has exactly one prime factor with odd exponent and is not
itself prime. This module is the slow, trusted route; bulk generation lives
in the sieve module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# Witness set proven deterministic for every n < 2**64.
_MR_BASES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97,
)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64.

    Strong-pseudoprime test against a fixed witness set; exact over the
    full 64-bit range, no probabilistic answers.
    """
    if n < 0 or n >= 1 << 64:
        raise DomainError(f"primality is certified only for 0 <= n < 2**64, got {n}")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        a %= n
        if a == 0:
            continue
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


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of composite n (Brent's cycle variant).

    Deterministic: the polynomial constant c walks 1, 2, 3, ... so repeated
    runs factor identically.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        y, r, q = 2, 1, 1
        g, x, ys = 1, 2, 2
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"factor search exhausted for {n}")  # pragma: no cover


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise DomainError(f"factorization needs n >= 1, got {n}")
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        d = _pollard_brent(m)
        stack.extend((d, m // d))
    return factors


@dataclass(frozen=True)
class SpDecomposition:
    """The unique (p, k) with n = p * k**2, p prime, k >= 2."""

    n: int
    p: int
    k: int


def sp_decompose(n: int) -> SpDecomposition | None:
    """Return the unique prime-times-square decomposition, or None.

    Uses the exactly-one-odd-exponent characterization: if a single prime p
    carries an odd exponent, then n = p * k**2 with k = sqrt(n / p), and
    k >= 2 exactly when n is not the prime p itself.
    """
    if n < 0:
        raise DomainError(f"SP membership is defined for n >= 0, got {n}")
    if n <= 1:
        return None
    factors = factorize(n)
    odd = [p for p, e in factors.items() if e % 2 == 1]
    if len(odd) != 1:
        return None
    p = odd[0]
    if n == p:
        return None
    k = math.isqrt(n // p)
    return SpDecomposition(n=n, p=p, k=k)


def is_sp(n: int) -> bool:
    """True iff n is a square-prime number (n = p * k**2, k >= 2)."""
    return sp_decompose(n) is not None
