"""Exact integer and rational arithmetic.

Rationals are :class:`fractions.Fraction` values throughout the package; they
are always stored in lowest terms with a positive denominator, and zero is
``0/1``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt
from typing import List, Tuple

import numpy as np

from .errors import FactorOverflow, NotCoprime, ZeroInput

Rational = Fraction
Factorization = List[Tuple[int, int]]

TRIAL_LIMIT = 10**6
# Miller-Rabin with the first 13 primes as bases is deterministic below this.
MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SPF_LIMIT = 1 << 20


@lru_cache(maxsize=None)
def _bernoulli_table(k: int) -> Tuple[Fraction, ...]:
    if k == 0:
        return (Fraction(1),)
    prev = _bernoulli_table(k - 1)
    # sum_{j=0}^{k} C(k+1, j) B_j = 0
    s = sum(comb(k + 1, j) * prev[j] for j in range(k) if prev[j])
    return prev + (-s / (k + 1),)


def bernoulli(k: int) -> Fraction:
    """Return B_k with the convention B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > 1 and k % 2:
        return Fraction(0)
    # Build the table in steps so the recursion depth stays bounded.
    for j in range(0, k, 256):
        _bernoulli_table(j)
    return _bernoulli_table(k)[k]


def reduced_numerator(q: Fraction) -> int:
    q = Fraction(q)
    if q == 0:
        raise ZeroInput("reduced numerator of zero is undefined")
    return abs(q.numerator)


def sigma(m: int, n: int) -> int:
    """Divisor power sum sigma_m(n), via the factorization of n."""
    if n < 1:
        raise ValueError("n must be positive")
    out = 1
    for p, e in factor(n):
        pm = p**m
        out *= (pm ** (e + 1) - 1) // (pm - 1) if pm != 1 else e + 1
    return out


def largest_prime_factor(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    f = factor(n)
    return f[-1][0] if f else 1


def valuation(p: int, n: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ZeroInput("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(p: int, q: Fraction) -> int | None:
    """p-adic valuation of a rational; ``None`` stands for +infinity."""
    q = Fraction(q)
    if q == 0:
        return None
    return valuation(p, q.numerator) - valuation(p, q.denominator)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= MR_DETERMINISTIC_LIMIT:
        raise FactorOverflow(f"primality of {n} is beyond the supported width")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


@lru_cache(maxsize=1)
def _spf_table() -> np.ndarray:
    spf = np.zeros(_SPF_LIMIT, dtype=np.int32)
    for p in range(2, isqrt(_SPF_LIMIT - 1) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


@lru_cache(maxsize=1)
def _trial_primes() -> Tuple[int, ...]:
    spf = _spf_table()
    return tuple(int(p) for p in np.nonzero(spf[: TRIAL_LIMIT + 1] == np.arange(TRIAL_LIMIT + 1))[0] if p >= 2)


def _brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n (Pollard-Brent)."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = 2
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
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError(f"rho failed to split {n}")


def _split(n: int, out: dict) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _brent(n)
    _split(d, out)
    _split(n // d, out)


def factor(n: int) -> Factorization:
    """Prime factorization as ascending (prime, exponent) pairs.

    Trial division up to 10**6 (table lookup for small n), then Pollard-Brent
    on the cofactor. Cofactors are certified by Miller-Rabin with a base set
    that is deterministic below ``MR_DETERMINISTIC_LIMIT``; larger cofactors
    raise :class:`FactorOverflow`.
    """
    if n < 1:
        raise ValueError("n must be positive")
    out: dict = {}
    if n < _SPF_LIMIT:
        spf = _spf_table()
        while n > 1:
            p = int(spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return sorted(out.items())
    for p in _trial_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        if n >= MR_DETERMINISTIC_LIMIT:
            raise FactorOverflow(f"cofactor {n} exceeds the supported width")
        _split(n, out)
    return sorted(out.items())


def multiplicative_order(a: int, m: int) -> int:
    if m < 2:
        raise ValueError("modulus must be at least 2")
    a %= m
    if gcd(a, m) != 1:
        raise NotCoprime(f"gcd({a}, {m}) != 1")
    if m < MR_DETERMINISTIC_LIMIT and is_prime(m):
        t = m - 1
        for q, _ in factor(m - 1):
            while t % q == 0 and pow(a, t // q, m) == 1:
                t //= q
        return t
    t, x = 1, a
    while x != 1:
        x = x * a % m
        t += 1
    return t


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, isqrt(n) + 1, 2):
        if mask[p]:
            mask[p * p :: 2 * p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def prime_pi(x: float) -> int:
    return int(primes_upto(int(x)).size) if x >= 2 else 0
