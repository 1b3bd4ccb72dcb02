"""
Exact integer arithmetic for real quadratic characters.

Provides:
- prime tables and trial-division factorization
- Moebius function, squarefree decomposition n = n0 * n1^2, largest prime factor
- the Kronecker symbol, scalar and vectorized over discriminants
- recognition and segmented enumeration of fundamental discriminants

All vectorized routines return numpy arrays; character values are int8.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from .errors import NotFundamentalError

# windows longer than this are enumerated with the squarefree sieve
SIEVE_THRESHOLD = 10_000
BLOCK = 1_000_000

# Kronecker (d/2) indexed by d mod 8
_KRONECKER_TWO = np.array([0, 1, 0, -1, 0, -1, 0, 1], dtype=np.int8)
# legendre tables are cached only for primes up to this bound
_LEGENDRE_CACHE_LIMIT = 100_000


# ---------------------------------------------------------------------------
# primes and factorization
# ---------------------------------------------------------------------------

def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (Eratosthenes)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """Immutable list of all primes up to ``limit``."""

    limit: int
    primes: tuple[int, ...]

    def __contains__(self, p: int) -> bool:
        if p > self.limit:
            raise ValueError(f"{p} exceeds table limit {self.limit}")
        i = bisect.bisect_left(self.primes, p)
        return i < len(self.primes) and self.primes[i] == p


@lru_cache(maxsize=32)
def prime_table(limit: int) -> PrimeTable:
    return PrimeTable(limit, tuple(int(p) for p in sieve_primes(limit)))


def _small_primes_for(n: int) -> tuple[int, ...]:
    # round the bound up to a power of two so the cache stays small
    bound = max(64, 1 << math.isqrt(n).bit_length())
    return prime_table(bound).primes


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: e} of n >= 1 by trial division."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    factors: dict[int, int] = {}
    for p in _small_primes_for(n):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors[p] = e
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius needs n >= 1, got {n}")
    factors = factorize(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def is_squarefree(n: int) -> bool:
    return n != 0 and mobius(abs(n)) != 0


def largest_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError(f"largest_prime_factor needs n >= 2, got {n}")
    return max(factorize(n))


def radical(n: int) -> int:
    return math.prod(factorize(n))


class SquarefreeDecomposition(NamedTuple):
    """n = n0 * n1**2 with n0 squarefree."""

    n: int
    n0: int
    n1: int


def squarefree_decompose(n: int) -> SquarefreeDecomposition:
    if n < 1:
        raise ValueError(f"squarefree_decompose needs n >= 1, got {n}")
    n0 = n1 = 1
    for p, e in factorize(n).items():
        if e % 2:
            n0 *= p
        n1 *= p ** (e // 2)
    return SquarefreeDecomposition(n, n0, n1)


def smallest_prime_factor_table(limit: int) -> np.ndarray:
    """spf[n] for 0 <= n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p] = p
            if p * p <= limit:
                block = spf[p * p::p]
                block[block == 0] = p
    return spf


# ---------------------------------------------------------------------------
# Kronecker symbol
# ---------------------------------------------------------------------------

def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m > 0."""
    if m <= 0 or m % 2 == 0:
        raise ValueError(f"jacobi needs odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n); total on all integer pairs."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -1
    if n % 2 == 0:
        if d % 2 == 0:
            return 0
        v = (n & -n).bit_length() - 1
        n >>= v
        if v % 2 and d % 8 in (3, 5):
            result = -result
    return result * jacobi(d, n)


def _legendre_table_uncached(p: int) -> np.ndarray:
    table = np.full(p, -1, dtype=np.int8)
    table[0] = 0
    r = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    table[(r * r) % p] = 1
    return table


_legendre_table_cached = lru_cache(maxsize=None)(_legendre_table_uncached)


def legendre_table(p: int) -> np.ndarray:
    """Legendre symbol (a/p) for a = 0..p-1, odd prime p. Treat as read-only."""
    if p <= _LEGENDRE_CACHE_LIMIT:
        return _legendre_table_cached(p)
    return _legendre_table_uncached(p)


def _prime_column(ds: np.ndarray, p: int) -> np.ndarray:
    if p == 2:
        return _KRONECKER_TWO[ds % 8]
    return legendre_table(p)[ds % p]


def kronecker_column(ds, n: int) -> np.ndarray:
    """(d/n) for every d in ``ds`` and one fixed integer n."""
    ds = np.asarray(ds, dtype=np.int64)
    if n == 0:
        return (np.abs(ds) == 1).astype(np.int8)
    out = np.ones(ds.shape, dtype=np.int8)
    if n < 0:
        out[ds < 0] = -1
        n = -n
    for p, e in factorize(n).items():
        col = _prime_column(ds, p)
        if e % 2 == 0:
            col = (col != 0).astype(np.int8)
        out *= col
    return out


def character_matrix(ds, m_max: int) -> np.ndarray:
    """Table chi[i, m] = (ds[i]/m) for 0 <= m <= m_max.

    Prime columns come from Legendre tables; composite columns follow by
    complete multiplicativity. Columns beyond the largest |d| are filled by
    periodicity, so every d must be a discriminant (d = 0 or 1 mod 4).
    """
    ds = np.asarray(ds, dtype=np.int64)
    absd = np.abs(ds)
    width = int(min(m_max, absd.max())) if len(ds) else m_max
    cols = np.empty((width + 1, len(ds)), dtype=np.int8)
    cols[0] = (absd == 1)
    if width >= 1:
        cols[1] = 1
    spf = smallest_prime_factor_table(width)
    for m in range(2, width + 1):
        p = int(spf[m])
        if p == m:
            cols[m] = _prime_column(ds, p)
        else:
            np.multiply(cols[p], cols[m // p], out=cols[m])
    chi = np.ascontiguousarray(cols.T)
    if width == m_max:
        return chi
    # extend each row by its own period |d|
    m = np.arange(m_max + 1, dtype=np.int64)
    idx = m[None, :] % absd[:, None]
    return np.take_along_axis(chi, idx, axis=1)


# ---------------------------------------------------------------------------
# fundamental discriminants
# ---------------------------------------------------------------------------

def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    r = d % 4
    if r == 1:
        return is_squarefree(d)
    if r == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


class FundamentalDiscriminant(int):
    """An int validated to be a fundamental discriminant."""

    def __new__(cls, d):
        d = int(d)
        if not is_fundamental(d):
            raise NotFundamentalError(d)
        return super().__new__(cls, d)

    @property
    def conductor(self) -> int:
        return abs(int(self))

    @property
    def is_even(self) -> bool:
        """chi_d(-1) = +1."""
        return self > 0


def require_fundamental(d) -> int:
    d = int(d)
    if not is_fundamental(d):
        raise NotFundamentalError(d)
    return d


def squarefree_mask(lo: int, hi: int) -> np.ndarray:
    """mask[i] is True iff lo + i is squarefree, for 1 <= lo <= hi + 1."""
    if lo < 1:
        raise ValueError("squarefree_mask needs lo >= 1")
    mask = np.ones(max(hi - lo + 1, 0), dtype=bool)
    if hi < 4:
        return mask
    for p in prime_table(math.isqrt(hi)).primes:
        q = p * p
        start = -(-lo // q) * q
        mask[start - lo::q] = False
    return mask


def _fundamental_abs(lo: int, hi: int, negative: bool) -> np.ndarray:
    """Sorted a in [lo, hi] such that -a (or a) is fundamental."""
    lo = max(lo, 2)
    if hi < lo:
        return np.array([], dtype=np.int64)
    a = np.arange(lo, hi + 1, dtype=np.int64)
    sf = squarefree_mask(lo, hi)
    qlo = max(1, -(-lo // 4))
    sf4 = squarefree_mask(qlo, max(hi // 4, qlo - 1))
    r = a % 4
    odd_ok = (r == 3) if negative else (r == 1)
    keep = odd_ok & sf
    four = np.flatnonzero(r == 0)
    if len(four):
        m = a[four] // 4
        allowed = (1, 2) if negative else (2, 3)
        ok = np.isin(m % 4, allowed) & sf4[m - qlo]
        keep[four[ok]] = True
    return a[keep]


def fundamental_blocks(lo: int, hi: int, block: int = BLOCK) -> Iterator[np.ndarray]:
    """Yield the fundamental discriminants in [lo, hi] in ascending blocks."""
    if lo > hi:
        return
    if hi - lo + 1 <= SIEVE_THRESHOLD:
        yield np.array([d for d in range(lo, hi + 1) if is_fundamental(d)], dtype=np.int64)
        return
    if lo < 0:
        top, bottom = -lo, max(1, -hi)
        for start in range(top, bottom - 1, -block):
            a = _fundamental_abs(max(bottom, start - block + 1), start, negative=True)
            yield -a[::-1]
    if hi > 0:
        for start in range(max(lo, 1), hi + 1, block):
            yield _fundamental_abs(start, min(start + block - 1, hi), negative=False)


def enumerate_fundamental(lo: int, hi: int) -> list[int]:
    """Ascending list of fundamental discriminants d with lo <= d <= hi."""
    if lo > hi:
        raise ValueError(f"enumerate_fundamental needs lo <= hi, got ({lo}, {hi})")
    return [int(d) for b in fundamental_blocks(lo, hi) for d in b]


def window_discriminants(X: int) -> np.ndarray:
    """Fundamental d with X < |d| <= 2X, ascending (negatives first)."""
    neg = np.concatenate(list(fundamental_blocks(-2 * X, -X - 1)) or [np.array([], np.int64)])
    pos = np.concatenate(list(fundamental_blocks(X + 1, 2 * X)) or [np.array([], np.int64)])
    return np.concatenate([neg, pos]).astype(np.int64)


def count_fundamental(X: int, block: int = BLOCK) -> int:
    """#{d fundamental : |d| <= X}, segmented so memory stays O(block)."""
    return sum(len(b) for b in fundamental_blocks(-X, X, block))
