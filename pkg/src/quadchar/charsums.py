"""
Exact prefix sums of chi_d and the extremal search over a discriminant window.

The search maximizes sum_{n <= |d|/x} chi_d(n) over fundamental d with
X < |d| <= 2X. All sums are exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _parallel
from .arith import character_matrix, kronecker, require_fundamental, window_discriminants
from .errors import EmptyWindowError

CHUNK = 256


def as_fraction(v) -> Fraction:
    """Exact rational for a user parameter; floats go through their repr so 2.2 -> 11/5."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return Fraction(repr(float(v)))


def prefix_length(d: int, x) -> int:
    """floor(|d| / x), computed exactly."""
    x = as_fraction(x)
    if x < 1:
        raise ValueError(f"cut parameter x must be >= 1, got {x}")
    return math.floor(abs(d) / x)


@lru_cache(maxsize=64)
def period_table(d: int) -> np.ndarray:
    """chi_d(0..|d|-1); cached for repeated queries on one discriminant."""
    return character_matrix(np.array([d]), abs(d) - 1)[0]


def char_prefix_sum(d: int, t: int) -> int:
    """sum_{1 <= n <= t} chi_d(n)."""
    d = require_fundamental(d)
    if t < 0:
        raise ValueError(f"prefix length must be >= 0, got {t}")
    q = abs(d)
    # a full period of a nonprincipal character sums to zero
    r = t % q
    if r == 0:
        return 0
    if r <= 64:
        return sum(kronecker(d, n) for n in range(1, r + 1))
    return int(period_table(d)[1:r + 1].sum(dtype=np.int64))


def target_sum(d: int, x) -> int:
    return char_prefix_sum(d, prefix_length(d, x))


@dataclass(frozen=True)
class SearchWindow:
    """Fundamental d with X < |d| <= 2X, prefix length floor(|d|/x)."""

    X: int
    x: float

    def __post_init__(self):
        if int(self.X) != self.X or self.X < 3:
            raise ValueError(f"window base X must be an integer >= 3, got {self.X}")
        if as_fraction(self.x) < 1:
            raise ValueError(f"cut parameter x must be >= 1, got {self.x}")

    def discriminants(self) -> np.ndarray:
        return window_discriminants(int(self.X))


@dataclass(frozen=True)
class SearchResult:
    X: int
    x: float
    d_star: int
    value: int
    normalized: float
    predicted: float

    columns = ("X", "x", "d_star", "value", "normalized", "predicted")

    def row(self) -> dict:
        return {c: getattr(self, c) for c in self.columns}


def target_sums(ds: np.ndarray, x, workers: int | None = None) -> np.ndarray:
    """Vectorized target_sum over an array of fundamental discriminants."""
    xf = as_fraction(x)
    if xf < 1:
        raise ValueError(f"cut parameter x must be >= 1, got {x}")
    ds = np.asarray(ds, dtype=np.int64)
    # floor(|d| * den / num) stays exact in int64 at desk scale
    t_all = (np.abs(ds) * xf.denominator) // xf.numerator

    def work(sl):
        sub, t = ds[sl], t_all[sl]
        m = int(t.max())
        chi = character_matrix(sub, m)
        csum = np.cumsum(chi, axis=1, dtype=np.int64)
        csum[:, 0] = 0
        return csum[np.arange(len(sub)), t]

    slices = [slice(i, i + CHUNK) for i in range(0, len(ds), CHUNK)]
    parts = _parallel.ordered_map(work, slices, workers)
    return np.concatenate(parts) if parts else np.array([], dtype=np.int64)


def argmax_tiebreak(ds: np.ndarray, values: np.ndarray) -> int:
    """Index of the max value; ties go to smallest |d|, then negative d first."""
    best = values.max()
    cand = np.flatnonzero(values == best)
    order = sorted(cand, key=lambda i: (abs(int(ds[i])), int(ds[i])))
    return int(order[0])


def search_max(window: SearchWindow, absolute: bool = False, workers: int | None = None,
               discriminants=None) -> SearchResult:
    """Maximize the prefix sum (or its absolute value) over the window.

    ``discriminants`` replaces the (X, 2X] enumeration with an explicit set.
    """
    from .resonance import predicted_lower_bound

    ds = window.discriminants() if discriminants is None else np.asarray(
        [require_fundamental(d) for d in discriminants], dtype=np.int64)
    if len(ds) == 0:
        raise EmptyWindowError(window.X, 2 * window.X)
    values = target_sums(ds, window.x, workers)
    key = np.abs(values) if absolute else values
    i = argmax_tiebreak(ds, key)
    X, x = int(window.X), window.x
    return SearchResult(
        X=X,
        x=x,
        d_star=int(ds[i]),
        value=int(values[i]),
        normalized=float(values[i]) / math.sqrt(X / float(x)),
        predicted=predicted_lower_bound(X, x),
    )
