"""
Averages of chi_d(n) over fundamental discriminants.

Conditionally on GRH,

    sum_{|d| <= X, d fundamental} chi_d(n)
        = X/zeta(2) * prod_{p|n} p/(p+1) * [n is a square]
          + O(X^(1/2+eps) f(n0) g(n1)),

with n = n0 n1^2, f(n0) = exp((log n0)^(1-eps)) and
g(n1) = sum_{e | n1} mu(e)^2 / e^(1/2+eps). Everything here is brute force:
the discriminants are sieved in blocks and the integer sum is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _parallel
from .arith import (BLOCK, factorize, fundamental_blocks, is_squarefree, kronecker_column,
                    largest_prime_factor, squarefree_decompose)
from .errors import DegenerateFitError

ZETA2 = math.pi ** 2 / 6
DEFAULT_EPSILON = 0.1


def _block_bounds(lo: int, hi: int, block: int) -> list[tuple[int, int]]:
    return [(s, min(s + block - 1, hi)) for s in range(lo, hi + 1, block)]


def _signed_sum(lo: int, hi: int, n: int, workers: int | None, block: int) -> int:
    def work(bounds):
        return sum(int(kronecker_column(b, n).sum(dtype=np.int64))
                   for b in fundamental_blocks(bounds[0], bounds[1], block))

    # integer partial sums: the reduction is exact and order independent
    return sum(_parallel.ordered_map(work, _block_bounds(lo, hi, block), workers))


def discriminant_char_average(X: int, n: int, workers: int | None = None, block: int = BLOCK) -> int:
    """sum of chi_d(n) over fundamental d with |d| <= X (both signs)."""
    if X < 3:
        raise ValueError(f"X must be >= 3, got {X}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _signed_sum(-X, X, n, workers, block)


def window_char_average(X: int, n: int, workers: int | None = None, block: int = BLOCK) -> int:
    """Same sum over the window X < |d| <= 2X."""
    return (discriminant_char_average(2 * X, n, workers, block)
            - discriminant_char_average(X, n, workers, block))


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def main_term(X: float, n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not is_square(n):
        return 0.0
    return X / ZETA2 * math.prod(p / (p + 1) for p in factorize(n))


@dataclass(frozen=True)
class ErrorFactors:
    f: float
    g: float
    f_bound: float
    g_bound: float


def error_factors(n: int, epsilon: float = DEFAULT_EPSILON) -> ErrorFactors:
    """f(n0), g(n1) and their coarse bounds through the largest prime factor of n."""
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    _, n0, n1 = squarefree_decompose(n)
    f = math.exp(math.log(n0) ** (1 - epsilon)) if n0 > 1 else 1.0
    g = math.fsum(e ** -(0.5 + epsilon) for e in _divisors(n1) if is_squarefree(e))
    # P+(1) taken as 1
    P = largest_prime_factor(n) if n > 1 else 1
    return ErrorFactors(f, g, _exp(P ** (1 - epsilon)), _exp(P ** (0.5 - epsilon)))


def _exp(t: float) -> float:
    # the coarse bounds leave float range for large P+(n)
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class AverageReport:
    X: int
    n: int
    exact: int
    main: float
    error: float
    f_n0: float
    g_n1: float
    epsilon: float
    slope: float | None = None

    columns = ("X", "n", "exact", "main", "error", "f_n0", "g_n1", "epsilon", "slope")

    def row(self) -> dict:
        return {c: getattr(self, c) for c in self.columns}


def average_report(X: int, n: int, epsilon: float = DEFAULT_EPSILON,
                   workers: int | None = None) -> AverageReport:
    exact = discriminant_char_average(X, n, workers)
    main = main_term(X, n)
    ef = error_factors(n, epsilon)
    return AverageReport(X, n, exact, main, abs(exact - main), ef.f, ef.g, epsilon)


def fit_slope(X_values, errors) -> float:
    """Least-squares slope of log|error| against log X; zero errors are dropped."""
    pts = [(math.log(X), math.log(abs(e))) for X, e in zip(X_values, errors) if e != 0]
    if len(pts) < 3:
        raise DegenerateFitError(f"slope fit needs >= 3 nonzero errors, got {len(pts)}")
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def error_exponent_fit(n: int, X_values, workers: int | None = None) -> float:
    """Fitted exponent of X in |exact - main| for the discriminant average of chi_d(n)."""
    X_values = list(X_values)
    if len(X_values) < 3:
        raise DegenerateFitError(f"slope fit needs >= 3 values of X, got {len(X_values)}")
    if X_values != sorted(X_values):
        raise ValueError("X values must be ascending")
    errors = [discriminant_char_average(X, n, workers) - main_term(X, n) for X in X_values]
    return fit_slope(X_values, errors)


def average_table(n: int, X_values, epsilon: float = DEFAULT_EPSILON,
                  workers: int | None = None) -> list[AverageReport]:
    """One report per X, each carrying the fitted slope over the whole list."""
    reports = [average_report(X, n, epsilon, workers) for X in X_values]
    slope = fit_slope([r.X for r in reports], [r.exact - r.main for r in reports])
    return [AverageReport(**{**r.__dict__, "slope": slope}) for r in reports]

