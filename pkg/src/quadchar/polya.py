"""
Gauss sums and the truncated Fourier expansion of quadratic character sums.

For a primitive real character chi_d of conductor q = |d|,

    sum_{n <= alpha q} chi(n)
        ~ tau(chi)/(2 pi i) * sum_{1 <= |m| <= z} chi(m)/m * (1 - e(-alpha m)),

with e(a) = exp(2 pi i a). The terms m and -m are always combined before
accumulation: for odd chi the pair is 2 chi(m)(1 - cos 2pi alpha m)/m and for
even chi it is 2i chi(m) sin(2pi alpha m)/m. The parity cancellations of the
cosine and sine sums are therefore structural zeros, not rounding residue.

The sine sum is sum chi(m)/m * sin(2 pi m/x): the imaginary part of
1 - e(-m/x) carries the sine kernel, not the cosine one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _parallel
from .arith import character_matrix, require_fundamental, window_discriminants
from .charsums import as_fraction, char_prefix_sum, period_table
from .errors import EmptyWindowError

CHUNK = 128


def gauss_sum(d: int) -> complex:
    """tau(chi_d) = sum_{n <= |d|} chi_d(n) e(n/|d|) by direct summation."""
    d = require_fundamental(d)
    q = abs(d)
    chi = period_table(d).astype(np.float64)
    n = np.arange(q)
    return complex(np.sum(chi * np.exp(2j * np.pi * n / q)))


def choose_z(d, x) -> float:
    """Truncation height sqrt(|d| x) log|d| used for the prefix of length |d|/x."""
    q = abs(float(d))
    if q < 3:
        raise ValueError(f"choose_z needs |d| >= 3, got {d}")
    if float(x) < 1:
        raise ValueError(f"cut parameter x must be >= 1, got {x}")
    return math.sqrt(q * float(x)) * math.log(q)


def _frac_turns(m: np.ndarray, alpha: Fraction) -> np.ndarray:
    """{alpha m} in [0, 1), exact reduction before converting to float."""
    p, q = alpha.numerator, alpha.denominator
    if abs(p) * (int(m[-1]) if len(m) else 0) < 2**62:
        return ((m * p) % q) / q
    return np.array([float((int(k) * alpha) % 1) for k in m])


def cosine_weights(z: float, x) -> np.ndarray:
    """w[m] = (1 - cos(2 pi m/x))/m for 0 <= m <= z, w[0] = 0."""
    M = int(math.floor(z))
    m = np.arange(M + 1, dtype=np.int64)
    t = _frac_turns(m, 1 / as_fraction(x))
    w = np.zeros(M + 1)
    w[1:] = (1.0 - np.cos(2 * np.pi * t[1:])) / m[1:]
    return w


def sine_weights(z: float, x) -> np.ndarray:
    """w[m] = sin(2 pi m/x)/m for 0 <= m <= z, w[0] = 0."""
    M = int(math.floor(z))
    m = np.arange(M + 1, dtype=np.int64)
    t = _frac_turns(m, 1 / as_fraction(x))
    w = np.zeros(M + 1)
    w[1:] = np.sin(2 * np.pi * t[1:]) / m[1:]
    return w


def _half_sum(chi_row: np.ndarray, w: np.ndarray, M: int) -> float:
    # ascending m, numpy's pairwise reduction
    return float(np.sum(chi_row[1:M + 1] * w[1:M + 1]))


def _check_zx(z, x):
    if z < 1:
        raise ValueError(f"truncation height z must be >= 1, got {z}")
    if as_fraction(x) < 1:
        raise ValueError(f"cut parameter x must be >= 1, got {x}")


def cosine_sum(d: int, z: float, x) -> float:
    """C_d(z) = sum_{1<=|m|<=z} chi_d(m)/m (1 - cos(2 pi m/x)); 0 for even chi_d."""
    d = require_fundamental(d)
    _check_zx(z, x)
    if d > 0:
        return 0.0
    M = int(math.floor(z))
    chi = character_matrix(np.array([d]), M)[0]
    return 2.0 * _half_sum(chi, cosine_weights(z, x), M)


def sine_sum(d: int, z: float, x) -> float:
    """S_d(z) = sum_{1<=|m|<=z} chi_d(m)/m sin(2 pi m/x); 0 for odd chi_d."""
    d = require_fundamental(d)
    _check_zx(z, x)
    if d < 0:
        return 0.0
    M = int(math.floor(z))
    chi = character_matrix(np.array([d]), M)[0]
    return 2.0 * _half_sum(chi, sine_weights(z, x), M)


def cosine_sums(ds, z, x, workers: int | None = None) -> np.ndarray:
    """C_d(z) for every d in ``ds``; ``z`` is a scalar or one height per d."""
    ds = np.asarray(ds, dtype=np.int64)
    zs = np.broadcast_to(np.asarray(z, dtype=np.float64), ds.shape)
    if len(ds) == 0:
        return np.zeros(0)
    _check_zx(float(zs.min()), x)
    Ms = np.floor(zs).astype(np.int64)
    w = cosine_weights(float(zs.max()), x)

    def work(sl):
        sub = ds[sl]
        out = np.zeros(len(sub))
        odd = np.flatnonzero(sub < 0)
        if len(odd) == 0:
            return out
        Msub = Ms[sl]
        chi = character_matrix(sub[odd], int(Msub[odd].max()))
        for j, i in enumerate(odd):
            out[i] = 2.0 * _half_sum(chi[j], w, int(Msub[i]))
        return out

    slices = [slice(i, i + CHUNK) for i in range(0, len(ds), CHUNK)]
    return np.concatenate(_parallel.ordered_map(work, slices, workers))


@dataclass(frozen=True)
class PolyaParams:
    d: int
    alpha: float
    z: float
    x: float | None = None

    def __post_init__(self):
        require_fundamental(self.d)
        a = as_fraction(self.alpha)
        if not 0 < a < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.z < 1:
            raise ValueError(f"truncation height z must be >= 1, got {self.z}")
        if self.x is not None and as_fraction(self.x) < 1:
            raise ValueError(f"cut parameter x must be >= 1, got {self.x}")


@dataclass(frozen=True)
class PolyaReport:
    d: int
    alpha: float
    exact: int
    approx: complex
    abs_error: float
    error_budget: float
    z_used: float
    cosine: float = field(default=0.0)
    sine: float = field(default=0.0)

    columns = ("d", "alpha", "z_used", "exact", "approx_re", "approx_im",
               "abs_error", "error_budget", "cosine", "sine")

    def row(self) -> dict:
        return {
            "d": self.d,
            "alpha": float(self.alpha),
            "z_used": self.z_used,
            "exact": self.exact,
            "approx_re": self.approx.real,
            "approx_im": self.approx.imag,
            "abs_error": self.abs_error,
            "error_budget": self.error_budget,
            "cosine": self.cosine,
            "sine": self.sine,
        }


def _expansion(d: int, tau: complex, chi_row: np.ndarray, alpha: Fraction, M: int) -> complex:
    m = np.arange(M + 1, dtype=np.int64)
    turns = _frac_turns(m, alpha)[1:]
    if d < 0:
        pair = 2.0 * (1.0 - np.cos(2 * np.pi * turns)) / m[1:]
        s = complex(float(np.sum(chi_row[1:M + 1] * pair)), 0.0)
    else:
        pair = 2.0 * np.sin(2 * np.pi * turns) / m[1:]
        s = complex(0.0, float(np.sum(chi_row[1:M + 1] * pair)))
    return tau / (2j * np.pi) * s


def _report(d, alpha: Fraction, z, tau, chi_row, x=None) -> PolyaReport:
    q = abs(d)
    M = int(math.floor(z))
    approx = _expansion(d, tau, chi_row, alpha, M)
    t = math.floor(alpha * q)
    # the row already spans the prefix when it is at least |d| long
    exact = int(chi_row[1:t + 1].sum(dtype=np.int64)) if len(chi_row) > q else char_prefix_sum(d, t)
    cos_v = sin_v = 0.0
    if x is not None:
        cos_v = 0.0 if d > 0 else 2.0 * _half_sum(chi_row, cosine_weights(z, x), M)
        sin_v = 0.0 if d < 0 else 2.0 * _half_sum(chi_row, sine_weights(z, x), M)
    return PolyaReport(
        d=d,
        alpha=float(alpha),
        exact=exact,
        approx=approx,
        abs_error=abs(exact - approx),
        error_budget=1.0 + q * math.log(q) / z,
        z_used=float(z),
        cosine=cos_v,
        sine=sin_v,
    )


def polya_truncated(p: PolyaParams) -> PolyaReport:
    """Compare the exact prefix sum up to alpha|d| with the expansion truncated at z."""
    M = int(math.floor(p.z))
    chi = character_matrix(np.array([p.d]), M)[0]
    return _report(p.d, as_fraction(p.alpha), p.z, gauss_sum(p.d), chi, p.x)


def reconstruct_report(d: int, x) -> tuple[float, int, float]:
    """(bound, |target sum|, residual) with bound = sqrt|d|/(2 pi) |C_d(z)|."""
    d = require_fundamental(d)
    if d > 0:
        raise ValueError("reconstruction through C_d needs an odd character (d < 0)")
    from .charsums import target_sum

    z = choose_z(d, x)
    bound = math.sqrt(-d) / (2 * math.pi) * abs(cosine_sum(d, z, x))
    exact = abs(target_sum(d, x))
    return bound, exact, exact - bound


def reconstruct_bound(d: int, x) -> float:
    return reconstruct_report(d, x)[0]


def polya_batch(X: int, x, workers: int | None = None, sample: int | None = None,
                seed: int = 0) -> list[PolyaReport]:
    """Expansion reports for fundamental d with X < |d| <= 2X, alpha = 1/x, z = choose_z(d, x).

    ``sample`` draws that many discriminants with a seeded generator.
    """
    ds = window_discriminants(X)
    if len(ds) == 0:
        raise EmptyWindowError(X, 2 * X)
    if sample is not None and sample < len(ds):
        rng = np.random.default_rng(seed)
        ds = np.sort(rng.choice(ds, size=sample, replace=False))
    alpha = 1 / as_fraction(x)
    if not alpha < 1:
        raise ValueError(f"cut parameter x must exceed 1 for the expansion, got {x}")
    zs = [choose_z(int(d), x) for d in ds]

    def work(sl):
        sub = ds[sl]
        width = max(int(abs(sub).max()), int(math.floor(max(zs[sl]))))
        chi = character_matrix(sub, width)
        out = []
        for j, d in enumerate(sub):
            d = int(d)
            q = abs(d)
            n = np.arange(q)
            tau = complex(np.sum(chi[j, :q] * np.exp(2j * np.pi * n / q)))
            out.append(_report(d, alpha, zs[sl][j], tau, chi[j], x))
        return out

    slices = [slice(i, i + CHUNK) for i in range(0, len(ds), CHUNK)]
    return [r for part in _parallel.ordered_map(work, slices, workers) for r in part]
