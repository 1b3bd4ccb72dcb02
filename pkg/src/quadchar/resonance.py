"""
Resonance method for large values of C_d(z).

A resonator R(d) = sum_{n <= y} r(n) chi_d(n) with r multiplicative on
squarefree n and

    r(p) = lam / (sqrt(p) log p)   for lam^2 <= p <= exp((log lam)^2), else 0,

weights the discriminants in the window X < |d| <= 2X. Since R(d)^2 >= 0,

    max_d C_d(z)^2 >= M2 / M1,   M1 = sum R(d)^2,   M2 = sum R(d)^2 C_d(z)^2,

exactly, for every finite window. The main terms of M1 and M2 come from the
average of chi_d(n) over discriminants, which keeps only square n.

Parameter rule: y = X^(1/2 - delta) / (2 log z)^2 and lam = sqrt(log y log log y).
The prime window is empty whenever lam < e^2, which covers every desk-sized X;
``window_empty`` reports this, and explicit window/lam overrides give the
machinery nonempty support at small scale.

Conventions: a_k = (1 - cos(2 pi k/x)) / k, and the two-variable coefficient
product is r(m1) r(n1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _parallel
from .arith import (factorize, kronecker, kronecker_column, require_fundamental,
                    sieve_primes, squarefree_decompose, window_discriminants)
from .errors import EmptyWindowError
from .polya import choose_z, cosine_sums, cosine_weights

ZETA2 = math.pi ** 2 / 6
# largest prime window we are willing to sieve
MAX_WINDOW_HI = 10 ** 8


@dataclass(frozen=True, eq=False)
class ResonatorSpec:
    y: float
    lam: float
    window_lo: float
    window_hi: float
    delta: float | None
    primes: tuple[int, ...]
    coefficients: dict[int, float]
    window_empty: bool
    y_raw: float | None = None

    def r_prime(self, p: int) -> float:
        return self.lam / (math.sqrt(p) * math.log(p)) if p in self._prime_set else 0.0

    @property
    def _prime_set(self) -> frozenset[int]:
        return frozenset(self.primes)

    def r(self, n: int) -> float:
        """r(n) for any n >= 1, also beyond the table cutoff y."""
        if n in self.coefficients:
            return self.coefficients[n]
        value = 1.0
        for p, e in factorize(n).items():
            if e > 1 or p not in self._prime_set:
                return 0.0
            value *= self.r_prime(p)
        return value

    def support(self, limit: float) -> dict[int, float]:
        """All n <= limit with r(n) != 0, ascending."""
        return _squarefree_products(self.primes, self.lam, limit)


def _squarefree_products(primes, lam, limit) -> dict[int, float]:
    table = {1: 1.0}
    if limit < 1:
        return {}
    for p in primes:
        if p > limit:
            break
        rp = lam / (math.sqrt(p) * math.log(p))
        for n, v in list(table.items()):
            if n * p <= limit:
                table[n * p] = v * rp
    return dict(sorted(table.items()))


def default_lambda(y: float) -> float:
    """sqrt(log y log log y), taken as 0 when y <= e."""
    if y <= math.e:
        return 0.0
    return math.sqrt(math.log(y) * math.log(math.log(y)))


def build_resonator(y: float, delta: float | None = None, window: tuple[float, float] | None = None,
                    lam: float | None = None, y_raw: float | None = None) -> ResonatorSpec:
    """Coefficient table r(n) for squarefree n <= y built from the prime window.

    Without overrides the default rule applies: lam from y and the window
    [lam^2, exp((log lam)^2)]; ``delta`` must then lie in (0, 1/4).
    """
    if y < 1:
        raise ValueError(f"resonator length y must be >= 1, got {y}")
    overridden = window is not None or lam is not None
    if delta is not None and not 0 < delta < 0.25:
        if not overridden:
            raise ValueError(f"delta must lie in (0, 1/4), got {delta}")
    if delta is None and not overridden:
        raise ValueError("delta is required unless window or lam is overridden")
    lam_v = default_lambda(y) if lam is None else float(lam)
    if lam_v < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    if window is None:
        lo = lam_v ** 2
        # lam < e^2 means (log lam)^2 < 2 log lam, i.e. hi < lo
        hi = math.exp(math.log(lam_v) ** 2) if lam_v >= math.e ** 2 else 0.0
    else:
        lo, hi = map(float, window)
    if hi > MAX_WINDOW_HI:
        raise ValueError(f"prime window upper end {hi:.3g} exceeds {MAX_WINDOW_HI:.0e}")
    primes: tuple[int, ...] = ()
    if lo <= hi and lam_v > 0:
        ps = sieve_primes(int(math.floor(hi)))
        primes = tuple(int(p) for p in ps[ps >= lo])
    return ResonatorSpec(
        y=float(y),
        lam=lam_v,
        window_lo=lo,
        window_hi=hi,
        delta=delta,
        primes=primes,
        coefficients=_squarefree_products(primes, lam_v, y),
        window_empty=not primes,
        y_raw=y_raw,
    )


def resonator_for_window(X: int, x, delta: float) -> ResonatorSpec:
    """Default-rule resonator for the window (X, 2X]: y = X^(1/2-delta)/(2 log z)^2, z at |d| = 2X.

    y is clamped to 1 (R = 1) when the rule gives less; ``y_raw`` keeps the
    unclamped value.
    """
    if not 0 < delta < 0.25:
        raise ValueError(f"delta must lie in (0, 1/4), got {delta}")
    z = choose_z(2 * X, x)
    y_raw = X ** (0.5 - delta) / (2 * math.log(z)) ** 2
    return build_resonator(max(1.0, y_raw), delta, y_raw=y_raw)


def resonator_value(spec: ResonatorSpec, d: int) -> float:
    d = require_fundamental(d)
    return math.fsum(r * kronecker(d, n) for n, r in spec.coefficients.items())


def resonator_values(spec: ResonatorSpec, ds) -> np.ndarray:
    ds = np.asarray(ds, dtype=np.int64)
    out = np.zeros(len(ds))
    for n, r in spec.coefficients.items():
        out += r * kronecker_column(ds, n)
    return out


@lru_cache(maxsize=None)
def _h(n: int) -> float:
    """prod_{p | n} p/(p+1)."""
    return math.prod(p / (p + 1) for p in factorize(n)) if n > 1 else 1.0


def main_m1(spec: ResonatorSpec, X: int, simple: bool = False) -> float:
    """(X/zeta(2)) sum_m r(m)^2 prod_{p|m} p/(p+1); ``simple`` drops the product."""
    terms = [r * r * (1.0 if simple else _h(m)) for m, r in spec.coefficients.items()]
    return X / ZETA2 * math.fsum(terms)


def z_for_window(X: int, x) -> float:
    return choose_z(2 * X, x)


def _window(X, discriminants):
    if discriminants is None:
        ds = window_discriminants(int(X))
    else:
        ds = np.asarray([require_fundamental(d) for d in discriminants], dtype=np.int64)
    if len(ds) == 0:
        raise EmptyWindowError(X, 2 * X)
    return ds


_COSINE_CACHE: dict = {}


def _cosines(X, x, per_d_z, discriminants, workers):
    """Window discriminants and C_d(z); (X, 2X] results are memoized (they do not depend on workers)."""
    key = (int(X), x, per_d_z)
    if discriminants is None and key in _COSINE_CACHE:
        return _COSINE_CACHE[key]
    ds = _window(X, discriminants)
    z = np.array([choose_z(int(d), x) for d in ds]) if per_d_z else z_for_window(X, x)
    out = ds, cosine_sums(ds, z, x, workers)
    if discriminants is None:
        if len(_COSINE_CACHE) >= 16:
            _COSINE_CACHE.clear()
        _COSINE_CACHE[key] = out
    return out


def moment1(spec: ResonatorSpec, X: int, discriminants=None) -> tuple[float, float]:
    """(exact, main) for M1 = sum_{X<|d|<=2X} R(d)^2."""
    ds = _window(X, discriminants)
    R = resonator_values(spec, ds)
    return float(np.sum(R * R)), main_m1(spec, X)


def main_m2_diagonal(spec: ResonatorSpec, X: int, x, z: float | None = None) -> float:
    """Main term of M2 restricted to mk = n l, parametrized k = n1 g, l = m1 g.

    (2X/zeta(2)) sum_{m,n} r(m) r(n) sum_{g <= z/max(m1,n1)} a_{n1 g} a_{m1 g} prod_{p | m n k l} p/(p+1),
    with m1 = m/(m,n), n1 = n/(m,n); the prime product is exact.
    """
    z = z_for_window(X, x) if z is None else z
    a = cosine_weights(z, x)
    Z = len(a) - 1
    hg = _h_table(Z)
    items = list(spec.coefficients.items())
    total = []
    for m, rm in items:
        for n, rn in items:
            h = math.gcd(m, n)
            m1, n1 = m // h, n // h
            G = Z // max(m1, n1)
            if G < 1:
                continue
            g = np.arange(1, G + 1, dtype=np.int64)
            s = h * m1 * n1
            # prod over p | lcm(s, g) = H(s) H(g) / H(gcd(s, g))
            overlap = np.ones(G)
            for p in factorize(s) if s > 1 else ():
                overlap[g % p == 0] *= p / (p + 1)
            w = a[n1 * g] * a[m1 * g] * _h(s) * hg[g] / overlap
            total.append(rm * rn * float(np.sum(w)))
    return 2 * X / ZETA2 * math.fsum(total)


def main_m2_square(spec: ResonatorSpec, X: int, x, z: float | None = None) -> float:
    """Main term of M2 over the full square condition k l m n = square.

    (2X/zeta(2)) sum_{k,l <= z} a_k a_l sum_{klmn = square} r(m) r(n) prod_{p | klmn} p/(p+1).
    Dominates ``main_m2_diagonal`` since every term is nonnegative.
    """
    z = z_for_window(X, x) if z is None else z
    a = cosine_weights(z, x)
    groups: dict[int, list[tuple[float, int]]] = {}
    for k in range(1, len(a)):
        if a[k] == 0:
            continue
        k0 = squarefree_decompose(k).n0
        rad_k = _radical(k)
        for m, rm in spec.coefficients.items():
            g = math.gcd(k0, m)
            key = (k0 // g) * (m // g)
            groups.setdefault(key, []).append((a[k] * rm, rad_k * m // math.gcd(rad_k, m)))
    total = []
    for key in sorted(groups):
        w = np.array([t[0] for t in groups[key]])
        rad = np.array([t[1] for t in groups[key]], dtype=np.int64)
        hr = np.array([_h(int(v)) for v in rad])
        gcds = np.gcd.outer(rad, rad)
        hg = np.vectorize(lambda v: _h(int(v)), otypes=[float])(gcds)
        total.append(float(np.sum(np.outer(w * hr, w * hr) / hg)))
    return 2 * X / ZETA2 * math.fsum(total)


def _radical(n: int) -> int:
    return math.prod(factorize(n)) if n > 1 else 1


@lru_cache(maxsize=8)
def _h_table(limit: int) -> np.ndarray:
    h = np.ones(limit + 1)
    for p in sieve_primes(limit):
        p = int(p)
        h[p::p] *= p / (p + 1)
    return h


def moment2(spec: ResonatorSpec, X: int, x, per_d_z: bool = False, discriminants=None,
            workers: int | None = None) -> tuple[float, float]:
    """(exact, main) for M2 = sum_{X<|d|<=2X} R(d)^2 C_d(z)^2.

    z = choose_z(2X, x) for the whole window unless ``per_d_z``.
    """
    ds, C = _cosines(X, x, per_d_z, discriminants, workers)
    R = resonator_values(spec, ds)
    return float(np.sum(R * R * C * C)), main_m2_diagonal(spec, X, x)


@dataclass(frozen=True)
class MomentReport:
    M1_exact: float
    M1_main: float
    M2_exact: float
    M2_main: float
    ratio: float
    max_Cd_sq: float
    X: int
    x: float
    z_rule: str
    window_empty: bool = field(default=False)
    d_max: int = field(default=0)

    columns = ("X", "x", "M1_exact", "M1_main", "M2_exact", "M2_main", "ratio", "max_Cd_sq", "z_rule")

    def row(self) -> dict:
        return {c: getattr(self, c) for c in self.columns}

    @property
    def inequality_holds(self) -> bool:
        return self.max_Cd_sq >= self.ratio * (1 - 1e-12)


def weighted_ratio(weights: np.ndarray, values: np.ndarray) -> float:
    """sum w v / sum w with weights scaled by their max, so one point returns v exactly."""
    wmax = weights.max()
    if wmax <= 0:
        raise ValueError("resonator vanishes on the whole window")
    w = weights / wmax
    return float(np.sum(w * values) / np.sum(w))


def ratio_bound(spec: ResonatorSpec, X: int, x, per_d_z: bool = False, discriminants=None,
                workers: int | None = None) -> MomentReport:
    ds, C = _cosines(X, x, per_d_z, discriminants, workers)
    R = resonator_values(spec, ds)
    R2, C2 = R * R, C * C
    i = int(np.argmax(C2))
    z_rule = "per-d choose_z(d,x)" if per_d_z else f"fixed choose_z(2X,x)={z_for_window(X, x)!r}"
    return MomentReport(
        M1_exact=float(np.sum(R2)),
        M1_main=main_m1(spec, X),
        M2_exact=float(np.sum(R2 * C2)),
        M2_main=main_m2_diagonal(spec, X, x),
        ratio=weighted_ratio(R2, C2),
        max_Cd_sq=float(C2[i]),
        X=int(X),
        x=x,
        z_rule=z_rule,
        window_empty=spec.window_empty,
        d_max=int(ds[i]),
    )


@dataclass(frozen=True)
class RmrnReport:
    Y: float
    W: float
    lhs: float
    rhs: float | None
    window_empty: bool

    columns = ("Y", "W", "lhs", "rhs", "window_empty")

    def row(self) -> dict:
        return {c: getattr(self, c) for c in self.columns}


def rmrn_lhs(spec: ResonatorSpec, Y: float, W: float) -> RmrnReport:
    """Exact value of the coprime-pair sum

        sum_{m1,n1 <= W, (m1,n1)=1} m1 n1 r(m1) r(n1) / max(m1,n1)^3
            * sum_{d <= Y/max(m1,n1), (d, m1 n1)=1} r(d)^2  /  prod_p (1 + r(p)^2)

    over the finite support of r. ``rhs`` = exp(2 sqrt(log Y / log log Y)) is
    only a reference value.
    """
    if W > Y:
        raise ValueError(f"need W <= Y, got W={W}, Y={Y}")
    supp = spec.support(Y)
    outer = [(n, r) for n, r in supp.items() if n <= W]
    keys = list(supp)
    sq = [supp[n] ** 2 for n in keys]
    norm = math.prod(1 + spec.r_prime(p) ** 2 for p in spec.primes)
    terms = []
    for m1, r1 in outer:
        for n1, r2 in outer:
            if math.gcd(m1, n1) != 1:
                continue
            mx = max(m1, n1)
            mn = m1 * n1
            inner = math.fsum(s for d, s in zip(keys, sq) if d * mx <= Y and math.gcd(d, mn) == 1)
            terms.append(m1 * n1 * r1 * r2 / mx ** 3 * inner)
    rhs = None
    if Y > math.e:
        L = math.log(Y)
        rhs = math.exp(2 * math.sqrt(L / math.log(L))) if L > 1 else None
    return RmrnReport(Y=Y, W=W, lhs=math.fsum(terms) / norm, rhs=rhs, window_empty=spec.window_empty)


def predicted_lower_bound(X: float, x: float) -> float:
    """sqrt(X/x) exp((sqrt(2)/2) sqrt(log X / log log X)), the o(1) term set to 0.

    A reference line for the search, not a bound at any finite X.
    """
    if X <= math.e:
        raise ValueError(f"X must exceed e so that log log X > 0, got {X}")
    if float(x) < 1:
        raise ValueError(f"cut parameter x must be >= 1, got {x}")
    L = math.log(X)
    return math.sqrt(X / float(x)) * math.exp(math.sqrt(2) / 2 * math.sqrt(L / math.log(L)))
