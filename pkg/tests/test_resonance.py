import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadchar.arith import kronecker, window_discriminants
from quadchar.errors import EmptyWindowError
from quadchar.polya import choose_z
from quadchar.resonance import (ZETA2, build_resonator, main_m1, main_m2_diagonal, main_m2_square,
                                moment1, moment2, predicted_lower_bound, ratio_bound,
                                resonator_for_window, resonator_value, resonator_values, rmrn_lhs,
                                weighted_ratio)

from oracles import moments_naive, r_oracle, rmrn_naive


def override(primes=(11, 13), lam=3, y=200):
    return build_resonator(y, window=(min(primes), max(primes)), lam=lam)


def test_default_rule_small_y_is_empty():
    spec = build_resonator(10**4, 0.1)
    assert spec.lam == pytest.approx(4.52, abs=0.01)
    assert spec.window_lo == pytest.approx(20.45, abs=0.01)
    assert spec.window_empty and spec.primes == ()
    assert spec.coefficients == {1: 1.0}


def test_override_coefficients():
    spec = override()
    assert spec.primes == (11, 13)
    # 3/(sqrt(p) log p) evaluated by hand
    assert spec.r(11) == pytest.approx(0.377220, abs=1e-6)
    assert spec.r(13) == pytest.approx(0.324392, abs=1e-6)
    assert spec.r(143) == pytest.approx(spec.r(11) * spec.r(13), rel=1e-15)
    assert sorted(spec.coefficients) == [1, 11, 13, 143]
    assert spec.r(121) == 0 and spec.r(7) == 0


def test_y_one_gives_trivial_resonator():
    assert build_resonator(1, 0.1).coefficients == {1: 1.0}


@pytest.mark.parametrize("delta", [0, 0.25, -0.1, 0.3])
def test_delta_validation(delta):
    with pytest.raises(ValueError):
        build_resonator(10**4, delta)
    with pytest.raises(ValueError):
        resonator_for_window(1000, 10, delta)


def test_y_validation():
    with pytest.raises(ValueError):
        build_resonator(0.5, 0.1)


def test_window_empty_when_lambda_small():
    for y in (10, 10**3, 10**6):
        spec = build_resonator(y, 0.1)
        assert spec.lam < math.e ** 2 and spec.window_empty


def test_default_rule_nonempty_at_large_y():
    spec = build_resonator(1e9, 0.1)
    assert spec.primes == (67, 71)
    assert not spec.window_empty


def test_resonator_for_window_clamps():
    spec = resonator_for_window(1000, 10, 0.1)
    assert spec.y_raw < 1 and spec.y == 1.0 and spec.coefficients == {1: 1.0}


@settings(max_examples=60)
@given(st.integers(1, 40_000))
def test_r_matches_factoring_oracle(n):
    spec = build_resonator(40_000, window=(3, 40), lam=2.5)
    assert spec.r(n) == pytest.approx(r_oracle(n, set(spec.primes), 2.5), rel=1e-12)
    if n in spec.coefficients:
        assert spec.coefficients[n] == pytest.approx(spec.r(n), rel=1e-12)


def test_multiplicativity_on_coprime_pairs():
    spec = build_resonator(10**5, window=(3, 30), lam=2)
    keys = list(spec.coefficients)
    for m in keys[:30]:
        for n in keys[:30]:
            if math.gcd(m, n) == 1:
                assert spec.r(m * n) == pytest.approx(spec.r(m) * spec.r(n), rel=1e-12)


def test_resonator_value_four_terms():
    spec = override()
    for d in (-11, -8, 5, -1003, 1001):
        expected = 1 + spec.r(11) * kronecker(d, 11) + spec.r(13) * kronecker(d, 13) \
            + spec.r(143) * kronecker(d, 143)
        assert resonator_value(spec, d) == pytest.approx(expected, abs=1e-14)
    ds = window_discriminants(300)
    assert resonator_values(spec, ds) == pytest.approx([resonator_value(spec, int(d)) for d in ds],
                                                       abs=1e-13)


@pytest.mark.parametrize("X,x", [(60, 10), (90, 7), (150, 50)])
@pytest.mark.parametrize("spec_args", [((11, 13), 3, 200), ((3, 7), 2, 120), ((5, 5), 1.5, 30)])
def test_moments_match_bruteforce(X, x, spec_args):
    primes, lam, y = spec_args
    spec = override(primes, lam, y)
    assert len(window_discriminants(X)) <= 200
    z = choose_z(2 * X, x)
    M1, M2 = moments_naive(X, x, z, set(spec.primes), lam, y)
    assert moment1(spec, X)[0] == pytest.approx(M1, rel=1e-10)
    assert moment2(spec, X, x)[0] == pytest.approx(M2, rel=1e-10)


def test_trivial_resonator_moments():
    spec = build_resonator(1, 0.1)
    exact, main = moment1(spec, 1000)
    assert exact == len(window_discriminants(1000))
    assert main == pytest.approx(1000 / ZETA2, rel=1e-15)
    assert main_m1(spec, 1000, simple=True) == main


def test_m1_main_tracks_exact():
    spec = override()
    exact, main = moment1(spec, 10**4)
    assert exact == pytest.approx(main, rel=0.05)


def test_m2_diagonal_below_square():
    for spec in (build_resonator(1, 0.1), override(), override((3, 7), 2, 120)):
        assert 0 < main_m2_diagonal(spec, 1000, 10) <= main_m2_square(spec, 1000, 10)


def test_m2_square_tracks_exact_for_trivial_resonator():
    spec = build_resonator(1, 0.1)
    exact, _ = moment2(spec, 10**4, 10)
    assert main_m2_square(spec, 10**4, 10) == pytest.approx(exact, rel=0.1)


@pytest.mark.parametrize("X,x", [(1000, 10), (1000, 50), (3000, 10)])
def test_ratio_below_max(X, x):
    for spec in (resonator_for_window(X, x, 0.1), override(), override((3, 7), 2, 1000)):
        rep = ratio_bound(spec, X, x)
        assert rep.inequality_holds
        assert rep.M2_exact / rep.M1_exact == pytest.approx(rep.ratio, rel=1e-12)


def test_singleton_window_equality():
    spec = override()
    for d in (-1003, -1007, 1005 + 8):
        try:
            rep = ratio_bound(spec, 1000, 10, discriminants=[d])
        except ValueError:
            continue
        assert rep.ratio == rep.max_Cd_sq


def test_per_d_z_runs():
    rep = ratio_bound(override(), 1000, 10, per_d_z=True)
    assert rep.inequality_holds and rep.z_rule.startswith("per-d")


def test_empty_discriminant_set():
    with pytest.raises(EmptyWindowError):
        moment1(override(), 1000, discriminants=[])


@settings(max_examples=50)
@given(st.lists(st.floats(0, 1e6), min_size=5, max_size=5),
       st.lists(st.floats(0, 100), min_size=5, max_size=5))
def test_weighted_ratio_bounded_by_max(w, v):
    w, v = np.array(w), np.array(v)
    if w.max() <= 0:
        with pytest.raises(ValueError):
            weighted_ratio(w, v)
        return
    r = weighted_ratio(w, v)
    assert v[w > 0].min() * (1 - 1e-12) <= r <= v[w > 0].max() * (1 + 1e-12)


def test_rmrn_matches_triple_loop():
    spec = override()
    rep = rmrn_lhs(spec, 200, 15)
    assert rep.lhs == pytest.approx(rmrn_naive(200, 15, {11, 13}, 3), rel=1e-12)
    assert rep.lhs == pytest.approx(1.0215492117578215, rel=1e-12)
    assert rep.rhs == pytest.approx(math.exp(2 * math.sqrt(math.log(200) / math.log(math.log(200)))))


def test_rmrn_trivial_is_one():
    for Y, W in ((200, 15), (10, 10), (1e4, 1)):
        assert rmrn_lhs(build_resonator(1, 0.1), Y, W).lhs == 1.0


def test_rmrn_at_least_diagonal_term():
    spec = override((3, 7), 2, 500)
    rep = rmrn_lhs(spec, 500, 40)
    norm = math.prod(1 + spec.r(p) ** 2 for p in spec.primes)
    head = sum(r * r for n, r in spec.support(500).items()) / norm
    assert rep.lhs >= head * (1 - 1e-12)


def test_rmrn_monotone_in_W():
    spec = build_resonator(1e9, 0.1)
    Y = 10**5
    values = [rmrn_lhs(spec, Y, W).lhs for W in (1, 67, 71, 5000, Y)]
    assert all(a <= b * (1 + 1e-12) for a, b in zip(values, values[1:]))
    assert values[0] == pytest.approx(1 / math.prod(1 + spec.r(p) ** 2 for p in spec.primes)
                                      * sum(r * r for r in spec.support(Y).values()))


def test_rmrn_rejects_W_above_Y():
    with pytest.raises(ValueError):
        rmrn_lhs(override(), 10, 11)


def test_rmrn_rhs_null_for_small_Y():
    assert rmrn_lhs(override(), 2, 1).rhs is None


def test_predicted_lower_bound():
    X, x = 1e10, 1e3
    L = math.log(X)
    hand = math.sqrt(X / x) * math.exp(math.sqrt(2) / 2 * math.sqrt(L / math.log(L)))
    assert predicted_lower_bound(X, x) == pytest.approx(hand, rel=1e-12)
    assert predicted_lower_bound(X, x) == pytest.approx(2.148e4, rel=5e-3)


@given(st.floats(3, 1e15), st.floats(1, 1e6))
def test_predicted_scaling_in_x(X, x):
    assert predicted_lower_bound(X, 2 * x) == pytest.approx(predicted_lower_bound(X, x) / math.sqrt(2),
                                                            rel=1e-12)


def test_predicted_rejects_small_X():
    with pytest.raises(ValueError):
        predicted_lower_bound(math.e, 10)
    with pytest.raises(ValueError):
        predicted_lower_bound(100, 0.5)
