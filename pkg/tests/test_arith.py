import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadchar.arith import (FundamentalDiscriminant, PrimeTable, character_matrix, count_fundamental,
                            enumerate_fundamental, factorize, fundamental_blocks, is_fundamental,
                            jacobi, kronecker, kronecker_column, largest_prime_factor, mobius,
                            prime_table, squarefree_decompose, squarefree_mask, window_discriminants)
from quadchar.errors import NotFundamentalError

from oracles import fundamental_naive, kronecker_oracle, naive_factor, squarefree_naive

FUND_200 = [d for d in range(-200, 201) if fundamental_naive(d)]
FUND_500 = [d for d in range(-500, 501) if fundamental_naive(d)]


@pytest.mark.parametrize("d,n,expected", [(5, 5, 0), (5, 3, -1), (-4, 3, -1), (8, 3, -1)])
def test_kronecker_examples(d, n, expected):
    assert kronecker(d, n) == expected


def test_kronecker_conventions():
    assert kronecker(1, 0) == 1
    assert kronecker(-1, 0) == 1
    assert kronecker(5, 0) == 0
    assert [kronecker(-4, n) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]


@given(st.integers(-10**6, 10**6), st.integers(-10**4, 10**4))
def test_kronecker_matches_euler_oracle(d, n):
    assert kronecker(d, n) == kronecker_oracle(d, n)


@given(st.integers(-10**6, 10**6), st.integers(0, 10**5).map(lambda k: 2 * k + 1))
def test_jacobi_matches_oracle(a, m):
    assert jacobi(a, m) == kronecker_oracle(a, m)


def test_jacobi_rejects_even_modulus():
    with pytest.raises(ValueError):
        jacobi(3, 10)


def test_complete_multiplicativity():
    ns = np.arange(1, 201)
    for d in FUND_200:
        row = [kronecker(d, int(n)) for n in ns]
        table = np.outer(row, row)
        for m in range(1, 201, 7):
            for n in range(1, 201, 3):
                assert kronecker(d, m * n) == table[m - 1, n - 1]


def test_periodicity_and_vanishing():
    for d in FUND_500:
        q = abs(d)
        for n in range(1, 3 * q + 1):
            v = kronecker(d, n)
            assert v == kronecker(d, n + q)
            assert (v == 0) == (math.gcd(q, n) > 1)


def test_parity_sign():
    for d in enumerate_fundamental(-10**4, 10**4):
        assert kronecker(d, -1) == (1 if d > 0 else -1)


def test_primitive_conductor():
    # no proper divisor of |d| is a period of chi_d
    for d in FUND_200:
        q = abs(d)
        row = [kronecker(d, n) for n in range(1, 2 * q + 1)]
        for p in naive_factor(q):
            period = q // p
            assert any(row[i] != row[i + period] for i in range(q))


@pytest.mark.parametrize("d,expected", [(8, True), (9, False), (-11, True), (1, False), (0, False),
                                        (-4, True), (12, True), (-3, True), (13, True), (-1, False)])
def test_is_fundamental_examples(d, expected):
    assert is_fundamental(d) is expected


def test_fundamental_discriminant_type():
    assert FundamentalDiscriminant(-11) == -11
    assert FundamentalDiscriminant(-11).conductor == 11
    assert not FundamentalDiscriminant(-11).is_even
    with pytest.raises(NotFundamentalError):
        FundamentalDiscriminant(9)


@pytest.mark.parametrize("lo,hi,expected", [
    (-12, 12, [-11, -8, -7, -4, -3, 5, 8, 12]),
    (2, 4, []),
    (5, 5, [5]),
])
def test_enumerate_examples(lo, hi, expected):
    assert enumerate_fundamental(lo, hi) == expected


def test_enumerate_rejects_reversed():
    with pytest.raises(ValueError):
        enumerate_fundamental(3, 2)


def test_enumerate_matches_bruteforce():
    expected = [d for d in range(-10**4, 10**4 + 1) if fundamental_naive(d)]
    assert enumerate_fundamental(-10**4, 10**4) == expected


@pytest.mark.parametrize("lo,hi,block", [(-30_000, 30_000, 7_777), (-25_001, -10_002, 4_096),
                                         (10_003, 40_000, 10**6)])
def test_sieve_path_matches_bruteforce(lo, hi, block):
    got = [int(d) for b in fundamental_blocks(lo, hi, block) for d in b]
    assert got == [d for d in range(lo, hi + 1) if fundamental_naive(d)]


def test_window_discriminants():
    assert window_discriminants(5).tolist() == [-8, -7, 8]
    assert window_discriminants(3).tolist() == [-4, 5]


def test_count_fundamental_small():
    assert count_fundamental(12) == 8
    assert count_fundamental(10**4) == len(enumerate_fundamental(-10**4, 10**4))


def test_squarefree_mask():
    mask = squarefree_mask(1, 5000)
    assert mask.tolist() == [squarefree_naive(n) for n in range(1, 5001)]
    mask = squarefree_mask(98_000, 99_000)
    assert mask.tolist() == [squarefree_naive(n) for n in range(98_000, 99_001)]


@pytest.mark.parametrize("n,expected", [(12, (3, 2)), (1, (1, 1)), (360, (10, 6))])
def test_squarefree_decompose_examples(n, expected):
    assert squarefree_decompose(n)[1:] == expected


def test_squarefree_decompose_roundtrip():
    for n in range(1, 10**5 + 1):
        _, n0, n1 = squarefree_decompose(n)
        assert n0 * n1 * n1 == n
        assert mobius(n0) != 0


def test_squarefree_decompose_rejects_zero():
    with pytest.raises(ValueError):
        squarefree_decompose(0)


@pytest.mark.parametrize("n,expected", [(12, 0), (30, -1), (1, 1), (2, -1), (6, 1)])
def test_mobius(n, expected):
    assert mobius(n) == expected


def test_mobius_rejects_zero():
    with pytest.raises(ValueError):
        mobius(0)


@pytest.mark.parametrize("n,expected", [(12, 3), (97, 97), (1001, 13), (2, 2)])
def test_largest_prime_factor(n, expected):
    assert largest_prime_factor(n) == expected


def test_largest_prime_factor_rejects_small():
    with pytest.raises(ValueError):
        largest_prime_factor(1)


@settings(max_examples=300)
@given(st.integers(1, 10**12))
def test_factorize_matches_naive(n):
    f = factorize(n)
    assert math.prod(p ** e for p, e in f.items()) == n
    if n < 10**9:
        assert f == naive_factor(n)


def test_prime_table():
    t = prime_table(100)
    assert isinstance(t, PrimeTable)
    assert len(t.primes) == 25 and t.primes[-1] == 97
    assert 97 in t and 91 not in t
    assert len(set(t.primes)) == len(t.primes)
    with pytest.raises(ValueError):
        _ = 101 in t


def test_kronecker_column_matches_scalar():
    ds = np.array(FUND_500)
    for n in list(range(-30, 31)) + [64, 360, 1001, 4096, 99991]:
        assert kronecker_column(ds, n).tolist() == [kronecker(int(d), n) for d in ds]


def test_character_matrix_matches_scalar():
    ds = np.array(FUND_200 + [-3, 5])
    chi = character_matrix(ds, 450)
    for i, d in enumerate(ds):
        assert chi[i].tolist() == [kronecker(int(d), m) for m in range(451)]
