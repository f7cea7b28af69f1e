import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nilval.padic import (ABOVE, AT_LEAST, INFINITY, IndeterminateComparison, InsufficientPrecision,
                          MatrixZp, NotAUnit, PAdicInt, ValueQ, binom_mod_p, ge, gt, lucas_table,
                          min_nonzero_binom, unit_inverse, veq, vmin, vp)

primes = st.sampled_from([2, 3, 5, 7])


def brute_vp(r, p, N):
    k = 0
    while k < N and r % p ** (k + 1) == 0:
        k += 1
    return k


# ---- examples ----------------------------------------------------------------

def test_vp_examples():
    assert vp(PAdicInt(2, 8, 1)) == (0, True)
    assert vp(PAdicInt(2, 8, 12)) == (2, True)
    zero = vp(PAdicInt(3, 4, 0))
    assert zero.value == 4 and not zero.exact
    assert str(zero) == ">= 4"


def test_unit_inverse_examples():
    assert unit_inverse(PAdicInt(5, 3, 1)).r == 1
    brute = next(b for b in range(16) if 3 * b % 16 == 1)
    assert unit_inverse(PAdicInt(2, 4, 3)).r == brute == 11
    with pytest.raises(NotAUnit):
        unit_inverse(PAdicInt(3, 2, 6))


def test_binom_examples():
    assert binom_mod_p(PAdicInt(2, 8, 7), 3) == math.comb(7, 3) % 2 == 1
    assert binom_mod_p(PAdicInt(3, 4, 3), 1) == 0
    assert binom_mod_p(PAdicInt(5, 2, 17), 0) == 1
    with pytest.raises(InsufficientPrecision):
        binom_mod_p(PAdicInt(2, 3, 5), 8)


def test_min_nonzero_binom_examples():
    assert min_nonzero_binom(PAdicInt(3, 5, 9)) == 9
    assert min_nonzero_binom(PAdicInt(5, 5, 7)) == 1
    assert min_nonzero_binom(PAdicInt(2, 5, 4)) == 4
    assert next(n for n in range(1, 5) if math.comb(4, n) % 2) == 4
    with pytest.raises(InsufficientPrecision):
        min_nonzero_binom(PAdicInt(2, 5, 0))


def test_negative_residues_as_padic():
    # -1 in Z_2 has every digit 1, so C(-1, n) = (-1)^n is odd for every n
    minus_one = PAdicInt(2, 6, -1)
    assert all(binom_mod_p(minus_one, n) == 1 for n in range(64))


def test_mixed_precision_truncates():
    a = PAdicInt(3, 5, 100) + PAdicInt(3, 2, 4)
    assert a.N == 2 and a.r == 104 % 9


# ---- ValueQ --------------------------------------------------------------------

def test_valueq_ordering_and_bounds():
    assert ValueQ(2) < ValueQ(3) and INFINITY > ValueQ(100)
    assert ValueQ(1) + INFINITY == INFINITY
    assert str(ValueQ(Fraction(3, 2))) == "3/2"
    lower = ValueQ(8, AT_LEAST)
    assert gt(lower, ValueQ(7)) is True
    assert gt(lower, ValueQ(8)) is None
    assert ge(lower, ValueQ(8)) is True
    assert gt(ValueQ(8, ABOVE), ValueQ(8)) is True
    assert veq(lower, ValueQ(9)) is None
    with pytest.raises(IndeterminateComparison):
        lower > ValueQ(9)


def test_vmin_tracks_bounds():
    assert vmin(ValueQ(2), ValueQ(5, AT_LEAST)) == ValueQ(2)
    assert vmin(ValueQ(7), ValueQ(5, AT_LEAST)) == ValueQ(5, AT_LEAST)
    assert vmin() == INFINITY


# ---- properties -----------------------------------------------------------------

@given(primes, st.integers(1, 8), st.integers(0, 10 ** 6))
def test_vp_matches_brute_force(p, N, r):
    v = vp(PAdicInt(p, N, r))
    assert v.value == brute_vp(r % p ** N, p, N)
    assert v.exact == (r % p ** N != 0)


@given(primes, st.integers(2, 8), st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_vp_multiplicative_and_ultrametric(p, N, x, y):
    a, b = PAdicInt(p, N, x), PAdicInt(p, N, y)
    va, vb = vp(a), vp(b)
    if va.exact and vb.exact and va.value + vb.value < N:
        assert vp(a * b).value == va.value + vb.value
    if va.exact and vb.exact:
        assert vp(a + b).value >= min(va.value, vb.value)


@given(primes, st.integers(1, 8), st.integers(0, 10 ** 6))
def test_unit_inverse_involution(p, N, r):
    a = PAdicInt(p, N, r)
    if r % p == 0:
        with pytest.raises(NotAUnit):
            unit_inverse(a)
        return
    b = unit_inverse(a)
    assert (a * b).r == 1
    assert unit_inverse(b) == a


@given(primes, st.integers(0, 1 << 20), st.integers(0, 64))
def test_binom_matches_multiplicative_formula(p, b, n):
    # factorial-free exact product: C(b, n) = prod (b - i) / (i + 1)
    c = 1
    for i in range(n):
        c = c * (b - i) // (i + 1)
    assert binom_mod_p(b, n, p=p) == c % p


@settings(max_examples=60)
@given(primes, st.integers(1, 5000))
def test_min_nonzero_binom_is_minimal(p, b):
    N = 1
    while p ** N <= b:
        N += 1
    m = min_nonzero_binom(PAdicInt(p, N, b))
    assert m == p ** brute_vp(b, p, N)
    assert binom_mod_p(PAdicInt(p, N, b), m) != 0
    assert all(binom_mod_p(PAdicInt(p, N, b), n) == 0 for n in range(1, m))


def test_lucas_table_agrees_with_comb():
    t = lucas_table(5, 60, 60)
    assert all(t[b, n] == math.comb(b, n) % 5 for b in range(60) for n in range(60))


def test_matrix_basics():
    M = MatrixZp(3, 4, [[1, 3], [0, -1]])
    assert M.is_invertible() and not M.is_identity()
    assert (M @ M).is_identity()  # [[1, 3], [0, -1]] is an involution
    assert M.signed_rows() == [[1, 3], [0, -1]]
    assert MatrixZp(3, 4, [[3, 0], [0, 1]]).is_invertible() is False
