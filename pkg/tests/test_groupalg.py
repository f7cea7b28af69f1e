import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import nilval.nilgroup as ng
from nilval.groupalg import (AlgebraElement, AlgebraError, BSeries, FiniteField, ValueBeyondCutoff,
                             expand_b_form, f_value, graded_symbol_alg, standard_form, w_value)
from nilval.nilgroup import abelian, heisenberg, unipotent
from nilval.padic import ABOVE, ValueQ
from nilval.pval import PValuation

N = 6


def one(spec):
    return AlgebraElement.one(spec, N)


def grp(spec, coords, c=1):
    return AlgebraElement.group(spec.element(coords, N), c)


def poly_power_oracle(lam, p, D):
    """(1 + b)^lam mod (p, b^(D+1)) by repeated squaring of coefficient lists."""
    result = [1] + [0] * D
    base = [1, 1] + [0] * (D - 1)

    def mul(a, b):
        out = [0] * (D + 1)
        for i, ai in enumerate(a):
            if ai:
                for j in range(D + 1 - i):
                    out[i + j] = (out[i + j] + ai * b[j]) % p
        return out

    while lam:
        if lam & 1:
            result = mul(result, base)
        lam >>= 1
        base = mul(base, base)
    return {(k,): c for k, c in enumerate(result) if c}


# ---- exact algebra -------------------------------------------------------------

def test_alg_mul_examples():
    H = heisenberg(3)
    x, y = grp(H, (1, 0, 0)), grp(H, (0, 1, 0))
    assert x * one(H) == x
    X, Y = x - 1, y - 1
    diff = X * Y - Y * X
    assert not diff.is_zero()
    # xy - yx with yx read off the matrix product
    mod = 3 ** N
    M = ng._mat_mul(H.matrices[1], H.matrices[0], mod)
    yx = (M[0][1], M[1][2], M[0][2] - M[0][1] * M[1][2])
    assert diff == grp(H, (1, 1, 0)) - grp(H, yx)


def test_freshmans_dream_for_central_elements():
    for p in (2, 3, 5):
        H = heisenberg(p)
        z = grp(H, (0, 0, 1))
        assert (z - 1) ** p == grp(H, (0, 0, p)) - 1


def test_serialisation_round_trip():
    H = heisenberg(3)
    rng = random.Random(0)
    x = sum((grp(H, H.random_element(rng, N).coords, rng.randrange(1, 3)) for _ in range(5)),
            AlgebraElement.zero(H, N))
    assert AlgebraElement.loads(x.dumps(), H) == x
    w = PValuation.diagonal(H, [1, 1, 2])
    s = expand_b_form(x - 1, w, 6)
    again = BSeries.loads(s.dumps(), H)
    assert again == s and again.dumps() == s.dumps()


def test_extension_field():
    F4 = FiniteField(2, [1, 1, 1])  # X^2 + X + 1
    assert all(F4.mul(a, F4.inv(a)) == 1 for a in range(1, 4))
    with pytest.raises(AlgebraError):
        FiniteField(2, [1, 0, 1])  # (X + 1)^2
    H = heisenberg(2)
    w = PValuation.diagonal(H, [1, 1, 2])
    omega_elt = 2  # the class of X, a primitive cube root of unity
    x = AlgebraElement(H, N, {(1, 0, 0): omega_elt, (0, 0, 0): omega_elt}, F4)
    assert w_value(x, w, 4) == ValueQ(1)
    assert AlgebraElement.loads(x.dumps(), H) == x


# ---- expansions and w ------------------------------------------------------------

def test_expand_examples():
    H = heisenberg(3)
    w = PValuation.diagonal(H, [1, 1, 2])
    assert expand_b_form(AlgebraElement.b(H, 0, N), w, 6).terms == {(1, 0, 0): 1}
    A1 = abelian(3, 1)
    w1 = PValuation.diagonal(A1, [1])
    assert expand_b_form(grp(A1, (3,)) - 1, w1, 4).terms == {(3,): 1}
    H2 = heisenberg(2)
    w2 = PValuation.diagonal(H2, [1, 1, 2])
    s = expand_b_form(grp(H2, (-1, 0, 0)) - 1, w2, 8)
    assert s.terms == {(k, 0, 0): 1 for k in range(1, 9)}


def test_w_examples():
    H = heisenberg(3)
    w = PValuation.diagonal(H, [1, 1, 2])
    for i, t in enumerate([1, 1, 2]):
        assert w_value(AlgebraElement.b(H, i, N), w, 6) == ValueQ(t)
    assert w_value(AlgebraElement.zero(H, N), w, 6) == ValueQ(6, ABOVE)
    assert str(w_value(AlgebraElement.zero(H, N), w, 6)) == "> 6"


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6), st.integers(1, 12))
def test_rank_one_expansion_matches_polynomial_power(p, lam, D):
    A1 = abelian(p, 1)
    w = PValuation.diagonal(A1, [1])
    lam %= p ** N
    got = expand_b_form(grp(A1, (lam,)), w, D).terms
    assert got == poly_power_oracle(lam, p, D)


@pytest.mark.parametrize("make,vals", [(lambda: heisenberg(3), [1, 1, 2]),
                                       (lambda: heisenberg(2), [Fraction(3, 2), Fraction(3, 2), 3]),
                                       (lambda: unipotent(4, 3), [1, 1, 1, 2, 2, 3])])
def test_expansion_is_multiplicative(make, vals):
    spec = make()
    w = PValuation.diagonal(spec, vals)
    D = 6 * min(vals)
    rng = random.Random(11)
    for _ in range(15):
        a = grp(spec, spec.random_element(rng, N).coords) - 1
        b = grp(spec, spec.random_element(rng, N).coords) + grp(spec, spec.random_element(rng, N).coords, 2)
        assert expand_b_form(a * b, w, D) == expand_b_form(a, w, D) * expand_b_form(b, w, D)


def test_unit_invariance_and_product_rule():
    H = heisenberg(3)
    w = PValuation.diagonal(H, [1, 1, 2])
    rng = random.Random(12)
    for _ in range(40):
        x = grp(H, H.random_element(rng, N).coords) - 1
        y = grp(H, H.random_element(rng, N).coords) - 1
        u = grp(H, H.random_element(rng, N).coords)
        wx, wy = w_value(x, w, 8), w_value(y, w, 8)
        assert w_value(u * x, w, 8) == wx == w_value(x * u, w, 8)
        if wx.exact and wy.exact and wx.q + wy.q <= 7:
            assert w_value(x * y, w, 8) == wx + wy


# ---- standard form and f ------------------------------------------------------------

def test_standard_form_examples():
    H = heisenberg(3)
    z = grp(H, (0, 0, 1))
    sf = standard_form(z - 1)
    assert list(sf.entries) == [(0, 0)] and sf.entries[(0, 0)] == z - 1
    X = AlgebraElement.b(H, 0, N)
    sf = standard_form(X)
    assert list(sf.entries) == [(1, 0)] and sf.entries[(1, 0)] == one(H)
    x = grp(H, (1, 0, 0))
    sf = standard_form(z * x - x)
    assert set(sf.entries) == {(0, 0), (1, 0)}
    assert all(r == z - 1 for r in sf.entries.values())


def test_f_examples():
    H = heisenberg(3)
    w = PValuation.diagonal(H, [1, 1, 2])
    for i in range(2):
        c = AlgebraElement.b(H, i, N)
        assert f_value(c, w, 6) == w_value(c, w, 6) == ValueQ(1)
    z1 = grp(H, (0, 0, 1)) - 1
    assert f_value(z1, w, 6) == w_value(z1, w, 6) == ValueQ(2)
    H2 = heisenberg(2)
    w2 = PValuation.diagonal(H2, [1, 1, 2])
    X = AlgebraElement.b(H2, 0, N)
    d = grp(H2, (-1, 0, 0)) - 1 - X
    assert f_value(X, w2, 8) == ValueQ(1)
    assert f_value(d, w2, 8) == f_value(X * X, w2, 8) == ValueQ(2)
    assert f_value(AlgebraElement.zero(H2, N), w2, 8) == ValueQ(8, ABOVE)


def test_f_is_superadditive_on_products():
    H = heisenberg(3)
    w = PValuation.diagonal(H, [1, 1, 2])
    rng = random.Random(13)
    for _ in range(25):
        x = grp(H, H.random_element(rng, N).coords) - 1
        y = grp(H, H.random_element(rng, N).coords) - grp(H, H.random_element(rng, N).coords)
        fx, fy, fxy = f_value(x, w, 8), f_value(y, w, 8), f_value(x * y, w, 8)
        if fx.exact and fy.exact and fx.q + fy.q <= 8:
            assert fxy.q >= fx.q + fy.q


def test_graded_symbols():
    H = heisenberg(3)
    w = PValuation.diagonal(H, [1, 1, 2])
    X, Y = AlgebraElement.b(H, 0, N), AlgebraElement.b(H, 1, N)
    assert graded_symbol_alg(X, w) == {(1, 0, 0): 1}
    assert graded_symbol_alg(X * Y, w, "w", 6) == {(1, 1, 0): 1}
    assert graded_symbol_alg(X * Y, w, "f", 6) == {(1, 1, 0): 1}
    H2 = heisenberg(2)
    w2 = PValuation.diagonal(H2, [1, 1, 2])
    X2 = AlgebraElement.b(H2, 0, N)
    d = grp(H2, (-1, 0, 0)) - 1 - X2
    assert graded_symbol_alg(d, w2, "f", 8) == {(2, 0, 0): 1}
    with pytest.raises(ValueBeyondCutoff):
        graded_symbol_alg(AlgebraElement.zero(H, N), w)
