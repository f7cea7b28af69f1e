import random

import pytest

from nilval import autos as A
from nilval.groupalg import AlgebraElement, expand_b_form, w_value
from nilval.nilgroup import GroupSpec, abelian, heisenberg, unipotent
from nilval.padic import INFINITY, MatrixZp, ValueQ
from nilval.pval import PValuation

N = 6


def inversion(H):
    return A.make_automorphism(H, [(-1, 0, 0), (0, -1, 0), (0, 0, 1)], N=N, order=2)


def test_make_automorphism_examples():
    H = heisenberg(3)
    ident = A.make_automorphism(H, H.generators(N))
    assert ident.is_identity()
    inv = inversion(H)
    assert inv.order == 2
    with pytest.raises(A.RelationViolation):
        A.make_automorphism(H, [(-1, 0, 0), (0, 1, 0), (0, 0, 1)], N=N)
    with pytest.raises(A.NotBijective):
        A.make_automorphism(abelian(3, 2), [(1, 1), (2, 2)], N=N)
    # in an abelian group with a declared chain, L need not be characteristic
    flat = GroupSpec(3, ("a", "b", "c"), {}, l=1, m=2, label="flat")
    with pytest.raises(A.SubgroupNotPreserved):
        A.make_automorphism(flat, [(0, 0, 1), (0, 1, 0), (1, 0, 0)], N=N)


def test_apply_to_algebra_examples():
    H = heisenberg(2)
    inv = inversion(H)
    one = AlgebraElement.one(H, N)
    assert A.apply_to_algebra(inv, one) == one
    X = AlgebraElement.b(H, 0, N)
    assert A.apply_to_algebra(inv, X) == AlgebraElement.group(H.element((-1, 0, 0), N)) - 1
    rng = random.Random(0)
    H3 = heisenberg(3)
    sigma = A.random_automorphism(H3, rng, N)
    for _ in range(10):
        a = AlgebraElement.group(H3.random_element(rng, N)) - 1
        b = AlgebraElement.group(H3.random_element(rng, N)) + 1
        assert A.apply_to_algebra(sigma, a * b) == A.apply_to_algebra(sigma, a) * A.apply_to_algebra(sigma, b)


def test_induced_matrix_examples():
    H2 = heisenberg(2)
    assert A.induced_matrix(A.identity(H2, N)).is_identity()
    M = A.induced_matrix(inversion(H2))
    assert M.signed_rows() == [[-1, 0], [0, -1]]
    assert A.in_gamma1(M) and not M.is_identity()
    H3 = heisenberg(3)
    assert A.induced_matrix(A.inner(H3.generator(0, N))).is_identity()
    assert not A.in_gamma1(A.induced_matrix(inversion(H3)))
    assert A.in_gamma1(MatrixZp.identity(3, N, 2))


def test_induced_matrix_is_multiplicative():
    rng = random.Random(1)
    for spec in (heisenberg(3), unipotent(4, 3)):
        for _ in range(10):
            s, t = A.random_automorphism(spec, rng, N), A.random_automorphism(spec, rng, N)
            assert A.induced_matrix(A.compose(s, t)) == A.induced_matrix(s) @ A.induced_matrix(t)


def test_inverse_and_power():
    rng = random.Random(2)
    for spec in (heisenberg(5), unipotent(4, 3)):
        sigma = A.random_automorphism(spec, rng, N)
        inv = A._solve_inverse(sigma)
        assert A.compose(sigma, inv).is_identity() and A.compose(inv, sigma).is_identity()
        assert A.power(sigma, 3) == A.compose(sigma, A.compose(sigma, sigma))
        assert A.power(sigma, -1) == inv


def test_moves_up_examples():
    assert A.check_condition_1_1 is A.check_moves_up
    H2 = heisenberg(2)
    w2 = PValuation.diagonal(H2, [1, 1, 2])
    rep = A.check_moves_up(A.identity(H2, N), w2)
    assert rep.passed and all(c.moved == INFINITY for c in rep.checks)
    rep = A.check_moves_up(inversion(H2), w2)
    assert rep.passed and [c.moved for c in rep.checks] == [ValueQ(2), ValueQ(2)]
    H3 = heisenberg(3)
    swap = A.make_automorphism(H3, [(0, 1, 0), (1, 0, 0), (0, 0, -1)], N=N)
    rep = A.check_moves_up(swap, PValuation.diagonal(H3, [1, 1, 2]))
    assert not rep.passed and rep.checks[0].moved == ValueQ(1)


def test_f_increase_examples():
    H2 = heisenberg(2)
    w2 = PValuation.diagonal(H2, [1, 1, 2])
    ident = A.check_f_increase(A.identity(H2, N), w2, 8)
    assert ident.passed and str(ident.checks[0].moved) == "> 8"
    rep = A.check_f_increase(inversion(H2), w2, 8)
    assert rep.passed and [str(c.moved) for c in rep.checks] == ["2", "2"]
    H3 = heisenberg(3)
    swap = A.make_automorphism(H3, [(0, 1, 0), (1, 0, 0), (0, 0, -1)], N=N)
    assert not A.check_f_increase(swap, PValuation.diagonal(H3, [1, 1, 2]), 6).passed


def test_cutoff_rule():
    D = 8
    assert A.strictly_above(ValueQ(D, ">"), ValueQ(7), D) == (True, "")
    verdict, note = A.strictly_above(ValueQ(D, ">"), ValueQ(D), D)
    assert verdict is False and note == "inconclusive at cutoff"
    assert A.strictly_above(ValueQ(3), ValueQ(2), D) == (True, "")


def test_w_stable_under_stabilising_automorphism():
    H = heisenberg(3)
    w = PValuation.diagonal(H, [1, 1, 2])
    rng = random.Random(3)
    sigma = A.random_automorphism(H, rng, N)  # any automorphism preserves this omega
    for _ in range(20):
        x = AlgebraElement.group(H.random_element(rng, N)) - AlgebraElement.group(H.random_element(rng, N))
        assert w_value(A.apply_to_algebra(sigma, x), w, 6) == w_value(x, w, 6)


def test_finite_order_pool():
    H = heisenberg(3)
    rng = random.Random(4)
    pool = A.finite_order_heisenberg(H, rng, N, 15)
    for sigma in pool:
        assert A.power(sigma, sigma.order).is_identity()
    with pytest.raises(A.AutomorphismError):
        A.heisenberg_lift(H, 1, 1, 0, 1, N, order=5)


def test_serialisation():
    H = heisenberg(3)
    sigma = inversion(H)
    again = A.Automorphism.loads(sigma.dumps(), H)
    assert again == sigma and again.order == 2
