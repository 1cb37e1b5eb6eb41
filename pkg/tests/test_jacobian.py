import random
from fractions import Fraction

import pytest

from reflwit.invariants import basic_invariants
from reflwit.jacobian import (
    D3_LOCUS,
    chevalley_jacobian,
    d3_locus_check,
    factorization_check,
    group_order_check,
    minor_factorization_check,
    minor_rank,
    root_product,
)
from reflwit.poly import Polynomial
from reflwit.rootsys import build_root_system, is_general

F = Fraction

# lambda in det J = lambda * prod <alpha, x>, roots as listed by build_root_system;
# values come from the sympy oracle in test_oracles.py
LAMBDA = {("Sym", 2): -2, ("Sym", 3): -6, ("Sym", 4): 24, ("B", 2): -8, ("B", 3): -48,
          ("D", 3): 8, ("D", 4): 48, ("I2", 4): -32}


def var(i, n):
    return Polynomial.var(i, n)


def test_d3_jacobian_entries():
    jac = chevalley_jacobian(basic_invariants("D", 3))
    x = [var(i, 3) for i in range(3)]
    assert [jac[i, 0] for i in range(3)] == [2 * x[0], 2 * x[1], 2 * x[2]]
    assert [jac[i, 1] for i in range(3)] == [x[1] * x[2], x[0] * x[2], x[0] * x[1]]
    assert jac[0, 2] == 4 * x[0] ** 3


def test_b2_and_sym2_jacobians():
    x = [var(i, 2) for i in range(2)]
    jb = chevalley_jacobian(basic_invariants("B", 2))
    assert [[jb[i, k] for k in range(2)] for i in range(2)] == [[2 * x[0], 4 * x[0] ** 3], [2 * x[1], 4 * x[1] ** 3]]
    js = chevalley_jacobian(basic_invariants("Sym", 2))
    one = Polynomial.constant(1, 2)
    assert [[js[i, k] for k in range(2)] for i in range(2)] == [[one, 2 * x[0]], [one, 2 * x[1]]]


@pytest.mark.parametrize("key", sorted(LAMBDA))
def test_factorization(key):
    rep = factorization_check(basic_invariants(*key))
    assert rep.residual.is_zero() and rep.ok
    assert rep.lam == LAMBDA[key]


def test_sym2_factorization_details():
    rep = factorization_check(basic_invariants("Sym", 2))
    assert rep.det == Polynomial(2, {(0, 1): 2, (1, 0): -2})
    assert rep.product == Polynomial(2, {(1, 0): 1, (0, 1): -1})


def test_b2_factorization_details():
    rep = factorization_check(basic_invariants("B", 2))
    assert rep.det == Polynomial(2, {(1, 3): 8, (3, 1): -8})
    x1, x2 = var(0, 2), var(1, 2)
    assert rep.product == x1 * x2 * (x1 - x2) * (x1 + x2)


def test_float_factorization_i2():
    rep = factorization_check(basic_invariants("I2", 5))
    assert rep.residual.almost_equal(Polynomial.zero(2, False), 1e-9)
    assert abs(rep.lam) > 1e-6


def test_d3_det_divisible_by_each_root():
    b = basic_invariants("D", 3)
    det = chevalley_jacobian(b).det()
    assert det.degree() == 6
    for a in b.root_system.positive_roots:
        assert det.exact_divide(Polynomial.linear_form(list(a))) is not None


@pytest.mark.parametrize("family,rank", [("B", 2), ("B", 3), ("Sym", 3), ("Sym", 4), ("D", 3)])
def test_det_vanishes_iff_special(family, rank):
    b = basic_invariants(family, rank)
    det = chevalley_jacobian(b).det()
    rng = random.Random(family + str(rank))
    for _ in range(50):
        p = tuple(F(rng.randint(-3, 3)) for _ in range(b.rank))
        assert (det.evaluate(p) != 0) == is_general(b.root_system, p)


def test_root_product_degree():
    rs = build_root_system("B", 3)
    assert root_product(rs).degree() == 9


@pytest.mark.parametrize("point,j,rank", [((1, 1, 1), 3, 1), ((1, 0, 0), 3, 1)])
def test_minor_rank_d3(point, j, rank):
    assert minor_rank(basic_invariants("D", 3), point, j) == rank


def test_minor_rank_b2():
    assert minor_rank(basic_invariants("B", 2), (1, 2), 2) == 2
    assert minor_rank(basic_invariants("B", 2), (1.0, 2.0), 2) == 2


@pytest.mark.parametrize("family,rank", [("B", 2), ("B", 3), ("Sym", 3), ("Sym", 4), ("D", 3)])
def test_minor_factorization_all_j(family, rank):
    b = basic_invariants(family, rank)
    for j in range(1, b.n + 1):
        rep = minor_factorization_check(b, j=j, n_samples=100, seed=0)
        assert rep.tested_points == 100
        assert rep.locus_points > 0 and rep.general_points > 0
        assert rep.ok, (j, rep.equivalence_failures[:3])


def test_minor_check_support_labels():
    assert "proved" in minor_factorization_check(basic_invariants("B", 2), j=1, n_samples=4).support
    assert "supported (type A" in minor_factorization_check(basic_invariants("Sym", 3), j=1, n_samples=4).support
    assert "conjectural" in minor_factorization_check(basic_invariants("D", 4), j=1, n_samples=4).support


def test_minor_check_float_mode():
    rep = minor_factorization_check(basic_invariants("I2", 5), j=1, n_samples=20)
    assert rep.mode == "evidence" and rep.ok


def test_d3_locus():
    rep = d3_locus_check()
    assert rep.ok and len(rep.families) == 7 and all(rep.families.values())
    assert set(rep.families) == set(D3_LOCUS)
    # the minor x3 (x1^2 - x2^2) is -9 at (1, 2, 3); the 2x2 minor of the gradients is twice that
    assert -18 in rep.off_locus_minors
    assert any(v != 0 for v in rep.off_locus_minors)


def test_group_order_check():
    assert group_order_check(basic_invariants("D", 4)) == (192, 192)
