import random

import pytest
from hypothesis import given, settings, strategies as st

from tmotives.errors import DegenerateInseparable
from tmotives.fields import FieldTower
from tmotives.solve import solve_additive


def test_frobenius_alpha(tower3, alpha):
    # alpha^3 = alpha * alpha^2 = -alpha
    assert alpha.frob() == -alpha
    assert alpha.frob(2) == alpha  # Frobenius order s = 2 on F_9


def test_frobenius_fixes_one(tower3):
    one = tower3.level(4).one()
    assert one.frob(5) == one


def test_frobenius_is_field_hom(tower3):
    L = tower3.level(3)
    rng = random.Random(11)
    for _ in range(20):
        a, b = L.random(rng), L.random(rng)
        assert (a + b).frob() == a.frob() + b.frob()
        assert (a * b).frob() == a.frob() * b.frob()


@pytest.mark.parametrize("triple", [(1, 2, 4), (1, 2, 6), (2, 4, 12), (1, 3, 6),
                                    (2, 6, 12), (3, 6, 12), (1, 4, 12)])
def test_embedding_composition_law(tower3, triple):
    a, b, c = triple
    rng = random.Random(sum(triple))
    for _ in range(8):
        x = tower3.level(a).random(rng)
        assert tower3.embed(x, c) == tower3.embed(tower3.embed(x, b), c)


def test_embeddings_are_field_homs(tower3):
    rng = random.Random(5)
    L = tower3.level(2)
    for _ in range(10):
        x, y = L.random(rng), L.random(rng)
        assert tower3.embed(x * y, 6) == tower3.embed(x, 6) * tower3.embed(y, 6)
        assert tower3.embed(x + y, 6) == tower3.embed(x, 6) + tower3.embed(y, 6)


def test_frobenius_fixed_field_is_fq():
    tw = FieldTower(9)  # q = 3^2: F_q itself is not prime
    L = tw.level(2)  # F_81
    fixed = [x for x in L.elements() if x.frob() == x]
    assert len(fixed) == 9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8))
def test_field_arithmetic_laws(i, j):
    tw = FieldTower(3, seed=1)
    L = tw.level(2)
    elems = list(L.elements())
    a, b = elems[i], elems[j]
    assert a + b == b + a
    assert a * b == b * a
    assert a * (a + b) == a * a + a * b
    if b:
        assert (a / b) * b == a


def test_project_and_min_level(tower3, alpha):
    up = tower3.embed(alpha, 8)
    assert tower3.min_level(up) == 2
    assert tower3.project(up, 2) == alpha


# -- solve_additive ----------------------------------------------------------


def test_solve_additive_prime_kernel(tower3, lv1):
    roots, lvl = solve_additive(tower3, 1, lv1.one(), lv1.zero())
    assert lvl == 1
    assert sorted(r.coeffs[0] for r in roots) == [0, 1, 2]


def test_solve_additive_escalates_to_f27(tower3, lv1):
    # exhaustive oracle: x^3 - x = 1 has no root in F_3 and exactly 3 in F_27
    L3 = tower3.level(3)
    brute = [x for x in L3.elements() if x**3 - x == L3.one()]
    assert len(brute) == 3
    assert not any(x**3 - x == lv1.one() for x in lv1.elements())
    roots, lvl = solve_additive(tower3, 1, lv1.one(), lv1.one())
    assert lvl == 3 and len(roots) == 3
    assert sorted(r.coeffs for r in roots) == sorted(b.coeffs for b in brute)


def test_solve_additive_twisted_kernel(tower3, alpha):
    # x^3 = alpha*x: nonzero roots satisfy x^2 = alpha; exhaustive oracle over F_9
    L2 = alpha.level
    brute = [x for x in L2.elements() if x**3 == alpha * x]
    roots, lvl = solve_additive(tower3, 1, alpha, L2.zero())
    assert lvl == 2 and len(roots) == 3 == len(brute)
    nonzero = [r for r in roots if r]
    assert all(r * r == alpha for r in nonzero)


def test_solve_additive_root_count_and_coset(tower3, alpha):
    # all q^d roots; the root set is a coset of the kernel
    L2 = alpha.level
    roots, lvl = solve_additive(tower3, 1, alpha, alpha)
    assert len(roots) == 3
    kernel, _ = solve_additive(tower3, 1, alpha, L2.zero())
    kernel = [tower3.embed(k, lvl) for k in kernel]
    r0 = roots[0]
    assert sorted((r - r0).coeffs for r in roots) == sorted(k.coeffs for k in kernel)


def test_solve_additive_degenerate(tower3, lv1):
    with pytest.raises(DegenerateInseparable):
        solve_additive(tower3, 1, lv1.zero(), lv1.one())
