import random

import pytest

from tmotives.errors import NotTorsion
from tmotives.linalg import (Mat, char_ideal, compound_matrix, field_inverse,
                             lattice_basis, lattice_contains, mat_to_frac,
                             smith_form, sylvester_resultant)
from tmotives.poly import (FracField, Poly, PolyRing, QuotRing, RatFunc,
                           factor, is_irreducible, poly_gcd, poly_xgcd, roots)


# -- polynomial basics --------------------------------------------------------


def test_xgcd_identity(tower3):
    L = tower3.level(2)
    rng = random.Random(3)
    for _ in range(15):
        a = Poly(L, [L.random(rng) for _ in range(4)])
        b = Poly(L, [L.random(rng) for _ in range(3)])
        if a.is_zero() or b.is_zero():
            continue
        g, s, t = poly_xgcd(a, b)
        assert s * a + t * b == g
        assert (a % g).is_zero() and (b % g).is_zero()


def test_factor_reconstructs(tower3):
    L = tower3.level(2)
    rng = random.Random(7)
    for _ in range(10):
        f = Poly(L, [L.random(rng) for _ in range(5)])
        if f.degree < 1:
            continue
        f = f.monic()
        prod = Poly.one(L)
        for irr, mult in factor(f, rng):
            assert is_irreducible(irr)
            prod = prod * irr**mult
        assert prod == f


def test_roots_vs_bruteforce(tower3):
    L = tower3.level(2)
    rng = random.Random(9)
    f = Poly.from_ints(L, [1, 0, 1])  # t^2+1 splits over F_9
    rts = roots(f, rng)
    brute = [x for x in L.elements() if f.evaluate(x) == L.zero()]
    assert sorted(r.coeffs for r in rts) == sorted(b.coeffs for b in brute)


def test_ratfunc_reduction(tower3):
    L = tower3.level(1)
    num = Poly.from_ints(L, [1, 0, 1]) * Poly.from_ints(L, [1, 1])
    den = Poly.from_ints(L, [1, 1]) * Poly.from_ints(L, [0, 1])
    r = RatFunc(num, den)
    assert r.den == Poly.from_ints(L, [0, 1])
    assert r.den.is_monic()
    assert poly_gcd(r.num, r.den).degree == 0


def test_quot_ring_inverse(tower3):
    L = tower3.level(1)
    ring = QuotRing(Poly.from_ints(L, [0, 0, 0, 1]))  # F_3[t]/t^3
    x = ring.from_poly(Poly.from_ints(L, [1, 1]))
    assert x * x.inv() == ring.one()
    with pytest.raises(ZeroDivisionError):
        ring.x().inv()


# -- smith normal form --------------------------------------------------------


def _pr(base):
    return base.poly_ring()


def test_smith_identity(base9):
    ring = _pr(base9)
    m = Mat.identity(ring, 3)
    _, d, _ = smith_form(m)
    assert d == m


def test_smith_diag_chain(base9):
    ring = _pr(base9)
    t = ring.x()
    m = Mat.diag(ring, [t, t * t])
    u, d, v = smith_form(m)
    assert d[0, 0] == t and d[1, 1] == t * t
    assert (u * m * v) == d


def test_smith_offdiag(base9):
    ring = _pr(base9)
    t, one, zero = ring.x(), ring.one(), ring.zero()
    m = Mat(ring, [[t, one], [zero, t]])
    u, d, v = smith_form(m)
    assert d[0, 0] == one
    assert d[1, 1] == t * t
    assert (u * m * v) == d


def test_smith_random_properties(base9):
    ring = _pr(base9)
    K = base9.K
    rng = random.Random(17)
    for _ in range(25):
        n = rng.choice([2, 3])
        m = Mat(ring, [[Poly(K, [K.random(rng) for _ in range(rng.randrange(1, 4))])
                        for _ in range(n)] for _ in range(n)])
        u, d, v = smith_form(m)
        assert (u * m * v) == d, "exact identity"
        assert u.det().degree == 0 and v.det().degree == 0, "unimodular transforms"
        prev = None
        for i in range(n):
            cur = d[i, i]
            if cur:
                assert cur.is_monic()
            if prev is not None and prev and cur:
                assert (cur % prev).is_zero(), "divisibility chain"
            if prev is not None and not prev:
                assert not cur, "zeros trail the chain"
            prev = cur


def test_smith_rational_coefficients(base3u):
    # Smith over F_3(u)[t]
    ring = _pr(base3u)
    K = base3u.K
    t = ring.x()
    u_const = Poly.const(K, K.gen())
    m = Mat(ring, [[t - u_const, ring.one()], [ring.zero(), t - u_const]])
    u_, d, v_ = smith_form(m)
    assert (u_ * m * v_) == d
    assert d[0, 0].degree == 0
    assert d[1, 1].degree == 2


# -- characteristic ideal -----------------------------------------------------


def test_char_ideal_examples(base9, alpha):
    K = base9.K
    tp = base9.char_point()
    out = char_ideal([tp, tp * tp])
    assert out == (tp**3).monic()
    # zero module: empty product is the unit ideal
    assert char_ideal([Poly.one(K)]) == Poly.one(K)
    tsq1 = base9.lift_fq_poly(Poly.from_ints(base9.tower.level(1), [1, 0, 1]))
    assert char_ideal([tsq1]) == tsq1.monic()


def test_char_ideal_multiplicative(base9):
    K = base9.K
    rng = random.Random(23)
    for _ in range(10):
        d1 = Poly(K, [K.random(rng), K.random(rng), K.one()])
        d2 = Poly(K, [K.random(rng), K.one()])
        assert char_ideal([d1, d2]) == char_ideal([d1]) * char_ideal([d2])


def test_char_ideal_rejects_free_part(base9):
    with pytest.raises(NotTorsion):
        char_ideal([Poly.zero(base9.K)])


# -- determinants, compounds, lattices ----------------------------------------


def test_det_matches_cofactor_bruteforce(base9):
    import itertools
    K = base9.K
    ring = _pr(base9)
    rng = random.Random(31)
    for n in (2, 3):
        m = Mat(ring, [[Poly(K, [K.random(rng), K.random(rng)]) for _ in range(n)]
                       for _ in range(n)])
        brute = Poly.zero(K)
        for perm in itertools.permutations(range(n)):
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = Poly.one(K)
            for i in range(n):
                term = term * m[i, perm[i]]
            brute = brute + (term if sign == 1 else -term)
        assert m.det() == brute


def test_compound_top_is_det(base9):
    ring = _pr(base9)
    t = ring.x()
    m = Mat(ring, [[t, ring.one()], [ring.zero(), t]])
    assert compound_matrix(m, 2)[0, 0] == m.det()


def test_lattice_membership(base9):
    ring = _pr(base9)
    t = ring.x()
    basis = lattice_basis(Mat(ring, [[t, ring.zero()], [ring.zero(), ring.one()]]))
    assert lattice_contains(basis, [t, ring.zero()])
    assert not lattice_contains(basis, [ring.one(), ring.zero()])


def test_sylvester_resultant_squarefree_detection(tower3):
    lv1 = tower3.level(1)
    ring = QuotRing(Poly.from_ints(lv1, [0, 0, 0, 1]))
    x = Poly(ring, (ring.zero(), ring.one()))
    sq = (x - Poly.const(ring, ring.one())) * (x - Poly.const(ring, ring.one()))
    res = sylvester_resultant(sq, sq.derivative(), ring)
    assert not res
    dist = (x - Poly.const(ring, ring.one())) * (x + Poly.const(ring, ring.one()))
    res2 = sylvester_resultant(dist, dist.derivative(), ring)
    assert res2
