import pytest

from tmotives.fields import FieldTower
from tmotives.linalg import Mat
from tmotives.motive import Base, Motive, TorsionBoldModule, carlitz
from tmotives.poly import Poly


@pytest.fixture(scope="session")
def tower3():
    return FieldTower(3)


@pytest.fixture(scope="session")
def lv1(tower3):
    return tower3.level(1)


@pytest.fixture(scope="session")
def alpha(tower3):
    L2 = tower3.level(2)
    return next(x for x in L2.elements() if x * x == L2.from_int(-1))


@pytest.fixture(scope="session")
def base9(tower3, alpha):
    """K = F_9, theta = alpha with alpha^2 = -1 (special characteristic)."""
    return Base(tower3, 2, theta=alpha)


@pytest.fixture(scope="session")
def base3u(tower3):
    """K = F_3(u), theta = u (generic characteristic)."""
    return Base(tower3, 1, rational=True)


@pytest.fixture(scope="session")
def carlitz9(base9):
    return Motive(carlitz(base9))


@pytest.fixture(scope="session")
def p_t(lv1):
    return Poly.from_ints(lv1, [0, 1])


@pytest.fixture(scope="session")
def p_t1(lv1):
    return Poly.from_ints(lv1, [1, 1])


def torsion_from_concrete(base, tmat_rows, taumat_rows):
    """Present (K^ell, t = tmat, tau = taumat * sigma) as a TorsionBoldModule."""
    from tmotives.galois import cyclic_presentation, sum_entries
    K = base.K
    divisors, gens, express = cyclic_presentation(K, tmat_rows)
    ell = len(tmat_rows)
    tau_cols = []
    for g in gens:
        sg = [c.frob(1) for c in g]
        img = [sum_entries(taumat_rows, r, sg, K) for r in range(ell)]
        tau_cols.append(express(img))
    n = len(divisors)
    tau = Mat(base.poly_ring(), [[tau_cols[j][i] for j in range(n)] for i in range(n)])
    return TorsionBoldModule(base, divisors, tau)
