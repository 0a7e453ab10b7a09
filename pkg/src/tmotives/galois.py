"""Galois-side computations over finite K: the torsion Dieudonne pair,
p-adic Tate approximations with their Frobenius matrices, and the
semisimplicity / Tate-conjecture verdicts.

The absolute Galois group of a finite K is topologically generated by the
arithmetic Frobenius c -> c^(q^s), so all Galois data is a single matrix.

Solving levels are exact, not searched: the fixed space of tau = A * sigma
on a finite module becomes fully rational at level s * ord(prod sigma^i(A)),
the multiplicative order of the s-fold twisted product.
"""

import hashlib

import numpy as np

from .bold import BoldModule, BoldRing, sigma_poly
from .errors import CapExhausted, ValidationError
from .fplinalg import in_span, kernel_basis, rank as fp_rank, solve as fp_solve
from .linalg import Mat, field_inverse, mat_frac_to_poly, mat_to_frac, smith_form
from .motive import TorsionBoldModule, hom_motives
from .poly import (Poly, PolyRing, QuotElem, QuotRing, RatFunc, factor,
                   poly_gcd, poly_xgcd)
from .solve import (ESCALATION_FACTOR, ApnExpander, QuotSpace, apn_basis,
                    apn_coords, semilinear_operator_matrix)

import random


# ---------------------------------------------------------------------------
# Shared presentation machinery: K-space with t-action -> cyclic K[t]-module
# ---------------------------------------------------------------------------


def cyclic_presentation(field, tmat):
    """Present the K[t]-module (K^ell, t acts by tmat) as (+) K[t]/(d_i).

    Returns (divisors, generators, express) where generators are K-vectors
    and express maps a K-vector to its coordinate list (Polys mod d_i)."""
    ring = PolyRing(field)
    ell = len(tmat)
    tpoly = Mat.identity(ring, ell).scale(Poly(field, (field.zero(), field.one())))
    tconst = Mat(ring, [[Poly.const(field, tmat[i][j]) for j in range(ell)] for i in range(ell)])
    U, D, V = smith_form(tpoly - tconst)
    divisors = [D[i, i] for i in range(ell)]
    keep = [i for i, d in enumerate(divisors) if d.degree > 0]
    Uinv = mat_frac_to_poly(field_inverse(mat_to_frac(U)), ring)

    def express(vec):
        """K-vector -> coordinates in the kept cyclic factors."""
        coords = U.apply([Poly.const(field, v) for v in vec])
        return [coords[i] % divisors[i] for i in keep]

    def evaluate_poly_vec(pvec):
        """K[t]^ell vector -> K^ell via t |-> tmat."""
        out = [field.zero()] * ell
        for i, poly in enumerate(pvec):
            # poly(tmat) applied to e_i
            cur = [field.one() if k == i else field.zero() for k in range(ell)]
            for a in range(poly.degree + 1):
                c = poly.coeff(a)
                if c:
                    out = [o + c * cu for o, cu in zip(out, cur)]
                cur = [sum_entries(tmat, r, cur, field) for r in range(ell)]
        return out

    gens = []
    for j in keep:
        gens.append(evaluate_poly_vec([Uinv[i, j] for i in range(ell)]))
    return [divisors[i] for i in keep], gens, express


def sum_entries(mat_rows, r, vec, field):
    acc = field.zero()
    for a, b in zip(mat_rows[r], vec):
        acc = acc + a * b
    return acc


# ---------------------------------------------------------------------------
# Torsion Galois representations and the Dieudonne pair
# ---------------------------------------------------------------------------


class TorsionGaloisRep:
    """Finite A-module with the arithmetic Frobenius action.

    divisors: elementary divisors over F_q[t] (level-1 Polys);
    frob_mat: Mat over F_q[t] in the cyclic presentation (columns reduced
    rowwise); level_m: tower level of the rational solution space."""

    def __init__(self, tower, divisors, frob_mat, level_m, embedding=None):
        self.tower = tower
        self.divisors = list(divisors)
        self.frob_mat = frob_mat
        self.level_m = level_m
        self.embedding = embedding  # solution vectors inside F_{q^M} (x) T
        self._check()

    def _check(self):
        lv1 = self.tower.level(1)
        ring = PolyRing(lv1)
        # frobenius must be A-linear and well-defined: d_j | entries * d_j-shifts
        for j, dj in enumerate(self.divisors):
            for i, di in enumerate(self.divisors):
                if not ((dj * self.frob_mat[i, j]) % di).is_zero():
                    raise ValidationError("Frobenius matrix not well-defined on the module")
        if not self.is_invertible():
            raise ValidationError("Frobenius matrix not invertible")

    def dim_fq(self):
        return sum(d.degree for d in self.divisors)

    def is_invertible(self):
        idx, tmat, fmat = self.concrete()
        lv1 = self.tower.level(1)
        m = Mat(lv1, fmat)
        from .linalg import field_kernel
        return not field_kernel(m)

    def concrete(self):
        """(index list, t-action rows, Frobenius rows) over F_q."""
        lv1 = self.tower.level(1)
        idx = []
        for i, d in enumerate(self.divisors):
            for a in range(d.degree):
                idx.append((i, a))
        pos = {ia: k for k, ia in enumerate(idx)}
        ell = len(idx)
        zero = lv1.zero()
        tmat = [[zero] * ell for _ in range(ell)]
        fmat = [[zero] * ell for _ in range(ell)]
        for k, (i, a) in enumerate(idx):
            tp = Poly(lv1, (zero,) * (a + 1) + (lv1.one(),)) % self.divisors[i]
            for b in range(tp.degree + 1):
                if tp.coeff(b):
                    tmat[pos[(i, b)]][k] = tp.coeff(b)
            for i2 in range(len(self.divisors)):
                img = (self.frob_mat[i2, i].shift(a)) % self.divisors[i2]
                for b in range(img.degree + 1):
                    if img.coeff(b):
                        fmat[pos[(i2, b)]][k] = fmat[pos[(i2, b)]][k] + img.coeff(b)
        return idx, tmat, fmat

    def __repr__(self):
        return f"TorsionGaloisRep(divisors={[list(d.coeffs) for d in self.divisors]})"


def _twisted_product(rows, s, level):
    """A * sigma(A) * ... * sigma^(s-1)(A) for a row-list matrix over a level."""
    ell = len(rows)
    acc = [[level.one() if i == j else level.zero() for j in range(ell)] for i in range(ell)]
    cur = [row[:] for row in rows]
    for _ in range(s):
        acc = [[sum_entries(acc, i, [cur[k][j] for k in range(ell)], level)
                for j in range(ell)] for i in range(ell)]
        cur = [[c.frob(1) for c in row] for row in cur]
    return acc


def _matrix_order(rows, level, cap=10000):
    """Multiplicative order of an invertible matrix over a finite level."""
    ell = len(rows)
    eye = [[level.one() if i == j else level.zero() for j in range(ell)] for i in range(ell)]
    acc = [row[:] for row in rows]
    for k in range(1, cap + 1):
        if acc == eye:
            return k
        acc = [[sum_entries(acc, i, [rows[r][j] for r in range(ell)], level)
                for j in range(ell)] for i in range(ell)]
    raise CapExhausted("matrix order exceeds cap", cap=cap)


def _fixed_vectors_constants(tower, level_index, op_rows, e):
    """Basis of {x in F_{q^M}^ell : x = op * sigma^e(x)} as coordinate arrays."""
    lv = tower.level(level_index)
    ell = len(op_rows)
    space = QuotSpace(lv, ell, degbound=0)
    delta = Mat(PolyRing(lv), [[Poly.const(lv, c) for c in row] for row in op_rows])
    A = semilinear_operator_matrix(space, delta, e)
    eye = np.eye(space.dim(), dtype=np.int64)
    ker = kernel_basis((A - eye) % tower.p, tower.p)
    return space, ker


def _independent_over_subfield(tower, level_index, sub_level, vecs, space, count):
    """Greedy subset whose F_{q^sub}-span is direct; returns the chosen
    F_p-coordinate arrays, or None if fewer than count exist."""
    p = tower.p
    sub = tower.level(sub_level)
    lv = tower.level(level_index)
    mults = []
    g = sub.gen()
    acc = sub.one()
    for _ in range(sub.pdim()):
        mults.append(tower.embed(acc, level_index))
        acc = acc * g
    chosen = []
    span = []
    for v in vecs:
        if span and in_span(span, v, p):
            continue
        if not span and not np.any(v % p):
            continue
        chosen.append(v)
        vec_elems = space.from_fp(v)
        for w in mults:
            scaled = [c.scale(w) for c in vec_elems]
            span.append(space.to_fp(scaled))
        if len(chosen) == count:
            return chosen
    return None


def rq(T):
    """Torsion Dieudonne: Galois representation of a torsion module with
    bijective tau_lin over finite K."""
    base = T.base
    if base.rational:
        raise ValidationError("rq requires a finite coefficient field")
    if not T.tau_lin_bijective():
        raise ValidationError("rq requires bijective tau linearisation")
    tower = base.tower
    s = base.s
    lv1 = tower.level(1)
    if T.is_zero():
        return TorsionGaloisRep(tower, [], Mat(PolyRing(lv1), []), s, embedding=([], s, T))
    idx, tmat, taumat = T.concrete()
    ell = len(idx)
    # exact solving level: s * ord(tau * sigma(tau) * ... * sigma^(s-1)(tau))
    A = _twisted_product(taumat, s, base.level)
    order = _matrix_order(A, base.level)
    M = s * order
    lv = tower.level(M)
    emb_tau = [[tower.embed(c, M) for c in row] for row in taumat]
    space, ker = _fixed_vectors_constants(tower, M, emb_tau, 1)
    if len(ker) != lv1.pdim() * ell:
        raise ValidationError("fixed space has wrong dimension; tau not bijective?")
    basis_fp = _independent_over_subfield(tower, M, 1, ker, space, ell)
    if basis_fp is None:
        raise ValidationError("could not extract an F_q-basis of the solution space")
    basis = [space.from_fp(v) for v in basis_fp]

    emb_t = [[tower.embed(c, M) for c in row] for row in tmat]

    def express_fq(target_vec):
        cols = []
        mults = _fq_mults(tower, M)
        for b in basis:
            for w in mults:
                cols.append(space.to_fp([c.scale(w) for c in b]))
        Amat = np.array(cols, dtype=np.int64).T
        sol = fp_solve(Amat, space.to_fp(target_vec), tower.p)
        if sol is None:
            return None
        k0 = lv1.pdim()
        out = []
        for j in range(len(basis)):
            chunk = sol[j * k0:(j + 1) * k0]
            out.append(lv1.from_fp(chunk))
        return out

    # t-action and Frobenius on the F_q-basis
    t_rows = []
    f_rows = []
    for b in basis:
        tv = [sum_entries(emb_t, r, [c.coeff(0) for c in b], lv) for r in range(ell)]
        tv = [Poly.const(lv, c) for c in tv]
        t_rows.append(express_fq(tv))
        fv = [Poly.const(lv, c.coeff(0).frob(s)) for c in b]
        f_rows.append(express_fq(fv))
    if any(r is None for r in t_rows + f_rows):
        raise ValidationError("action does not stabilise the solution space")
    tmat_v = [[t_rows[j][i] for j in range(ell)] for i in range(ell)]
    fmat_v = [[f_rows[j][i] for j in range(ell)] for i in range(ell)]
    divisors, gens, express = cyclic_presentation(lv1, tmat_v)
    frob_rows = []
    for g in gens:
        img = [sum_entries(fmat_v, r, g, lv1) for r in range(ell)]
        frob_rows.append(express(img))
    frob = Mat(PolyRing(lv1), [[frob_rows[j][i] for j in range(len(gens))]
                               for i in range(len(divisors))])
    embedding = (basis, M, T)
    return TorsionGaloisRep(tower, divisors, frob, M, embedding=embedding)


def _fq_mults(tower, M):
    lv1 = tower.level(1)
    out = []
    g = lv1.gen()
    acc = lv1.one()
    for _ in range(lv1.pdim()):
        out.append(tower.embed(acc, M))
        acc = acc * g
    return out


def dq(V, base):
    """Dieudonne module of a torsion Galois representation, over finite K."""
    if base.rational:
        raise ValidationError("dq requires a finite coefficient field")
    tower = base.tower
    s = base.s
    lv1 = tower.level(1)
    if not V.divisors:
        return TorsionBoldModule(base, [], Mat(base.poly_ring(), []), check=False), ([], s)
    idx, tmatV, fmatV = V.concrete()
    ellv = len(idx)
    order = _matrix_order(fmatV, lv1)
    M = s * order
    lv = tower.level(M)
    emb_f = [[tower.embed(c, M) for c in row] for row in fmatV]
    space, ker = _fixed_vectors_constants(tower, M, emb_f, s)
    if len(ker) != s * lv1.pdim() * ellv:
        raise ValidationError("Galois-fixed space has unexpected dimension")
    basis_fp = _independent_over_subfield(tower, M, s, ker, space, ellv)
    if basis_fp is None:
        raise ValidationError("could not extract a K-basis of the fixed space")
    basis = [space.from_fp(v) for v in basis_fp]

    mults = _k_mults(tower, s, M)

    def express_k(target_vec):
        cols = []
        for b in basis:
            for w in mults:
                cols.append(space.to_fp([c.scale(w) for c in b]))
        Amat = np.array(cols, dtype=np.int64).T
        sol = fp_solve(Amat, space.to_fp(target_vec), tower.p)
        if sol is None:
            return None
        k0 = tower.level(s).pdim()
        out = []
        for j in range(len(basis)):
            chunk = sol[j * k0:(j + 1) * k0]
            out.append(tower.level(s).from_fp(chunk))
        return out

    emb_t = [[tower.embed(c, M) for c in row] for row in tmatV]
    t_rows = []
    tau_rows = []
    for b in basis:
        tv = [sum_entries(emb_t, r, [c.coeff(0) for c in b], lv) for r in range(ellv)]
        t_rows.append(express_k([Poly.const(lv, c) for c in tv]))
        tauv = [Poly.const(lv, c.coeff(0).frob(1)) for c in b]
        tau_rows.append(express_k(tauv))
    if any(r is None for r in t_rows + tau_rows):
        raise ValidationError("t or tau action does not stabilise the Dieudonne space")
    tmat_d = [[t_rows[j][i] for j in range(ellv)] for i in range(ellv)]
    taumat_d = [[tau_rows[j][i] for j in range(ellv)] for i in range(ellv)]
    divisors, gens, express = cyclic_presentation(base.level, tmat_d)
    tau_cols = []
    for g in gens:
        img = [sum_entries(taumat_d, r, [c.frob(1) for c in g], base.level)
               for r in range(ellv)]
        tau_cols.append(express(img))
    tau = Mat(base.poly_ring(), [[tau_cols[j][i] for j in range(len(gens))]
                                 for i in range(len(divisors))])
    divisors_k = [d for d in divisors]
    D = TorsionBoldModule(base, divisors_k, tau)
    return D, (basis, M)


def _k_mults(tower, s, M):
    sub = tower.level(s)
    out = []
    g = sub.gen()
    acc = sub.one()
    for _ in range(sub.pdim()):
        out.append(tower.embed(acc, M))
        acc = acc * g
    return out


# -- explicit roundtrip isomorphisms ----------------------------------------


def dq_rq_roundtrip(T):
    """Explicit verification that dq(rq(T)) is isomorphic to T via the
    natural multiplication map; returns a dict of booleans."""
    base = T.base
    tower = base.tower
    V = rq(T)
    D, (d_basis, M_D) = dq(V, base)
    v_basis, M_V, _ = V.embedding
    # dimension identity: dim_K D = dim_Fq V
    dims_ok = (D.length() == V.dim_fq() == T.length())
    if T.is_zero():
        return {"dims": dims_ok, "rational": True, "bijective": True,
                "t_equivariant": True, "tau_equivariant": True}
    # natural map: D c F_{q^M_D} (x) V -> F_{q^M} (x) T by multiplying
    # coordinates into the solution vectors of V
    M = _lcm(M_D, M_V)
    lv = tower.level(M)
    ellT = T.length()
    mu_cols = []
    for db in d_basis:
        acc = [lv.zero()] * ellT
        for alpha, c in enumerate(db):
            ce = tower.embed(c.coeff(0), M)
            for k in range(ellT):
                acc[k] = acc[k] + ce * tower.embed(v_basis[alpha][k].coeff(0), M)
        mu_cols.append(acc)
    # rationality: entries must lie in K = level s
    try:
        mu_rows_k = [[tower.project(mu_cols[j][i], base.s) for j in range(len(mu_cols))]
                     for i in range(ellT)]
        rational = True
    except ValidationError:
        return {"dims": dims_ok, "rational": False}
    K = base.level
    mu = mu_rows_k
    from .linalg import field_kernel
    bijective = not field_kernel(Mat(K, mu)) and len(mu_cols) == ellT
    # equivariance on the concrete models
    idxT, tmatT, taumatT = T.concrete()
    idxD, tmatD, taumatD = D.concrete()
    t_ok = _mat_eq(_mat_mul(tmatT, mu, K), _mat_mul(mu, tmatD, K))
    # tau: mu(tau_D(v)) = tau_T(mu(v)): mu * B_D = B_T * sigma(mu)
    sig_mu = [[c.frob(1) for c in row] for row in mu]
    tau_ok = _mat_eq(_mat_mul(mu, taumatD, K), _mat_mul(taumatT, sig_mu, K))
    return {"dims": dims_ok, "rational": rational, "bijective": bijective,
            "t_equivariant": t_ok, "tau_equivariant": tau_ok}


def rq_dq_roundtrip(V, base):
    """Explicit verification that rq(dq(V)) recovers V via multiplication."""
    D, (d_basis, M_D) = dq(V, base)
    W = rq(D)
    w_basis, M_W, _ = W.embedding
    tower = base.tower
    lv1 = tower.level(1)
    dims_ok = (W.dim_fq() == V.dim_fq() == D.length())
    if not V.divisors:
        return {"dims": dims_ok, "rational": True, "bijective": True,
                "t_equivariant": True, "frob_equivariant": True}
    M = _lcm(M_D, M_W)
    ellV = V.dim_fq()
    # pi: W -> F_{q^M} (x) V: expand w in d-basis coordinates and multiply
    pi_cols = []
    for wb in w_basis:
        acc = [tower.level(M).zero()] * ellV
        for beta, c in enumerate(wb):
            ce = tower.embed(c.coeff(0), M)
            for alpha in range(ellV):
                acc[alpha] = acc[alpha] + ce * tower.embed(d_basis[beta][alpha].coeff(0), M)
        pi_cols.append(acc)
    try:
        pi_rows = [[tower.project(pi_cols[j][i], 1) for j in range(len(pi_cols))]
                   for i in range(ellV)]
        rational = True
    except ValidationError:
        return {"dims": dims_ok, "rational": False}
    from .linalg import field_kernel
    bijective = not field_kernel(Mat(lv1, pi_rows)) and len(pi_cols) == ellV
    idxV, tmatV, fmatV = V.concrete()
    idxW, tmatW, fmatW = W.concrete()
    t_ok = _mat_eq(_mat_mul(tmatV, pi_rows, lv1), _mat_mul(pi_rows, tmatW, lv1))
    f_ok = _mat_eq(_mat_mul(fmatV, pi_rows, lv1), _mat_mul(pi_rows, fmatW, lv1))
    return {"dims": dims_ok, "rational": rational, "bijective": bijective,
            "t_equivariant": t_ok, "frob_equivariant": f_ok}


def _mat_mul(a, b, field):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[field.zero()] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            acc = field.zero()
            for l in range(k):
                acc = acc + a[i][l] * b[l][j]
            out[i][j] = acc
    return out


def _mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def _lcm(a, b):
    x, y = a, b
    while y:
        x, y = y, x % y
    return a * b // x


# ---------------------------------------------------------------------------
# Tate approximations
# ---------------------------------------------------------------------------


class TateApproximation:
    """Level-n truncation of the integral Tate module."""

    def __init__(self, motive, p, n, level_m, basis, frobenius, ring):
        self.motive = motive
        self.p = p
        self.n = n
        self.level_m = level_m
        self.basis = basis          # vectors of Polys over F_{q^M}, reduced mod p^n
        self.frobenius = frobenius  # Mat over A/p^n (QuotRing elements)
        self.ring = ring            # QuotRing(p^n) over level 1

    @property
    def rank(self):
        return len(self.basis)

    def frobenius_reps(self):
        return [[self.frobenius[i, j].rep for j in range(self.rank)]
                for i in range(self.rank)]


def _solve_effective_fixed(base, delta, p, n):
    """A/p^n-basis and Frobenius of the fixed module of Delta mod p^n.

    Strategy: the homogeneous Lang system is solved once mod p (at the exact
    level s * ord of the twisted product), then each precision step solves an
    inhomogeneous mod-p system reusing that splitting field, escalating only
    when a lift has no rational solution.  Returns (basis, frob, M, space)."""
    tower = base.tower
    s = base.s
    lv1 = tower.level(1)
    r = delta.nrows
    p_k = base.lift_fq_poly(p)
    d = p.degree
    deltabar_rows = [[delta[i, j] % p_k for j in range(r)] for i in range(r)]
    order = _quot_matrix_order(base, deltabar_rows, p_k, s)
    M0 = s * order
    # homogeneous level-1 solve (the order computation makes the first level
    # exact; the escalation loop is a safety net)
    basis1 = None
    M = M0
    for j in range(1, ESCALATION_FACTOR + 1):
        M = M0 * j
        space1, op1 = _tau_space(base, delta, p, 1, M)
        eye = np.eye(space1.dim(), dtype=np.int64)
        ker = kernel_basis((op1 - eye) % tower.p, tower.p)
        if len(ker) == lv1.pdim() * r * d:
            vecs = [space1.from_fp(k) for k in ker]
            basis1 = apn_basis(tower, space1, vecs, p, 1, r)
            if basis1 is not None:
                break
    if basis1 is None:
        raise CapExhausted("level-1 Lang system has no full rational solution set",
                           cap=ESCALATION_FACTOR)
    basis = basis1
    for k in range(2, n + 1):
        basis, M = _lift_basis(base, delta, p, k, M, basis)
    space = _quot_space(base, delta, p, n, M)
    # Frobenius matrix over A/p^n
    ring = QuotRing(p**n)
    expander = ApnExpander(tower, space, basis, p, n)
    frob_cols = []
    for b in basis:
        gb = [c.map_coeffs(lambda x: x.frob(s)) % space.modulus for c in b]
        coords = expander.coords(gb)
        if coords is None:
            raise ValidationError("Frobenius does not stabilise the Tate lattice")
        frob_cols.append([QuotElem(ring, c) for c in coords])
    frob = Mat(ring, [[frob_cols[j][i] for j in range(r)] for i in range(r)])
    return basis, frob, M, space


def _quot_space(base, delta, p, k, M):
    tower = base.tower
    lv = tower.level(M)
    return QuotSpace(lv, delta.nrows, modulus=_lift_poly(tower, p**k, M))


def _tau_space(base, delta, p, k, M):
    """(space, flattened matrix of v -> Delta*sigma(v)) on (L[t]/p^k)^r."""
    tower = base.tower
    lv = tower.level(M)
    space = _quot_space(base, delta, p, k, M)
    delta_M = Mat(PolyRing(lv), [[_lift_poly_k(base, delta[i, j], M) % space.modulus
                                  for j in range(delta.ncols)] for i in range(delta.nrows)])
    return space, semilinear_operator_matrix(space, delta_M, 1)


def _lift_basis(base, delta, p, k, M, basis):
    """Lift tau-fixed vectors from mod p^(k-1) to mod p^k, escalating the
    level when an inhomogeneous system has no rational solution."""
    from .fplinalg import BatchSolver
    tower = base.tower
    r = delta.nrows
    M0 = M
    for j in range(1, ESCALATION_FACTOR + 1):
        M = M0 * j
        lv = tower.level(M)
        space_k = _quot_space(base, delta, p, k, M)
        space_1 = _quot_space(base, delta, p, 1, M)
        _, op1 = _tau_space(base, delta, p, 1, M)
        eyed = np.eye(space_1.dim(), dtype=np.int64)
        solver = BatchSolver((op1 - eyed) % tower.p, tower.p)
        p_lift = _lift_poly(tower, p, M)
        pk1_lift = _lift_poly(tower, p**(k - 1), M)
        delta_M = Mat(PolyRing(lv),
                      [[_lift_poly_k(base, delta[i, j], M) % space_k.modulus
                        for j in range(r)] for i in range(r)])
        new_basis = []
        ok = True
        for b in basis:
            b = [_lift_poly_k_from_level(tower, c, M) % space_k.modulus for c in b]
            tau_b = space_k.reduce(delta_M.apply(space_k.sigma(b)))
            defect = []
            for i in range(r):
                quo, rem = divmod(tau_b[i] - b[i], pk1_lift)
                if not rem.is_zero():
                    raise ValidationError("lift defect not divisible by p^(k-1)")
                defect.append(quo % p_lift)
            rhs = space_1.to_fp(defect)
            sol = solver.solve((-rhs) % tower.p)
            if sol is None:
                ok = False
                break
            w = space_1.from_fp(sol)
            new_basis.append([(b[i] + pk1_lift * w[i]) % space_k.modulus for i in range(r)])
        if ok:
            return new_basis, M
    raise CapExhausted(f"no rational lift to precision {k} within the level cap",
                       cap=ESCALATION_FACTOR)


def _lift_poly(tower, f_lv1, M):
    return f_lv1.map_coeffs(lambda c: tower.embed(c, M), tower.level(M))


def _lift_poly_k(base, f_over_k, M):
    tower = base.tower
    return f_over_k.map_coeffs(lambda c: tower.embed(c, M), tower.level(M))


def _quot_matrix_order(base, rows, p_k, s):
    """Order of the s-fold twisted product of a matrix over K[t]/(p)."""
    r = len(rows)
    K = base.K

    def matmul(a, b):
        return [[sum((a[i][l] * b[l][j] for l in range(r)),
                     Poly.zero(K)) % p_k for j in range(r)] for i in range(r)]

    acc = [[Poly.one(K) if i == j else Poly.zero(K) for j in range(r)] for i in range(r)]
    cur = [row[:] for row in rows]
    for _ in range(s):
        acc = matmul(acc, cur)
        cur = [[sigma_poly(c) % p_k for c in row] for row in cur]
    eye = [[Poly.one(K) if i == j else Poly.zero(K) for j in range(r)] for i in range(r)]
    power = [row[:] for row in acc]
    for k in range(1, 200000):
        if power == eye:
            return k
        power = matmul(power, acc)
    raise CapExhausted("twisted product order too large", cap=200000)


def tate_module(x, p, n):
    """Integral Tate module approximation T_p(X)/p^n with Frobenius.

    Computed per the definition: the fixed module of M and of L are solved
    separately and combined as T_p(M) (x) T_p(L)^dual."""
    base = x.base
    _validate_prime(base, p)
    if n < 1:
        raise ValidationError("precision n must be >= 1")
    basis_m, frob_m, M1, space_m = _solve_effective_fixed(base, x.m.delta, p, n)
    basis_l, frob_l, M2, space_l = _solve_effective_fixed(base, x.l.delta, p, n)
    tower = base.tower
    M = _lcm(M1, M2)
    lv = tower.level(M)
    pn_lift = _lift_poly(tower, p**n, M)
    space = QuotSpace(lv, x.m.rank, modulus=pn_lift)
    # combine: basis vectors of M scaled by the inverse of the L-generator
    bl = [ _lift_poly_k_from_level(tower, c, M) for c in basis_l[0] ][0]
    bl_inv = _invert_mod(bl, pn_lift)
    basis = []
    for b in basis_m:
        vec = [ (_lift_poly_k_from_level(tower, c, M) * bl_inv) % pn_lift for c in b ]
        basis.append(vec)
    fl = frob_l[0, 0]
    frob = frob_m.map(lambda e: e / fl)
    return TateApproximation(x, p, n, M, basis, frob, frob.ring)


def _lift_poly_k_from_level(tower, f, M):
    if f.field.m == M:
        return f
    return f.map_coeffs(lambda c: tower.embed(c, M), tower.level(M))


def _invert_mod(f, modulus):
    g, s, _ = poly_xgcd(f, modulus)
    if g.degree != 0:
        raise ValidationError("element not invertible modulo p^n")
    return (s.scale(f.field.one() / g.coeff(0))) % modulus


def _validate_prime(base, p):
    if base.rational:
        raise ValidationError("Tate modules require a finite coefficient field")
    if not p.is_monic() or p.degree < 1:
        raise ValidationError("p must be a monic irreducible of F_q[t]")
    if base.kernel_iota is not None and p == base.kernel_iota:
        raise ValidationError("p = ker(iota) is excluded")


def tate_via_bold(x, p, n):
    """Bold-module route: completion of I_0(X) followed by tau-invariants.

    An independent computation path used for the route-independence check."""
    base = x.base
    _validate_prime(base, p)
    ell = x.l.delta[0, 0]
    p_k = base.lift_fq_poly(p**n)
    ell_inv = _invert_mod(ell % p_k, p_k)
    delta = x.m.delta.map(lambda e: (e * ell_inv) % p_k)
    basis, frob, M, space = _solve_effective_fixed(base, delta, p, n)
    return TateApproximation(x, p, n, M, basis, frob, frob.ring)


def tate_reduce(ta, k):
    """Reduce a level-n approximation to level k <= n."""
    if k > ta.n:
        raise ValidationError("cannot raise precision by reduction")
    tower = ta.motive.base.tower
    lv = tower.level(ta.level_m)
    pk = _lift_poly(tower, ta.p**k, ta.level_m)
    basis = [[c % pk for c in b] for b in ta.basis]
    ring = QuotRing(ta.p**k)
    frob = ta.frobenius.map(lambda e: QuotElem(ring, e.rep), ring)
    return TateApproximation(ta.motive, ta.p, k, ta.level_m, basis, frob, ring)


def tate_modules_agree(ta, tb):
    """Exact comparison of two approximations of the same T_p(X)/p^n: equal
    spans and conjugate Frobenius via the change-of-basis matrix."""
    if ta.rank != tb.rank or ta.p != tb.p or ta.n != tb.n:
        return False
    tower = ta.motive.base.tower
    M = _lcm(ta.level_m, tb.level_m)
    lv = tower.level(M)
    pn = _lift_poly(tower, ta.p**ta.n, M)
    space = QuotSpace(lv, len(ta.basis[0]), modulus=pn)
    lift = lambda b: [_lift_poly_k_from_level(tower, c, M) % pn for c in b]
    basis_a = [lift(b) for b in ta.basis]
    basis_b = [lift(b) for b in tb.basis]
    # mutual containment
    exp_b = ApnExpander(tower, space, basis_b, ta.p, ta.n)
    exp_a = ApnExpander(tower, space, basis_a, ta.p, ta.n)
    cols = []
    for b in basis_a:
        coords = exp_b.coords(b)
        if coords is None:
            return False
        cols.append(coords)
    for b in basis_b:
        if exp_a.coords(b) is None:
            return False
    ring = ta.ring
    G = Mat(ring, [[QuotElem(ring, cols[j][i]) for j in range(len(cols))]
                   for i in range(len(cols))])
    return (G * ta.frobenius) == (tb.frobenius * G)


# ---------------------------------------------------------------------------
# Characteristic / minimal polynomials of Frobenius over A/p^n
# ---------------------------------------------------------------------------


def frobenius_charpoly(ta):
    """Characteristic polynomial of the Frobenius matrix, over A/p^n."""
    ring = ta.ring
    r = ta.rank
    pring = PolyRing(ring)
    xpoly = Poly(ring, (ring.zero(), ring.one()))
    entries = [[Poly.const(ring, -ta.frobenius[i, j]) for j in range(r)] for i in range(r)]
    for i in range(r):
        entries[i][i] = entries[i][i] + xpoly
    return Mat(pring, entries).det()


def frobenius_minpoly(ta):
    """Least-degree monic annihilator of the Frobenius matrix over A/p^n
    (deterministic representative)."""
    return _min_annihilator(ta.frobenius, ta.ring)


def _min_annihilator(F, ring):
    r = F.nrows
    powers = [Mat.identity(ring, r)]
    for _ in range(r):
        powers.append(F * powers[-1])
    d = ring.modulus.degree
    lv1 = ring.coeff_field
    p = lv1.p
    k0 = lv1.pdim()

    def flatten_mat(m):
        out = []
        for i in range(r):
            for j in range(r):
                rep = m[i, j].rep
                for a in range(d):
                    out.extend(rep.coeff(a).coeffs)
        return np.array(out, dtype=np.int64)

    for deg in range(1, r + 1):
        # solve sum_{i<deg} c_i F^i = -F^deg with c_i in A/p^n
        cols = []
        for i in range(deg):
            for a in range(d):
                for b in range(k0):
                    coeff_elem = Poly(lv1, (lv1.zero(),) * a + (lv1.from_fp(np.eye(k0, dtype=np.int64)[b]),))
                    scaled = powers[i].map(lambda e, ce=QuotElem(ring, coeff_elem): e * ce)
                    cols.append(flatten_mat(scaled))
        Amat = np.array(cols, dtype=np.int64).T
        rhs = (-flatten_mat(powers[deg])) % p
        sol = fp_solve(Amat, rhs, p)
        if sol is None:
            continue
        coeffs = []
        for i in range(deg):
            rep = []
            for a in range(d):
                base_idx = i * d * k0 + a * k0
                rep.append(lv1.from_fp(sol[base_idx:base_idx + k0]))
            coeffs.append(QuotElem(ring, Poly(lv1, rep)))
        coeffs.append(ring.one())
        return Poly(ring, coeffs)
    raise ValidationError("no annihilator up to the rank; matrix data corrupt")


# ---------------------------------------------------------------------------
# Semisimplicity verdicts
# ---------------------------------------------------------------------------

ROOT_ENUM_LIMIT = 20000


def semisimplicity_report(x, p, n, root_enum_limit=ROOT_ENUM_LIMIT):
    """Semisimplicity verdict for the Frobenius action on T_p(X)/p^n.

    Evidence rules, in order: a unit-resultant (mod p) minimal annihilator
    certifies semisimple; otherwise the module is split into mod-p-coprime
    primary parts and each part is tested by eigen-splitting over A/p^n;
    a repeated factor stable under raising the precision certifies
    non-semisimple; anything else is inconclusive."""
    ta = tate_module(x, p, n)
    return _semisimplicity_from_tate(ta, root_enum_limit)


def _semisimplicity_from_tate(ta, root_enum_limit=ROOT_ENUM_LIMIT):
    p_poly, n = ta.p, ta.n
    ring = ta.ring
    lv1 = ring.coeff_field
    evidence = {"p": p_poly, "n": n}
    minpoly = frobenius_minpoly(ta)
    charpoly = frobenius_charpoly(ta)
    evidence["minpoly"] = minpoly
    evidence["charpoly"] = charpoly
    if _unit_resultant_mod_p(minpoly, p_poly, ring):
        evidence["rule"] = "squarefree minimal annihilator with unit resultant mod p"
        return {"verdict": "semisimple", "evidence": evidence}
    parts = _primary_parts(ta.frobenius, charpoly, p_poly, n, ring)
    evidence["primary_part_ranks"] = [pr["rank"] for pr in parts]
    verdicts = []
    for part in parts:
        verdicts.append(_part_verdict(part, ta, root_enum_limit))
    evidence["part_verdicts"] = [v[0] for v in verdicts]
    evidence["part_rules"] = [v[1] for v in verdicts]
    if all(v[0] == "semisimple" for v in verdicts):
        evidence["rule"] = "all primary parts split"
        return {"verdict": "semisimple", "evidence": evidence}
    if any(v[0] == "non_semisimple" for v in verdicts):
        evidence["rule"] = "stable repeated factor in a primary part"
        return {"verdict": "non_semisimple", "evidence": evidence}
    evidence["rule"] = f"ambiguity persists at precision {n}"
    return {"verdict": "inconclusive", "evidence": evidence}


def _unit_resultant_mod_p(m, p_poly, ring):
    from .linalg import sylvester_resultant
    dm = m.derivative()
    res = sylvester_resultant(m, dm, ring)
    if isinstance(res, QuotElem):
        g = poly_gcd(res.rep, ring.modulus)
        p_k = p_poly
        return bool(res) and poly_gcd(res.rep, p_k).degree == 0
    return bool(res)


def _primary_parts(F, charpoly, p_poly, n, ring):
    """Split (A/p^n)^r into F-stable primary parts along the mod-p coprime
    factors of the characteristic polynomial."""
    lv1 = ring.coeff_field
    field_p = QuotRing(p_poly)
    charbar = charpoly.map_coeffs(lambda e: QuotElem(field_p, e.rep % p_poly), field_p)
    rng = random.Random("primary-split")
    facs = factor(charbar, rng) if charbar.degree > 0 else []
    r = F.nrows
    if len(facs) <= 1:
        return [{"F": F, "rank": r, "ring": ring, "gbar": facs[0][0] if facs else None,
                 "mult": facs[0][1] if facs else 0}]
    parts = []
    for gbar, mult in facs:
        glift = gbar.map_coeffs(lambda e: QuotElem(ring, e.rep), ring)
        gF = _eval_poly_at_matrix(glift, F, ring)
        power = Mat.identity(ring, r)
        for _ in range(mult * n):
            power = power * gF
        comp_basis = _free_kernel_basis(power, ring)
        rank = len(comp_basis)
        F_part = _restrict_matrix(F, comp_basis, ring)
        parts.append({"F": F_part, "rank": rank, "ring": ring, "gbar": gbar, "mult": mult})
    return parts


def _eval_poly_at_matrix(poly, F, ring):
    r = F.nrows
    out = Mat.zeros(ring, r, r)
    power = Mat.identity(ring, r)
    for i in range(poly.degree + 1):
        c = poly.coeff(i)
        if c:
            out = out + power.scale(c)
        power = power * F
    return out


def _flatten_quot_vec(vec, ring):
    lv1 = ring.coeff_field
    d = ring.modulus.degree
    out = []
    for e in vec:
        for a in range(d):
            out.extend(e.rep.coeff(a).coeffs)
    return np.array(out, dtype=np.int64)


def _unflatten_quot_vec(arr, r, ring):
    lv1 = ring.coeff_field
    d = ring.modulus.degree
    k0 = lv1.pdim()
    out = []
    idx = 0
    for i in range(r):
        coeffs = []
        for a in range(d):
            coeffs.append(lv1.from_fp(arr[idx:idx + k0]))
            idx += k0
        out.append(QuotElem(ring, Poly(lv1, coeffs)))
    return out


def _quot_linear_kernel(M, ring):
    """F_p-kernel vectors of a QuotRing matrix acting on (A/p^n)^r."""
    r = M.ncols
    lv1 = ring.coeff_field
    p = lv1.p
    cols = []
    d = ring.modulus.degree
    k0 = lv1.pdim()
    for j in range(r):
        for a in range(d):
            for b in range(k0):
                e = QuotElem(ring, Poly(lv1, (lv1.zero(),) * a + (lv1.from_fp(np.eye(k0, dtype=np.int64)[b]),)))
                vec = [M[i, j] * e for i in range(M.nrows)]
                cols.append(_flatten_quot_vec(vec, ring))
    A = np.array(cols, dtype=np.int64).T
    return kernel_basis(A, p)


def _free_kernel_basis(M, ring):
    """A/p^n-basis of ker(M) when the kernel is a free direct summand."""
    ker = _quot_linear_kernel(M, ring)
    r = M.ncols
    vecs = [_unflatten_quot_vec(k, r, ring) for k in ker]
    # Nakayama extraction: reductions mod p must stay independent
    p_poly = None
    # modulus = p^n; p = its radical: recover from factorisation of modulus
    # the ring is always constructed as QuotRing(p**n), so p = unique factor
    lv1 = ring.coeff_field
    rng = random.Random("free-kernel")
    facs = factor(ring.modulus, rng)
    p_poly = facs[0][0]
    fring = QuotRing(p_poly)
    chosen = []
    span = []
    p = lv1.p
    for v in vecs:
        red = [QuotElem(fring, e.rep % p_poly) for e in v]
        flat = _flatten_quot_vec(red, fring)
        if not np.any(flat % p):
            continue
        if span and in_span(span, flat, p):
            continue
        chosen.append(v)
        d = p_poly.degree
        k0 = lv1.pdim()
        for a in range(d):
            for b in range(k0):
                e = QuotElem(fring, Poly(lv1, (lv1.zero(),) * a + (lv1.from_fp(np.eye(k0, dtype=np.int64)[b]),)))
                span.append(_flatten_quot_vec([x * e for x in red], fring))
    return chosen


def _restrict_matrix(F, basis, ring):
    """Matrix of F on the span of an A/p^n-basis."""
    r = F.nrows
    cols = []
    for b in basis:
        img = F.apply(b)
        coords = _coords_in_quot_basis(img, basis, ring)
        if coords is None:
            raise ValidationError("operator does not stabilise the primary part")
        cols.append(coords)
    return Mat(ring, [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))])


def _coords_in_quot_basis(target, basis, ring):
    lv1 = ring.coeff_field
    p = lv1.p
    d = ring.modulus.degree
    k0 = lv1.pdim()
    cols = []
    for b in basis:
        for a in range(d):
            for bb in range(k0):
                e = QuotElem(ring, Poly(lv1, (lv1.zero(),) * a + (lv1.from_fp(np.eye(k0, dtype=np.int64)[bb]),)))
                cols.append(_flatten_quot_vec([x * e for x in b], ring))
    A = np.array(cols, dtype=np.int64).T
    sol = fp_solve(A, _flatten_quot_vec(target, ring), p)
    if sol is None:
        return None
    out = []
    for j in range(len(basis)):
        coeffs = []
        for a in range(d):
            base_idx = j * d * k0 + a * k0
            coeffs.append(lv1.from_fp(sol[base_idx:base_idx + k0]))
        out.append(QuotElem(ring, Poly(lv1, coeffs)))
    return out


def _part_verdict(part, ta, root_enum_limit):
    ring = part["ring"]
    F = part["F"]
    p_poly = ta.p
    n = ta.n
    if part["rank"] == 0:
        return ("semisimple", "empty part")
    m = _min_annihilator(F, ring)
    if _unit_resultant_mod_p(m, p_poly, ring):
        return ("semisimple", "unit resultant")
    # eigen-split certificate: an A/p^n-basis of eigenvectors with pairwise
    # distinct eigenvalues (distinct at this precision)
    size = ring.coeff_field.size() ** ring.modulus.degree
    if size <= root_enum_limit:
        chi = _charpoly_of(F, ring)
        roots = _poly_roots_quot(chi, ring)
        split = _eigen_basis_split(F, roots, part["rank"], ring)
        if split is not None:
            eigvals = split
            distinct = all(eigvals[i] != eigvals[j]
                           for i in range(len(eigvals)) for j in range(i + 1, len(eigvals)))
            if distinct:
                return ("semisimple",
                        f"eigen-split into {len(eigvals)} distinct eigenvalues mod p^{n}")
    # stability of the repeated factor under lowering precision
    repeated = []
    for k in range(max(1, n - 1), n + 1):
        rk = QuotRing(p_poly**k)
        Fk = F.map(lambda e: QuotElem(rk, e.rep % rk.modulus), rk)
        mk = _min_annihilator(Fk, rk)
        repeated.append(not _unit_resultant_mod_p(mk, p_poly, rk))
    if all(repeated):
        return ("non_semisimple", f"repeated factor stable at precisions {max(1, n-1)}..{n}")
    return ("inconclusive", "repeated factor not stable across precisions")


def _charpoly_of(F, ring):
    r = F.nrows
    pring = PolyRing(ring)
    xpoly = Poly(ring, (ring.zero(), ring.one()))
    entries = [[Poly.const(ring, -F[i, j]) for j in range(r)] for i in range(r)]
    for i in range(r):
        entries[i][i] = entries[i][i] + xpoly
    return Mat(pring, entries).det()


def _eigen_basis_split(F, roots, rank, ring):
    """Nakayama basis of eigenvectors; returns their eigenvalues or None."""
    lv1 = ring.coeff_field
    p = lv1.p
    rng = random.Random("eigen-split")
    facs = factor(ring.modulus, rng)
    p_poly = facs[0][0]
    fring = QuotRing(p_poly)
    chosen_vals = []
    span = []
    count = 0
    for a in roots:
        shifted = F - Mat.identity(ring, F.nrows).scale(a)
        for kvec in _quot_linear_kernel(shifted, ring):
            v = _unflatten_quot_vec(kvec, F.nrows, ring)
            red = [QuotElem(fring, e.rep % p_poly) for e in v]
            flat = _flatten_quot_vec(red, fring)
            if not np.any(flat % p):
                continue
            if span and in_span(span, flat, p):
                continue
            chosen_vals.append(a)
            d = p_poly.degree
            k0 = lv1.pdim()
            for aa in range(d):
                for bb in range(k0):
                    e = QuotElem(fring, Poly(lv1, (lv1.zero(),) * aa
                                             + (lv1.from_fp(np.eye(k0, dtype=np.int64)[bb]),)))
                    span.append(_flatten_quot_vec([x * e for x in red], fring))
            count += 1
            if count == rank:
                return chosen_vals
    return None


def _poly_roots_quot(m, ring):
    """All roots of m over A/p^n by enumeration (desk scale)."""
    lv1 = ring.coeff_field
    d = ring.modulus.degree
    out = []
    for cand in _all_quot_elems(ring):
        acc = ring.zero()
        power = ring.one()
        for i in range(m.degree + 1):
            c = m.coeff(i)
            if c:
                acc = acc + c * power
            power = power * cand
        if not acc:
            out.append(cand)
    return out


def _all_quot_elems(ring):
    lv1 = ring.coeff_field
    d = ring.modulus.degree
    slots = [(a, b) for a in range(d) for b in range(lv1.pdim())]
    p = lv1.p
    total = p ** len(slots)
    idx = [0] * len(slots)
    for _ in range(total):
        coeffs = [[0] * lv1.pdim() for _ in range(d)]
        for (a, b), c in zip(slots, idx):
            coeffs[a][b] = c
        yield QuotElem(ring, Poly(lv1, [lv1.from_fp(c) for c in coeffs]))
        for i in range(len(idx)):
            idx[i] += 1
            if idx[i] < p:
                break
            idx[i] = 0


# ---------------------------------------------------------------------------
# Tate conjecture check
# ---------------------------------------------------------------------------


def tate_conjecture_check(x, y, p, n):
    """Compare the saturated Hom rank with the free rank of the Frobenius
    commutant over A/p^n (checked at n and n+1 for stability)."""
    homs, info = hom_motives(x, y)
    hom_rank = info["rank"]
    fr_n = _commutant_free_rank(x, y, p, n)
    fr_n1 = _commutant_free_rank(x, y, p, n + 1)
    agree = (hom_rank == fr_n) and (fr_n == fr_n1)
    return {
        "hom_rank": hom_rank,
        "commutant_rank": fr_n,
        "commutant_rank_next": fr_n1,
        "agree": agree,
        "hom_saturated": info["saturated"],
    }


def _commutant_free_rank(x, y, p, n):
    tx = tate_module(x, p, n)
    ty = tate_module(y, p, n)
    ring = tx.ring
    lv1 = ring.coeff_field
    pnum = lv1.p
    rx, ry = tx.rank, ty.rank
    d = p.degree
    k0 = lv1.pdim()
    # solve h * F_x = F_y * h for h in Mat_{ry x rx}(A/p^n)
    cols = []
    for i in range(ry):
        for j in range(rx):
            for a in range(n * d):
                for b in range(k0):
                    e = QuotElem(ring, Poly(lv1, (lv1.zero(),) * a + (lv1.from_fp(np.eye(k0, dtype=np.int64)[b]),)))
                    h = Mat.zeros(ring, ry, rx)
                    rows = [list(r) for r in h.rows]
                    rows[i][j] = e
                    h = Mat(ring, rows)
                    res = h * tx.frobenius - ty.frobenius * h
                    cols.append(_flatten_quot_vec(res.entry_list(), ring))
    A = np.array(cols, dtype=np.int64).T
    ker = kernel_basis(A, pnum)
    if not ker:
        return 0
    # free rank = dim_{A/p} (p^(n-1) * solutions)
    pn1 = QuotElem(ring, p**(n - 1)) if n > 1 else ring.one()
    span = []
    for k in ker:
        sol = _unflatten_quot_vec(k, ry * rx, ring)
        scaled = [s * pn1 for s in sol]
        span.append(_flatten_quot_vec(scaled, ring))
    dim = fp_rank(np.array(span, dtype=np.int64), pnum)
    return dim // (d * k0)


# ---------------------------------------------------------------------------
# Deterministic report rendering
# ---------------------------------------------------------------------------


def poly_text(f):
    """Canonical text for a Poly whose coefficients expose integer vectors."""
    if f.is_zero():
        return "[]"
    parts = []
    for c in f.coeffs:
        if hasattr(c, "coeffs") and isinstance(c.coeffs, tuple) and c.coeffs and isinstance(c.coeffs[0], int):
            parts.append("[" + ",".join(str(int(v)) for v in c.coeffs) + "]")
        elif hasattr(c, "rep"):
            parts.append(poly_text(c.rep))
        else:
            parts.append(repr(c))
    return "[" + ";".join(parts) + "]"


def render_report(title, fields):
    """Deterministic key-value block; keys emitted in sorted order."""
    lines = [f"== {title} =="]
    for k in sorted(fields):
        lines.append(f"{k}: {fields[k]}")
    return "\n".join(lines) + "\n"


def motive_hash(serialized_text):
    return hashlib.sha256(serialized_text.encode()).hexdigest()[:16]
