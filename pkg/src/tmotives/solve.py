"""Frobenius-semilinear solvers.

Everything here reduces to exact F_p-linear algebra by flattening: the
coefficient Frobenius c -> c^(q^e) is F_p-linear on every tower level, so
fixed-point and kernel problems for maps v -> Delta * sigma^e(v) become
kernel/affine problems for explicit F_p-matrices.

Level escalation walks through multiples of the starting level, capped by
ESCALATION_FACTOR times the starting level (an engineering constant; the
underlying theory gives no effective bound).
"""

import numpy as np

from .errors import CapExhausted, DegenerateInseparable, NotRestricted, ValidationError
from .fplinalg import kernel_basis, solve as fp_solve, in_span
from .linalg import Mat, field_kernel, mat_to_frac
from .poly import FracField, Poly, PolyRing, RatFunc, poly_gcd

ESCALATION_FACTOR = 24


# ---------------------------------------------------------------------------
# Flattening: vectors of polynomials over a tower level
# ---------------------------------------------------------------------------


class QuotSpace:
    """(L[t]/(g))^r for a tower level L and monic modulus g over L.

    With g == None the space is polynomial vectors of degree <= degbound
    (used for kernel problems with a height cap)."""

    def __init__(self, level, r, modulus=None, degbound=None):
        self.level = level
        self.r = r
        self.modulus = modulus
        if modulus is not None:
            self.deg = modulus.degree
        else:
            if degbound is None:
                raise ValidationError("need a modulus or a degree bound")
            self.deg = degbound + 1
        self.edim = self.deg * level.pdim()  # F_p-dim per vector entry

    def dim(self):
        return self.r * self.edim

    def reduce(self, vec):
        if self.modulus is None:
            return vec
        return [v % self.modulus for v in vec]

    def to_fp(self, vec):
        out = np.zeros(self.dim(), dtype=np.int64)
        pd = self.level.pdim()
        for i, poly in enumerate(vec):
            base = i * self.edim
            for j, c in enumerate(poly.coeffs):
                out[base + j * pd: base + (j + 1) * pd] = c.coeffs
        return out

    def from_fp(self, arr):
        pd = self.level.pdim()
        vec = []
        for i in range(self.r):
            base = i * self.edim
            coeffs = []
            for j in range(self.deg):
                chunk = arr[base + j * pd: base + (j + 1) * pd]
                coeffs.append(self.level.from_fp(chunk))
            vec.append(Poly(self.level, coeffs))
        return vec

    def basis_vectors(self):
        d = self.dim()
        eye = np.eye(d, dtype=np.int64)
        for i in range(d):
            yield self.from_fp(eye[i])

    def sigma(self, vec, e=1):
        """Coefficientwise base-q Frobenius iterate; fixes t."""
        return [p.map_coeffs(lambda c: c.frob(e)) for p in vec]

    def zero_vec(self):
        return [Poly.zero(self.level)] * self.r


def fp_matrix(space_in, space_out, fn):
    """F_p-matrix (columns = images of basis vectors) of an additive map."""
    cols = []
    for b in space_in.basis_vectors():
        cols.append(space_out.to_fp(fn(b)))
    return np.array(cols, dtype=np.int64).T if cols else np.zeros((space_out.dim(), 0), dtype=np.int64)


# -- fast flattened operators on (L[t]/g)^r ---------------------------------


def level_mult_matrix(level, a):
    """F_p-matrix of multiplication by a on the level, built by iterated
    shift-reduce (O(pdim) per column)."""
    p = level.p
    pd = level.pdim()
    modulus = level.modulus
    col = list(a.coeffs)
    cols = [col]
    for _ in range(pd - 1):
        col = [0] + col  # multiply by the generator
        if col[pd]:
            c = col[pd]
            col = [(col[i] - c * modulus[i]) % p for i in range(pd)]
        else:
            col = col[:pd]
        cols.append(col)
    return np.array(cols, dtype=np.int64).T


def quot_mult_matrix(space, entry):
    """F_p-matrix of multiplication by a Poly entry on L[t]/(g)."""
    lv = space.level
    p = lv.p
    g = space.modulus
    if g is None:
        if space.deg == 1:
            return level_mult_matrix(lv, entry.coeff(0))
        raise ValidationError("quot_mult_matrix needs a modulus or a constant space")
    deg, pd = space.deg, lv.pdim()
    dim = deg * pd
    out = np.zeros((dim, dim), dtype=np.int64)
    cur = entry % g
    tpoly = Poly(lv, (lv.zero(), lv.one()))
    for j in range(deg):
        # column block j: coordinates of entry * t^j * (each basis elem of L)
        for c_idx in range(pd):
            coeffs = [lv.zero()] * pd
            coeffs[c_idx] = lv.one()
            scaled = cur.scale(lv.from_fp(np.eye(pd, dtype=np.int64)[c_idx]))
            vec = np.zeros(dim, dtype=np.int64)
            for a, cf in enumerate(scaled.coeffs):
                vec[a * pd:(a + 1) * pd] = cf.coeffs
            out[:, j * pd + c_idx] = vec
        cur = (cur * tpoly) % g
    return out % p


def quot_sigma_matrix(space, e):
    """F_p-matrix of coefficientwise Frobenius^e on L[t]/(g) (g sigma-stable)."""
    f = space.level.frob_matrix(e)
    eye = np.eye(space.deg, dtype=np.int64)
    return np.kron(eye, f)


def semilinear_operator_matrix(space, delta, e):
    """Flattened matrix of v -> delta * sigma^e(v) on space^r (modulus form)."""
    r = space.r
    dim = space.dim()
    edim = space.edim
    sig = quot_sigma_matrix(space, e)
    out = np.zeros((dim, dim), dtype=np.int64)
    p = space.level.p
    for i in range(r):
        for j in range(r):
            entry = delta[i, j]
            if not entry:
                continue
            block = quot_mult_matrix(space, entry) @ sig % p
            out[i * edim:(i + 1) * edim, j * edim:(j + 1) * edim] = block
    return out % p


# ---------------------------------------------------------------------------
# Additive polynomial roots: X^(q^d) - phi*X = c
# ---------------------------------------------------------------------------


def solve_additive(tower, d, phi, c, max_mult=ESCALATION_FACTOR):
    """All roots of X^(q^d) - phi*X = c in the minimal tower level containing
    them; returns (roots, level_index).

    Escalates through multiples of the inputs' level until the full root set
    (q^d roots) is rational; raises CapExhausted past max_mult multiples."""
    if d < 1:
        raise ValidationError("twist exponent d must be positive")
    if not phi:
        raise DegenerateInseparable("phi = 0: equation X^(q^d) = c has a unique root")
    m0 = _lcm(phi.level.m, c.level.m)
    q = tower.q
    p = tower.p
    target_count = q**d
    for j in range(1, max_mult + 1):
        M = m0 * j
        lv = tower.level(M)
        phi_M = tower.embed(phi, M)
        c_M = tower.embed(c, M)
        frob = lv.frob_matrix(d % M)
        mult = _mult_matrix(lv, phi_M)
        A = (frob - mult) % p
        rhs = np.array(c_M.coeffs, dtype=np.int64)
        part = fp_solve(A, rhs, p)
        if part is None:
            continue
        ker = kernel_basis(A, p)
        if p ** len(ker) != target_count:
            continue
        roots = []
        for combo in _iter_fp_combos(ker, p, lv.pdim()):
            vec = (part + combo) % p
            roots.append(lv.from_fp(vec))
        # minimise the reported level
        levels = [tower.min_level(r) for r in roots]
        Mmin = 1
        for ell in levels:
            Mmin = _lcm(Mmin, ell)
        if Mmin != M:
            roots = [tower.project(r, Mmin) for r in roots]
        return roots, Mmin
    raise CapExhausted(
        f"no rational root set below level {m0 * max_mult} for X^(q^{d}) - phi*X = c",
        cap=max_mult,
    )


def _mult_matrix(level, a):
    """F_p-matrix of multiplication by a."""
    cols = []
    acc_basis = level.one()
    # basis is 1, g, g^2, ...: multiply each by a
    g = level.gen()
    cur = a
    for i in range(level.pdim()):
        cols.append(list(cur.coeffs))
        cur = cur * g
    return np.array(cols, dtype=np.int64).T


def _iter_fp_combos(basis, p, dim):
    if not basis:
        yield np.zeros(dim, dtype=np.int64)
        return
    idx = [0] * len(basis)
    total = p ** len(basis)
    for _ in range(total):
        acc = np.zeros(dim, dtype=np.int64)
        for c, b in zip(idx, basis):
            if c:
                acc = acc + c * b
        yield acc % p
        for i in range(len(idx)):
            idx[i] += 1
            if idx[i] < p:
                break
            idx[i] = 0


def _lcm(a, b):
    g, x, y = a, b, None
    while x:
        g, x = x, g % x
    return a * b // g


# ---------------------------------------------------------------------------
# Kernel of v = Delta * sigma^e(v) with a polynomial height cap
# ---------------------------------------------------------------------------


def semilinear_kernel(delta, e=1, cap=None, max_doublings=4):
    """Basis of {v : Delta * sigma^e(v) = v} over the sigma^e-fixed subfield.

    Delta is a square Mat with RatFunc-in-t entries over a finite tower level
    (Poly entries are accepted and lifted).  Returns (basis, cap_used,
    saturated) where basis vectors are Poly vectors in t; together with
    F_q(t)-scalars they span every capped solution.  Saturation doubles the
    cap until the span stabilises."""
    ring = delta.ring
    if isinstance(ring, PolyRing):
        delta = mat_to_frac(delta)
        ring = delta.ring
    if not isinstance(ring, FracField):
        raise ValidationError("semilinear_kernel expects Poly or RatFunc entries")
    level = ring.coeff_field
    if not hasattr(level, "tower"):
        raise ValidationError("semilinear kernel requires a finite coefficient field")
    r = delta.nrows
    if delta.ncols != r:
        raise ValidationError("delta must be square")
    det = delta.det()
    if det.is_zero():
        raise NotRestricted("delta is singular over Frac")
    # clear denominators: denom * v = N * sigma^e(v)
    denom = Poly.one(level)
    for entry in delta.entry_list():
        denom = _poly_lcm(denom, entry.den)
    N = delta.map(lambda f: (f * RatFunc.from_poly(denom)).as_poly(), PolyRing(level))
    maxdeg = max((max((en.degree for en in N.entry_list() if en), default=0), denom.degree))
    if cap is None:
        cap = maxdeg + 8
    prev_basis = None
    for _ in range(max_doublings + 1):
        basis = _capped_kernel(N, denom, level, r, e, cap)
        if prev_basis is not None and len(basis) == len(prev_basis):
            if _same_span(prev_basis, basis, level, r):
                return prev_basis, cap // 2, True
        prev_basis = basis
        cap *= 2
    return prev_basis, cap // 2, False


def _poly_lcm(a, b):
    g = poly_gcd(a, b)
    return ((a * b) // g).monic() if not g.is_zero() else Poly.zero(a.field)


def _capped_kernel(N, denom, level, r, e, cap):
    out_bound = cap + max(denom.degree, max((en.degree for en in N.entry_list() if en), default=0))
    sin = QuotSpace(level, r, degbound=cap)
    sout = QuotSpace(level, r, degbound=out_bound)

    def phi(v):
        sv = sin.sigma(v, e)
        img = N.apply(sv)
        return [denom * v[i] - img[i] for i in range(r)]

    A = fp_matrix(sin, sout, phi)
    ker = kernel_basis(A, level.p)
    vecs = [sin.from_fp(k) for k in ker]
    return _max_independent(vecs, level, r)


def _max_independent(vecs, level, r):
    """Maximal subset independent over the full fraction field Frac(L[t]).

    For sigma^e-fixed vectors this equals independence over the fixed
    subfield, and the big-field span test is Gaussian elimination."""
    frac = FracField(level)
    basis = []
    rows = []  # echelon rows over frac, as lists of RatFunc
    for v in vecs:
        cand = [RatFunc.from_poly(c) for c in v]
        red = _reduce_against(rows, cand, frac)
        if any(bool(x) for x in red):
            rows.append(_normalize_row(red, frac))
            basis.append(v)
    return basis


def _reduce_against(rows, vec, frac):
    vec = list(vec)
    for row in rows:
        piv = next(i for i, x in enumerate(row) if bool(x))
        if bool(vec[piv]):
            c = vec[piv] / row[piv]
            vec = [a - c * b for a, b in zip(vec, row)]
    return vec

def _normalize_row(vec, frac):
    piv = next(i for i, x in enumerate(vec) if bool(x))
    c = vec[piv].inv()
    return [c * x for x in vec]


def _same_span(old, new, level, r):
    frac = FracField(level)
    rows = []
    for v in old:
        cand = [RatFunc.from_poly(c) for c in v]
        red = _reduce_against(rows, cand, frac)
        if any(bool(x) for x in red):
            rows.append(_normalize_row(red, frac))
    for v in new:
        cand = [RatFunc.from_poly(c) for c in v]
        red = _reduce_against(rows, cand, frac)
        if any(bool(x) for x in red):
            return False
    return True


# ---------------------------------------------------------------------------
# Fixed points of tau(v) = Delta*sigma(v) on (L[t]/(g))^r, with escalation
# ---------------------------------------------------------------------------


def fixed_points_space(tower, delta_polys, g_fq, level_index):
    """Build the quotient space and the tau map at a given level.

    delta_polys: Mat of Poly in t over some smaller level; g_fq: monic Poly
    over the level-1 field (an F_q[t] modulus, sigma-stable)."""
    lv = tower.level(level_index)
    g = g_fq.map_coeffs(lambda c: tower.embed(c, level_index), lv)
    delta = delta_polys.map(
        lambda f: f.map_coeffs(lambda c: tower.embed(c, level_index), lv), PolyRing(lv)
    )
    space = QuotSpace(lv, delta.nrows, modulus=g)

    def tau(vec, e=1):
        return space.reduce(delta.apply(space.sigma(vec, e))) if e == 1 else None

    return space, delta, tau


def fixed_point_kernel(tower, delta_polys, g_fq, level_index):
    """F_p-basis of {v in (L[t]/g)^r : Delta*sigma(v) = v} at the given level."""
    space, delta, tau = fixed_points_space(tower, delta_polys, g_fq, level_index)

    def phi(v):
        img = tau(v)
        return [img[i] - v[i] for i in range(space.r)]

    A = fp_matrix(space, space, phi)
    ker = kernel_basis(A, tower.p)
    return space, [space.from_fp(k) for k in ker]


def escalate_levels(start, max_mult=ESCALATION_FACTOR):
    """Multiples of the starting level, in order."""
    return [start * j for j in range(1, max_mult + 1)]


# -- A/p^n module structure over the solution sets ---------------------------


def apn_basis(tower, space, vecs, p_poly, n, expect_rank):
    """Pick vectors forming an A/p^n-basis of the span of ``vecs``.

    Uses Nakayama: reductions mod p must be A/p-independent.  Returns None if
    fewer than expect_rank independent reductions exist (escalate further)."""
    if len(vecs) < expect_rank:
        return None
    lv = space.level
    p = tower.p
    p_lift = p_poly.map_coeffs(lambda c: tower.embed(c, lv.m), lv)
    red_space = QuotSpace(lv, space.r, modulus=p_lift)
    chosen = []
    span_cols = []
    one_lv = tower.level(1)
    fq_basis = _fq_basis_elems(tower, lv)
    for v in vecs:
        red = [c % p_lift for c in v]
        vec_fp = red_space.to_fp(red)
        if span_cols and in_span(span_cols, vec_fp, p):
            continue
        if not span_cols and not vec_fp.any():
            continue
        chosen.append(v)
        # close the A/p-span: multiples by t^a * (F_q-basis scalars)
        for a in range(p_poly.degree):
            shifted = [c.shift(a) % p_lift for c in red]
            for w in fq_basis:
                scaled = [s.scale(w) for s in shifted]
                span_cols.append(red_space.to_fp(scaled))
        if len(chosen) == expect_rank:
            return chosen
    return None


def _fq_basis_elems(tower, lv):
    """Images in lv of an F_p-basis of F_q = level 1."""
    one = tower.level(1)
    out = []
    g = one.gen()
    acc = one.one()
    for _ in range(one.pdim()):
        out.append(tower.embed(acc, lv.m))
        acc = acc * g
    return out


class ApnExpander:
    """Express vectors in the A/p^n-span of a fixed basis (batched solves)."""

    def __init__(self, tower, space, basis, p_poly, n):
        from .fplinalg import BatchSolver
        self.tower = tower
        self.space = space
        self.basis = basis
        self.n = n
        self.lv1 = tower.level(1)
        self.nd = p_poly.degree * n
        fq_basis = _fq_basis_elems(tower, space.level)
        cols = []
        self.tags = []
        for j, b in enumerate(basis):
            for a in range(self.nd):
                shifted = space.reduce([c.shift(a) for c in b])
                for bi, w in enumerate(fq_basis):
                    cols.append(space.to_fp([s.scale(w) for s in shifted]))
                    self.tags.append((j, a, bi))
        A = np.array(cols, dtype=np.int64).T
        self.solver = BatchSolver(A, tower.p)

    def coords(self, target):
        sol = self.solver.solve(self.space.to_fp(target))
        if sol is None:
            return None
        k0 = self.lv1.pdim()
        coords = []
        for j in range(len(self.basis)):
            coeffs = [[0] * k0 for _ in range(self.nd)]
            for idx, (jj, a, bi) in enumerate(self.tags):
                if jj == j and sol[idx]:
                    coeffs[a][bi] = int(sol[idx])
            coords.append(Poly(self.lv1, [self.lv1.from_fp(c) for c in coeffs]))
        return coords


def apn_coords(tower, space, basis, target, p_poly, n):
    """Coordinates of target in the A/p^n-span of basis, as Polys over F_q
    reduced mod p^n; None if not in the span."""
    return ApnExpander(tower, space, basis, p_poly, n).coords(target)
