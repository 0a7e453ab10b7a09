"""Motives over A = F_q[t]: effective motives, motive pairs, isogenies and
the torsion structure theory.

An effective motive is a free K[t]-module with tau(v) = Delta * sigma(v)
whose cokernel is supported at the characteristic point (t - theta).  A
motive is a pair (M, L) with rk L = 1; a homomorphism (M', L') -> (M, L) is
represented by a matrix H over K[t] with

    H * Delta_{M' (x) L} = Delta_{M (x) L'} * sigma(H).

Torsion modules carry the canonical bijective/nilpotent filtration, the
tau-annihilated flag and the nonzero A-annihilator.
"""

from .bold import BoldModule, BoldRing, sigma_mat, sigma_poly, sigma_scalar
from .errors import (CharacteristicViolation, NotTorsion, ValidationError)
from .linalg import (Mat, compound_matrix, field_inverse, lattice_basis,
                     lattice_contains, lattice_equal, mat_frac_to_poly,
                     mat_to_frac, smith_form)
from .poly import (FracField, Poly, PolyRing, RatFunc, factor, poly_gcd,
                   poly_lcm)

import random


class Base:
    """Base datum: q, coefficient field K (finite F_{q^s} or rational
    F_{q^s}(u)) and the characteristic point theta = iota(t)."""

    def __init__(self, tower, s, theta=None, rational=False):
        self.tower = tower
        self.s = s
        self.rational = rational
        level = tower.level(s)
        self.level = level
        self.K = FracField(level) if rational else level
        if theta is None:
            theta = self.K.gen() if rational else level.gen()
        self.theta = theta
        self.kernel_iota = self._kernel_iota()

    @property
    def q(self):
        return self.tower.q

    def _kernel_iota(self):
        """Minimal polynomial of theta over F_q, or None when transcendental."""
        th = self.theta
        if self.rational:
            if not (th.num.degree <= 0 and th.den.degree == 0):
                return None  # theta transcendental over F_q
            th = th.num.coeff(0) / th.den.coeff(0)
        return minpoly_over_fq(self.tower, th)

    def generic(self):
        return self.kernel_iota is None

    # -- coefficient plumbing -------------------------------------------

    def scalar(self, x):
        """Lift a level-s tower element into K."""
        if self.rational:
            return RatFunc.const(self.level, x)
        return x

    def lift_fq_scalar(self, c):
        """Level-1 element -> K."""
        return self.scalar(self.tower.embed(c, self.s))

    def lift_fq_poly(self, f):
        """Poly over the level-1 field -> Poly in t over K."""
        return Poly(self.K, tuple(self.lift_fq_scalar(c) for c in f.coeffs))

    def poly_ring(self):
        return PolyRing(self.K)

    def char_point(self):
        """t - theta in K[t]."""
        return Poly(self.K, (-self.theta, self.K.one()))

    def one_mat(self, n=1):
        return Mat.identity(self.poly_ring(), n)

    def __eq__(self, other):
        return (isinstance(other, Base) and self.tower is other.tower
                and self.s == other.s and self.rational == other.rational
                and self.theta == other.theta)

    def __repr__(self):
        kind = "rational" if self.rational else "finite"
        return f"Base(q={self.q}, s={self.s}, {kind})"


def minpoly_over_fq(tower, x):
    """Minimal polynomial over F_q of a tower element, as Poly over level 1."""
    lv1 = tower.level(1)
    m = x.level.m
    # Galois orbit under c -> c^q
    orbit = [x]
    cur = x.frob()
    while cur != x:
        orbit.append(cur)
        cur = cur.frob()
    big = x.level
    poly = Poly.one(big)
    for r in orbit:
        poly = poly * Poly(big, (-r, big.one()))
    # coefficients are Frobenius-fixed, hence in F_q = level 1
    coeffs = [tower.project(c, 1) for c in poly.coeffs]
    return Poly(lv1, coeffs)


# ---------------------------------------------------------------------------
# Effective motives and motive pairs
# ---------------------------------------------------------------------------


class EffectiveMotive:
    """Free K[t]-module with tau(v) = delta * sigma(v); validated so that
    det(delta) = c * (t - theta)^e."""

    def __init__(self, base, delta):
        if delta.nrows != delta.ncols:
            raise ValidationError("delta must be square")
        self.base = base
        self.delta = delta
        self.rank = delta.nrows
        self.char_exponent = self._validate()

    def _validate(self):
        det = self.delta.det()
        if det.is_zero():
            raise CharacteristicViolation("det(delta) is zero")
        point = self.base.char_point()
        e = 0
        rem = det
        while True:
            quo, r = divmod(rem, point)
            if not r.is_zero():
                break
            rem = quo
            e += 1
        if rem.degree != 0:
            raise CharacteristicViolation(
                "det(delta) has support outside (t - theta): offending factor "
                f"of degree {rem.degree} with coefficients {[repr(c) for c in rem.coeffs]}"
            )
        return e

    def tensor(self, other):
        self._same_base(other)
        return EffectiveMotive(self.base, self.delta.kron(other.delta))

    def direct_sum(self, other):
        self._same_base(other)
        return EffectiveMotive(self.base, self.delta.direct_sum(other.delta))

    def exterior(self, d):
        if not 0 <= d <= self.rank:
            raise ValidationError(f"exterior power degree {d} out of range 0..{self.rank}")
        if d == 0:
            return EffectiveMotive(self.base, self.base.one_mat(1))
        return EffectiveMotive(self.base, compound_matrix(self.delta, d))

    def det_motive(self):
        return self.exterior(self.rank)

    def second_highest(self):
        return self.exterior(self.rank - 1)

    def _same_base(self, other):
        if self.base != other.base:
            raise ValidationError("motives over different bases")

    def __eq__(self, other):
        return (isinstance(other, EffectiveMotive) and self.base == other.base
                and self.delta == other.delta)

    def __repr__(self):
        return f"EffectiveMotive(rank={self.rank}, e={self.char_exponent})"


def unit_effective(base):
    return EffectiveMotive(base, base.one_mat(1))


def carlitz(base):
    """Rank-1 motive with delta = [t - theta]."""
    return EffectiveMotive(base, Mat(base.poly_ring(), [[base.char_point()]]))


class Motive:
    """Pair (M, L) with rk L = 1."""

    def __init__(self, m, l=None):
        if l is None:
            l = unit_effective(m.base)
        if l.rank != 1:
            raise ValidationError("second member of a motive pair must have rank 1")
        if m.base != l.base:
            raise ValidationError("motive pair over mismatched bases")
        self.m = m
        self.l = l

    @property
    def base(self):
        return self.m.base

    @property
    def rank(self):
        return self.m.rank

    def tensor(self, other):
        return Motive(self.m.tensor(other.m), self.l.tensor(other.l))

    def direct_sum(self, other):
        """(M' (x) L) (+) (M (x) L'), paired with L' (x) L."""
        m_new = (self.m.tensor(other.l)).direct_sum(other.m.tensor(self.l))
        return Motive(m_new, self.l.tensor(other.l))

    def exterior(self, d):
        return Motive(self.m.exterior(d), self.l)

    def det_motive(self):
        return Motive(self.m.det_motive(), self.l)

    def dual(self):
        """(M^* (x) L, det M)."""
        return Motive(self.m.second_highest().tensor(self.l), self.m.det_motive())

    def twisted_delta(self, other):
        """Delta of M_self (x) L_other (the untwisted hom source/target)."""
        return self.m.tensor(other.l).delta

    def __eq__(self, other):
        return isinstance(other, Motive) and self.m == other.m and self.l == other.l

    def __repr__(self):
        return f"Motive(rank={self.rank})"


class MotiveHom:
    """Homomorphism (M', L') -> (M, L), stored as the matrix of the
    effective map M' (x) L -> M (x) L'."""

    def __init__(self, source, target, matrix, check=True):
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and not self.intertwines():
            raise ValidationError("matrix does not intertwine the tau structures")

    def delta_in(self):
        return self.source.m.tensor(self.target.l).delta

    def delta_out(self):
        return self.target.m.tensor(self.source.l).delta

    def intertwines(self):
        lhs = self.matrix * self.delta_in()
        rhs = self.delta_out() * sigma_mat(self.matrix)
        return lhs == rhs

    def is_zero(self):
        return all(not e for e in self.matrix.entry_list())

    def __eq__(self, other):
        return (isinstance(other, MotiveHom) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix)

    def __repr__(self):
        return f"MotiveHom({self.source!r} -> {self.target!r})"


def identity_hom(x):
    n = x.m.tensor(x.l).rank
    return MotiveHom(x, x, Mat.identity(x.base.poly_ring(), n), check=False)


def scalar_isogeny(x, a):
    """[a]_X for nonzero a in F_q[t] (Poly over the level-1 field)."""
    if a.is_zero():
        raise ValidationError("scalar isogeny by zero")
    a_k = x.base.lift_fq_poly(a)
    n = x.m.tensor(x.l).rank
    return MotiveHom(x, x, Mat.identity(x.base.poly_ring(), n).scale(a_k), check=False)


def compose_homs(f, g):
    """g o f for f: X' -> X, g: X -> X''; rank-1 twists cancel so the
    composite matrix is the plain product."""
    if f.target != g.source:
        raise ValidationError("compose_homs: target(f) != source(g)")
    return MotiveHom(f.source, g.target, g.matrix * f.matrix)


# ---------------------------------------------------------------------------
# Torsion bold modules
# ---------------------------------------------------------------------------


class TorsionBoldModule:
    """Finite-length K[t]-module (+) K[t]/(d_i) with semilinear tau.

    tau maps generator g_j to sum_i tau_mat[i][j] * g_i, entries reduced mod
    the row divisor."""

    def __init__(self, base, divisors, tau_mat, check=True):
        self.base = base
        self.divisors = [d.monic() for d in divisors]
        if any(d.is_zero() for d in self.divisors):
            raise NotTorsion("zero elementary divisor")
        self.tau_mat = self._reduce_mat(tau_mat)
        if check:
            self._check_well_defined()

    def _reduce_mat(self, mat):
        rows = []
        for i, d in enumerate(self.divisors):
            rows.append([mat[i, j] % d for j in range(len(self.divisors))])
        return Mat(self.base.poly_ring(), rows)

    def _check_well_defined(self):
        # tau(d_j * g_j) = sigma(d_j) * tau(g_j) must vanish
        for j, dj in enumerate(self.divisors):
            sd = sigma_poly(dj)
            for i, di in enumerate(self.divisors):
                if not ((sd * self.tau_mat[i, j]) % di).is_zero():
                    raise ValidationError("tau is not well-defined on the quotient")

    @property
    def ngens(self):
        return len(self.divisors)

    def length(self):
        return sum(d.degree for d in self.divisors)

    def is_zero(self):
        return self.length() == 0

    def reduce_vec(self, vec):
        return [v % d for v, d in zip(vec, self.divisors)]

    def tau_apply(self, vec):
        sv = [sigma_poly(v) for v in vec]
        return self.reduce_vec(self.tau_mat.apply(sv))

    def relations(self):
        """Diagonal relation lattice Lambda_0."""
        return Mat.diag(self.base.poly_ring(), list(self.divisors))

    # -- structure theory -------------------------------------------------

    def tau_image_chain(self):
        """Lattices of im(tau_lin^k) + Lambda_0 until stationary (first entry
        is the full module lattice)."""
        ring = self.base.poly_ring()
        rel = self.relations()
        chain = [Mat.identity(ring, self.ngens)]
        gens = [[self.tau_mat[i, j] for i in range(self.ngens)] for j in range(self.ngens)]
        while True:
            cols = Mat(ring, [[gens[j][i] for j in range(len(gens))] for i in range(self.ngens)])
            lat = lattice_basis(cols.hstack(rel))
            if lattice_equal(lat, chain[-1]):
                break
            chain.append(lat)
            gens = [self.tau_mat.apply([sigma_poly(g) for g in col]) for col in gens]
        return chain

    def tau_lin_bijective(self):
        chain = self.tau_image_chain()
        return len(chain) == 1

    def quotient_by_lattice(self, lat):
        """Presentation of (this module)/(lat/Lambda_0) as a TorsionBoldModule
        plus the projection data; lat must contain Lambda_0."""
        return _presentation_from_lattice(self, lat)

    def submodule_on_lattice(self, lat):
        """Presentation of lat/Lambda_0 with the induced tau."""
        return _submodule_from_lattice(self, lat)

    def char_poly(self):
        """Characteristic ideal generator: product of the divisors."""
        out = Poly.one(self.base.K)
        for d in self.divisors:
            out = out * d
        return out.monic()

    def coker_tau_lin_char(self):
        ring = self.base.poly_ring()
        cols = Mat(ring, [[self.tau_mat[i, j] for j in range(self.ngens)]
                          for i in range(self.ngens)])
        lat = lattice_basis(cols.hstack(self.relations()))
        return lat.det().monic()

    def is_characteristic_iota(self):
        """Kernel and cokernel of tau_lin supported at (t - theta)."""
        chi_t = self.char_poly()
        chi_coker = self.coker_tau_lin_char()
        chi_sigma = sigma_poly(chi_t).monic()
        prod = chi_sigma * chi_coker
        quo, rem = divmod(prod, chi_t)
        if not rem.is_zero():
            return False
        chi_ker = quo
        return _is_char_power(chi_ker, self.base) and _is_char_power(chi_coker, self.base)

    def concrete(self):
        """(index list, t-action matrix, tau matrix) on the K-basis {t^a g_i};
        both matrices are plain row-lists over K, tau acting as mat * sigma(v)."""
        K = self.base.K
        idx = []
        for i, d in enumerate(self.divisors):
            for a in range(d.degree):
                idx.append((i, a))
        pos = {ia: k for k, ia in enumerate(idx)}
        ell = len(idx)
        zero = K.zero()
        tmat = [[zero] * ell for _ in range(ell)]
        taumat = [[zero] * ell for _ in range(ell)]
        for k, (i, a) in enumerate(idx):
            # t * (t^a g_i)
            tp = Poly(K, (zero,) * (a + 1) + (K.one(),)) % self.divisors[i]
            for b in range(tp.degree + 1):
                if tp.coeff(b):
                    tmat[pos[(i, b)]][k] = tp.coeff(b)
            # tau(t^a g_i) = t^a tau(g_i)
            for i2 in range(self.ngens):
                img = (self.tau_mat[i2, i].shift(a)) % self.divisors[i2]
                for b in range(img.degree + 1):
                    if img.coeff(b):
                        taumat[pos[(i2, b)]][k] = taumat[pos[(i2, b)]][k] + img.coeff(b)
        return idx, tmat, taumat

    def __repr__(self):
        return f"TorsionBoldModule(divisors={[d.coeffs for d in self.divisors]})"


def _is_char_power(f, base):
    """f = c * (t - theta)^k?"""
    point = base.char_point()
    rem = f
    while True:
        quo, r = divmod(rem, point)
        if not r.is_zero():
            break
        rem = quo
    return rem.degree == 0


def _presentation_from_lattice(T, lat):
    """T/(lat/Lambda_0) as a TorsionBoldModule; generators are classes of the
    ambient basis transported through the Smith transform."""
    base = T.base
    U, D, V = smith_form(lat)
    size = lat.nrows
    divisors = [D[i, i] for i in range(size)]
    keep = [i for i, d in enumerate(divisors) if d.degree > 0]
    Uinv = mat_frac_to_poly(field_inverse(mat_to_frac(U)), base.poly_ring())

    def express(vec):
        coords = U.apply(vec)
        return [coords[i] % divisors[i] for i in range(size)]

    # tau on new generators h_j = class of Uinv e_j
    tau_cols = []
    for j in range(size):
        gen_vec = [Uinv[i, j] for i in range(size)]
        img = T.tau_mat.apply([sigma_poly(v) for v in gen_vec])
        tau_cols.append(express(img))
    rows = [[tau_cols[j][i] for j in range(size)] for i in range(size)]
    sub_divs = [divisors[i] for i in keep]
    sub_tau = [[rows[i][j] for j in keep] for i in keep]
    module = TorsionBoldModule(base, sub_divs, Mat(base.poly_ring(), sub_tau)) \
        if keep else TorsionBoldModule(base, [], Mat(base.poly_ring(), []), check=False)

    def project(vec):
        full = express(vec)
        return [full[i] for i in keep]

    return module, project


def _submodule_from_lattice(T, lat):
    """lat/Lambda_0 with induced tau, presented on a basis of lat."""
    base = T.base
    ring = base.poly_ring()
    B = lat
    Binv = field_inverse(mat_to_frac(B))
    rel = T.relations()
    # relations of the submodule in the B-basis: Binv * Lambda_0
    rel_in_b = mat_frac_to_poly(Binv * mat_to_frac(rel), ring)
    U, D, V = smith_form(rel_in_b)
    size = B.nrows
    divisors = [D[i, i] for i in range(size)]
    keep = [i for i, d in enumerate(divisors) if d.degree > 0]
    Uinv = mat_frac_to_poly(field_inverse(mat_to_frac(U)), ring)

    def express_ambient(vec):
        """Ambient vector (inside lat) -> coordinates in the new presentation."""
        in_b = _frac_apply(Binv, vec)
        coords = U.apply(in_b)
        return [coords[i] % divisors[i] if divisors[i].degree > 0 else Poly.zero(base.K)
                for i in range(size)]

    tau_cols = []
    gen_vecs = []
    for j in range(size):
        # generator: B * Uinv e_j (ambient coordinates)
        gen_vec = B.apply([Uinv[i, j] for i in range(size)])
        gen_vecs.append(gen_vec)
    for j in range(size):
        img = T.tau_mat.apply([sigma_poly(v) for v in gen_vecs[j]])
        tau_cols.append(express_ambient(img))
    rows = [[tau_cols[j][i] for j in range(size)] for i in range(size)]
    sub_divs = [divisors[i] for i in keep]
    sub_tau = [[rows[i][j] for j in keep] for i in keep]
    module = TorsionBoldModule(base, sub_divs, Mat(ring, sub_tau)) \
        if keep else TorsionBoldModule(base, [], Mat(ring, []), check=False)
    gens = [gen_vecs[i] for i in keep]
    return module, gens


def _frac_apply(frac_mat, poly_vec):
    """Apply a RatFunc matrix to a Poly vector; result must be polynomial."""
    fvec = [RatFunc.from_poly(v) for v in poly_vec]
    out = frac_mat.apply(fvec)
    return [o.as_poly() for o in out]


def torsion_filtration(T):
    """Canonical filtration data of a characteristic-iota torsion module."""
    if not T.is_characteristic_iota():
        raise CharacteristicViolation(
            "torsion module is not of characteristic iota")
    chain = T.tau_image_chain()
    stationary = chain[-1]
    bij, bij_gens = _submodule_from_lattice(T, stationary)
    nil, project = _presentation_from_lattice(T, stationary)
    flag = _nilpotent_flag(nil)
    ann = annihilator(T)
    return {
        "bijective_part": bij,
        "bijective_gens": bij_gens,
        "nilpotent_part": nil,
        "nilpotent_flag": flag,
        "annihilator": ann,
        "image_chain": chain,
    }


def _nilpotent_flag(nil):
    """Lengths of the successive subquotients im(tau^k)/im(tau^(k+1)); each is
    annihilated by tau by construction."""
    if nil.is_zero():
        return []
    ring = nil.base.poly_ring()
    rel = nil.relations()
    lengths = []
    gens = [[nil.tau_mat[i, j] for i in range(nil.ngens)] for j in range(nil.ngens)]
    prev_len = nil.length()
    while prev_len > 0:
        cols = Mat(ring, [[gens[j][i] for j in range(len(gens))] for i in range(nil.ngens)])
        lat = lattice_basis(cols.hstack(rel))
        cur_len = _lattice_quotient_length(lat, rel)
        lengths.append(prev_len - cur_len)
        if cur_len == 0:
            break
        prev_len = cur_len
        gens = [nil.tau_mat.apply([sigma_poly(g) for g in col]) for col in gens]
    return lengths


def _lattice_quotient_length(lat, rel):
    """Length of lat/Lambda_0 = deg det(rel) - deg det(lat)."""
    return rel.det().monic().degree - lat.det().monic().degree


def annihilator(T):
    """Monic generator of Ann_{F_q[t]}(T) for characteristic-iota torsion T."""
    if T.is_zero():
        return Poly.one(T.base.tower.level(1))
    base = T.base
    tower = base.tower
    lv1 = tower.level(1)
    d_max = T.divisors[0]
    for d in T.divisors[1:]:
        d_max = poly_lcm(d_max, d)
    if base.rational:
        chi = T.char_poly()
        big = _as_fq_poly(chi, base)
        if big is None:
            raise CharacteristicViolation(
                "characteristic ideal not sigma-fixed; annihilator undefined")
    else:
        # orbit lcm over sigma
        big = d_max
        cur = d_max
        for _ in range(base.s):
            cur = sigma_poly(cur)
            big = poly_lcm(big, cur)
            if cur == d_max:
                break
        big = _as_fq_poly(big, base)
        if big is None:
            raise CharacteristicViolation("sigma-orbit lcm not rational over F_q")
    # minimise: smallest monic divisor of big (over F_q) killing every divisor
    rng = random.Random(f"annihilator-{big.degree}-{T.length()}")
    facs = factor(big, rng)
    candidates = _divisor_candidates(facs, lv1)
    best = None
    for cand in candidates:
        if _divides_k(d_max, cand, base) and all(_divides_k(d, cand, base) for d in T.divisors):
            if best is None or cand.degree < best.degree:
                best = cand
    if best is None:
        raise CharacteristicViolation("no nonzero F_q[t]-annihilator found")
    return best


def _divisor_candidates(facs, lv1):
    out = [Poly.one(lv1)]
    for irr, mult in facs:
        new = []
        for e in range(mult + 1):
            for c in out:
                new.append(c * irr**e)
        out = new
    return out


def _divides_k(d, a_fq, base):
    """Does d | a in K[t], for d over K and a over F_q (or K)?"""
    a_k = base.lift_fq_poly(a_fq) if a_fq.field is not base.K else a_fq
    if d.is_zero():
        return False
    return (a_k % d).is_zero()


def _as_fq_poly(f, base):
    """Rewrite a sigma-fixed Poly over K as a Poly over the level-1 field."""
    tower = base.tower
    lv1 = tower.level(1)
    out = []
    for c in f.coeffs:
        if base.rational:
            if not isinstance(c, RatFunc) or c.den.degree != 0 or c.num.degree > 0:
                return None
            val = c.num.coeff(0) if c.num.coeffs else base.level.zero()
        else:
            val = c
        if val.frob() != val:
            return None
        out.append(tower.project(val, 1))
    return Poly(lv1, out)


# ---------------------------------------------------------------------------
# Isogeny toolkit
# ---------------------------------------------------------------------------


def is_isogeny(f):
    """(flag, cokernel).  Injectivity = nonzero determinant; the cokernel is
    then torsion with the induced tau."""
    if f.matrix.nrows != f.matrix.ncols:
        return False, None
    det = f.matrix.det()
    if det.is_zero():
        return False, None
    coker = cokernel_module(f)
    return True, coker


def cokernel_module(f):
    base = f.source.base
    H = f.matrix
    delta_out = f.delta_out()
    U, D, V = smith_form(H)
    size = H.nrows
    divisors = [D[i, i] for i in range(size)]
    keep = [i for i, d in enumerate(divisors) if d.degree > 0]
    Uinv = mat_frac_to_poly(field_inverse(mat_to_frac(U)), base.poly_ring())
    tau_cols = []
    for j in range(size):
        gen = [Uinv[i, j] for i in range(size)]
        img = delta_out.apply([sigma_poly(v) for v in gen])
        coords = U.apply(img)
        tau_cols.append([coords[i] % divisors[i] if divisors[i].degree > 0 else Poly.zero(base.K)
                         for i in range(size)])
    sub_divs = [divisors[i] for i in keep]
    rows = [[tau_cols[j][i] for j in keep] for i in keep]
    if not keep:
        return TorsionBoldModule(base, [], Mat(base.poly_ring(), []), check=False)
    return TorsionBoldModule(base, sub_divs, Mat(base.poly_ring(), rows))


def invert_isogeny(f):
    """(a, g) with g o f = [a]_source and f o g = [a]_target, a in F_q[t]."""
    ok, coker = is_isogeny(f)
    if not ok:
        raise ValidationError("not an isogeny")
    if coker.is_zero():
        lv1 = f.source.base.tower.level(1)
        a = Poly.one(lv1)
    else:
        a = annihilator(coker)
    base = f.source.base
    a_k = base.lift_fq_poly(a)
    Hinv = field_inverse(mat_to_frac(f.matrix))
    g_mat = mat_frac_to_poly(Hinv.map(lambda e: e * RatFunc.from_poly(a_k)),
                             base.poly_ring())
    g = MotiveHom(f.target, f.source, g_mat)
    return a, g


def factor_sep_insep(f):
    """Separable/purely-inseparable factorisation on the effective
    representatives: returns (f_sep, f_insep, intermediate) with
    matrix(f_insep) * matrix(f_sep) == matrix(f) exactly."""
    base = f.source.base
    ok, coker = is_isogeny(f)
    if not ok:
        raise ValidationError("not an isogeny")
    src_eff = Motive(EffectiveMotive(base, f.delta_in()))
    tgt_eff = Motive(EffectiveMotive(base, f.delta_out()))
    if base.generic() or coker.is_zero() or coker.tau_lin_bijective():
        return (MotiveHom(src_eff, tgt_eff, f.matrix), identity_hom(tgt_eff), tgt_eff)
    # stationary image of tau on the cokernel, computed in the ambient lattice
    ring = base.poly_ring()
    H = f.matrix
    delta_out = f.delta_out()
    r = H.nrows
    lat = Mat.identity(ring, r)
    prev = None
    gens = [[delta_out[i, j] for i in range(r)] for j in range(r)]
    while True:
        cols = Mat(ring, [[gens[j][i] for j in range(len(gens))] for i in range(r)])
        new_lat = lattice_basis(cols.hstack(H))
        if prev is not None and lattice_equal(new_lat, prev):
            lat = new_lat
            break
        prev = new_lat
        gens = [delta_out.apply([sigma_poly(g) for g in col]) for col in gens]
    B = lat
    Binv = field_inverse(mat_to_frac(B))
    delta_mid = mat_frac_to_poly(Binv * mat_to_frac(delta_out) * mat_to_frac(sigma_mat(B)), ring)
    mid = Motive(EffectiveMotive(base, delta_mid))
    f1_mat = mat_frac_to_poly(Binv * mat_to_frac(H), ring)
    f_sep = MotiveHom(src_eff, mid, f1_mat)
    f_insep = MotiveHom(mid, tgt_eff, B)
    return f_sep, f_insep, mid


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------


def hom_motives(x, y, cap=None, max_doublings=4):
    """F_q[t]-basis of Hom(x, y) via the untwisted intertwining equation.

    Returns (homs, info) where info carries the cap, saturation flag and the
    rank; the same basis is an F-basis of the isomotive Hom."""
    if x.base != y.base:
        raise ValidationError("hom between motives over different bases")
    base = x.base
    if base.rational:
        raise ValidationError("hom solver requires a finite coefficient field")
    delta_in = x.twisted_delta(y)     # M_x (x) L_y
    delta_out = y.twisted_delta(x)    # M_y (x) L_x
    r_in, r_out = delta_in.nrows, delta_out.nrows
    maxdeg = max([e.degree for e in delta_in.entry_list() + delta_out.entry_list() if e] + [0])
    if cap is None:
        cap = maxdeg + 8
    from .solve import QuotSpace, fp_matrix
    from .fplinalg import kernel_basis
    level = base.level
    prev = None
    for _ in range(max_doublings + 1):
        sin = QuotSpace(level, r_out * r_in, degbound=cap)
        sout = QuotSpace(level, r_out * r_in, degbound=cap + maxdeg)

        def phi(vec):
            Hm = Mat(base.poly_ring(), [vec[i * r_in:(i + 1) * r_in] for i in range(r_out)])
            res = Hm * delta_in - delta_out * sigma_mat(Hm)
            return res.entry_list()

        A = fp_matrix(sin, sout, phi)
        ker = kernel_basis(A, base.tower.p)
        sols = [sin.from_fp(k) for k in ker]
        basis = _a_module_basis(sols, base, cap)
        if prev is not None and len(prev) == len(basis):
            if all(_a_span_coords(prev, v, base, cap) is not None for v in sols):
                homs = [MotiveHom(x, y, Mat(base.poly_ring(),
                        [b[i * r_in:(i + 1) * r_in] for i in range(r_out)])) for b in prev]
                return homs, {"cap": cap // 2, "saturated": True, "rank": len(prev)}
        prev = basis
        cap *= 2
    homs = [MotiveHom(x, y, Mat(base.poly_ring(),
            [b[i * r_in:(i + 1) * r_in] for i in range(r_out)])) for b in prev]
    return homs, {"cap": cap // 2, "saturated": False, "rank": len(prev)}


def _a_module_basis(vecs, base, cap):
    """Greedy F_q[t]-independent generating set of the F_q-span of vecs."""
    out = []
    for v in vecs:
        if any(bool(c) for c in v) and _a_span_coords(out, v, base, cap) is None:
            out.append(v)
    return out


def _a_span_coords(basis, target, base, cap):
    """Solve sum_i a_i(t) * basis_i = target with a_i over F_q, deg <= cap."""
    import numpy as np
    from .fplinalg import solve as fp_solve
    from .solve import QuotSpace
    if not basis:
        return None if any(bool(c) for c in target) else []
    level = base.level
    r = len(target)
    space = QuotSpace(level, r, degbound=cap + max(max((c.degree for c in b), default=0) for b in basis) + 1)
    tower = base.tower
    lv1 = tower.level(1)
    fq_elems = []
    g = lv1.gen()
    acc = lv1.one()
    for _ in range(lv1.pdim()):
        fq_elems.append(tower.embed(acc, level.m))
        acc = acc * g
    cols = []
    tags = []
    for j, b in enumerate(basis):
        for a in range(cap + 1):
            shifted = [c.shift(a) for c in b]
            for bi, w in enumerate(fq_elems):
                cols.append(space.to_fp([s.scale(w) for s in shifted]))
                tags.append((j, a, bi))
    A = np.array(cols, dtype=np.int64).T
    sol = fp_solve(A, space.to_fp(list(target)), tower.p)
    if sol is None:
        return None
    k0 = lv1.pdim()
    coords = []
    for j in range(len(basis)):
        coeffs = [[0] * k0 for _ in range(cap + 1)]
        for idx, (jj, a, bi) in enumerate(tags):
            if jj == j and sol[idx]:
                coeffs[a][bi] = int(sol[idx])
        coords.append(Poly(lv1, [lv1.from_fp(c) for c in coeffs]))
    return coords


# ---------------------------------------------------------------------------
# The bold-module image of a motive
# ---------------------------------------------------------------------------


def motive_to_bold(x):
    """I_0(X) = (F_K (x) M) (x) (F_K (x) L)^dual: tau = Delta_M / ell."""
    base = x.base
    ell = x.l.delta[0, 0]
    frac = mat_to_frac(x.m.delta)
    inv_ell = RatFunc.from_poly(ell).inv()
    tau = frac.map(lambda e: e * inv_ell)
    return BoldModule(BoldRing(base, "FK"), tau)
