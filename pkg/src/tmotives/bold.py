"""Bold rings and bold modules: the Frobenius-semilinear module layer.

A bold ring is one of the concrete coefficient rings K[t], F_K = Frac(F (x) K),
the semilocal ring at a prime p, or the p-adic completions at working
precision n, together with the endomorphism sigma = id (x) (c -> c^q).  A bold
module is a free module with tau(v) = T * sigma(v) for a square matrix T.

Module elements here are matrices/vectors in t over the coefficient field K;
sigma fixes t and acts on K-coefficients (for rational K = F_{q^s}(u) the
action is the full q-th power, so u -> u^q).
"""

from .errors import NotRestricted, ValidationError
from .linalg import Mat, field_inverse, mat_to_frac
from .poly import (FracField, Poly, PolyRing, QuotElem, QuotRing, RatFunc,
                   poly_gcd, poly_lcm)
from .solve import semilinear_kernel


# ---------------------------------------------------------------------------
# sigma on the scalar stack
# ---------------------------------------------------------------------------


def sigma_scalar(x, e=1):
    """c -> c^(q^e) on the coefficient field K (tower element or RatFunc in u)."""
    if e == 0:
        return x
    if hasattr(x, "frob"):
        return x.frob(e)
    if isinstance(x, RatFunc):
        q_e = x.field.tower.q**e
        return RatFunc(_power_poly(x.num, q_e), _power_poly(x.den, q_e))
    raise ValidationError(f"no Frobenius action on {type(x).__name__}")


def _power_poly(f, q_e):
    """(sum a_i u^i)^(q^e) = sum a_i^(q^e) u^(i*q^e) in characteristic p."""
    field = f.field
    coeffs = [field.zero()] * (f.degree * q_e + 1 if f.coeffs else 0)
    for i, c in enumerate(f.coeffs):
        if c:
            coeffs[i * q_e] = c ** q_e
    return Poly(field, coeffs)


def sigma_poly(f, e=1):
    """Coefficientwise sigma on a Poly in t (t is fixed)."""
    return f.map_coeffs(lambda c: sigma_scalar(c, e))


def sigma_rat(f, e=1):
    """Sigma on RatFunc in t over K."""
    if isinstance(f, Poly):
        return sigma_poly(f, e)
    return RatFunc(sigma_poly(f.num, e), sigma_poly(f.den, e))


def sigma_mat(mat, e=1):
    return mat.map(lambda x: sigma_rat(x, e) if isinstance(x, (Poly, RatFunc))
                   else _sigma_quot(x, e))


def _sigma_quot(x, e):
    if isinstance(x, QuotElem):
        return QuotElem(x.ring, sigma_poly(x.rep, e))
    raise ValidationError(f"no sigma action on {type(x).__name__}")


# ---------------------------------------------------------------------------
# Bold rings
# ---------------------------------------------------------------------------

RING_KINDS = ("AK", "FK", "ApK", "AKp", "FKp")


class BoldRing:
    """Descriptor for the concrete bold rings over a fixed base.

    kind: one of RING_KINDS; the local kinds carry a prime p of F_q[t]
    (monic irreducible Poly over the level-1 field) and, for the completed
    kinds, a working precision n.
    """

    def __init__(self, base, kind, p=None, n=None):
        if kind not in RING_KINDS:
            raise ValidationError(f"unknown bold ring kind {kind!r}")
        if kind in ("ApK", "AKp", "FKp") and p is None:
            raise ValidationError(f"ring kind {kind} needs a prime p")
        if kind in ("AKp", "FKp") and n is None:
            raise ValidationError(f"ring kind {kind} needs a working precision n")
        self.base = base
        self.kind = kind
        self.p = p
        self.n = n

    def sigma(self, x, e=1):
        if isinstance(x, (Poly, RatFunc)):
            return sigma_rat(x, e)
        return _sigma_quot(x, e)

    def sigma_fixed(self, x):
        return self.sigma(x) == x

    def p_in_K(self):
        """p lifted to K[t]."""
        return self.base.lift_fq_poly(self.p)

    def is_unit(self, x):
        """Unit test per ring kind."""
        if isinstance(x, QuotElem):
            g = poly_gcd(x.rep, self.p_in_K() if self.kind in ("AKp", "FKp") else x.ring.modulus)
            return bool(x) and g.degree == 0
        if isinstance(x, Poly):
            x = RatFunc.from_poly(x)
        if not isinstance(x, RatFunc):
            raise ValidationError(f"cannot test units of {type(x).__name__}")
        if x.is_zero():
            return False
        if self.kind == "AK":
            return x.is_poly() and x.num.degree == 0
        if self.kind == "FK":
            return True
        if self.kind == "ApK":
            pk = self.p_in_K()
            return poly_gcd(x.num, pk).degree == 0 and poly_gcd(x.den, pk).degree == 0
        # completed kinds on rational representatives: integral unit iff
        # prime to p in both numerator and denominator
        pk = self.p_in_K()
        return poly_gcd(x.num, pk).degree == 0 and poly_gcd(x.den, pk).degree == 0

    def __eq__(self, other):
        return (isinstance(other, BoldRing) and self.kind == other.kind
                and self.base is other.base and self.p == other.p and self.n == other.n)

    def __repr__(self):
        extra = f", p={self.p!r}, n={self.n}" if self.p is not None else ""
        return f"BoldRing({self.kind}{extra})"


# ---------------------------------------------------------------------------
# Bold modules
# ---------------------------------------------------------------------------


class BoldModule:
    """Free bold module given by its tau matrix: tau(v) = tau_mat * sigma(v)."""

    def __init__(self, ring, tau_mat):
        if tau_mat.nrows != tau_mat.ncols:
            raise ValidationError("tau matrix must be square")
        self.ring = ring
        self.tau_mat = tau_mat

    @property
    def rank(self):
        return self.tau_mat.nrows

    def is_restricted(self):
        det = self.tau_mat.det()
        return self.ring.is_unit(det)

    def require_restricted(self):
        if not self.is_restricted():
            raise NotRestricted("tau linearisation is not bijective (det not a unit)")

    def tau_apply(self, vec, e=1):
        sv = [self.ring.sigma(v, e) for v in vec]
        return self.tau_mat.apply(sv)

    def tensor(self, other):
        if self.ring != other.ring:
            raise ValidationError("tensor of bold modules over different rings")
        return BoldModule(self.ring, self.tau_mat.kron(other.tau_mat))

    def direct_sum(self, other):
        if self.ring != other.ring:
            raise ValidationError("sum of bold modules over different rings")
        return BoldModule(self.ring, self.tau_mat.direct_sum(other.tau_mat))

    def dual(self):
        """tau_dual = (tau_mat)^(-T), so the evaluation pairing is tau-equivariant."""
        self.require_restricted()
        frac = mat_to_frac(self.tau_mat) if isinstance(self.tau_mat.ring, PolyRing) else self.tau_mat
        inv_t = field_inverse(frac).transpose()
        return BoldModule(self.ring, inv_t)

    def hom_module(self, other):
        """dual(self) (x) other; tau-invariants biject with homomorphisms."""
        d = self.dual()
        o = other
        if isinstance(o.tau_mat.ring, PolyRing) and isinstance(d.tau_mat.ring, FracField):
            o = BoldModule(o.ring, mat_to_frac(o.tau_mat))
        return d.tensor(o)

    def tau_invariants(self, cap=None):
        """F_q(t)-basis of {v : tau(v) = v} for modules over F_K (finite K)."""
        self.require_restricted()
        basis, cap_used, saturated = semilinear_kernel(self.tau_mat, e=1, cap=cap)
        return basis, saturated

    def pairing_commutes(self):
        """Exact check that evaluation dual(m) (x) m -> unit intertwines tau."""
        d = self.dual()
        prod = d.tau_mat.kron(
            mat_to_frac(self.tau_mat) if isinstance(self.tau_mat.ring, PolyRing) else self.tau_mat
        )
        r = self.rank
        ring = prod.ring
        # evaluation row: e_{(i,j)} = delta_ij
        row = [[ring.one() if i == j else ring.zero()
                for i in range(r) for j in range(r)]]
        E = Mat(ring, row)
        return (E * prod) == E

    def __repr__(self):
        return f"BoldModule(rank={self.rank}, ring={self.ring!r})"


# ---------------------------------------------------------------------------
# den / lcm calculus in F_K(X)
# ---------------------------------------------------------------------------


def den(f):
    """Monic denominator of a reduced rational function in X over F_K."""
    if isinstance(f, Poly):
        return Poly.one(f.field)
    return f.den


def lcm_den(f, g):
    return poly_lcm(den(f), den(g))


def den_vec(vec):
    out = None
    for v in vec:
        d = den(v)
        out = d if out is None else poly_lcm(out, d)
    return out if out is not None else None


def in_scalar_extension(f, sigma_coeff, orbit_cap):
    """Membership of f in F(X) (x)_F F_K inside F_K(X).

    True iff den(f) divides a nonzero polynomial with sigma-fixed
    coefficients; tested via the sigma-orbit lcm of den(f), with the orbit
    capped at orbit_cap steps (exact for constant-field coefficients).
    Returns (bool, witness_or_None)."""
    d = den(f)
    if d.degree == 0:
        return True, d
    acc = d
    cur = d
    for _ in range(orbit_cap):
        cur = cur.map_coeffs(sigma_coeff)
        acc = poly_lcm(acc, cur)
        if acc.map_coeffs(sigma_coeff) == acc:
            return True, acc
    if acc.map_coeffs(sigma_coeff) == acc:
        return True, acc
    return False, None
