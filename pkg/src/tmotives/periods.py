"""Desk-scale valuation and period kernels at a prime p of F_q[t].

Elements of the completed ring over the separable closure are truncated
Laurent series in the local parameter with coefficients in the split form
(F_p (x) L) ~ L^d, where L is a constant-field extension F_{q^m} or
F_{q^m}(u).  sigma acts on a coefficient tuple by the cyclic shift with
q-powers (z_0, ..., z_{d-1}) -> (z_{d-1}^q, z_0^q, ..., z_{d-2}^q).

Places are those of K = F_q(u) (monic irreducibles in u, plus infinity),
tracked through constant-field extensions only, so every lift is unramified
and values stay integral.
"""

import math

from .bold import sigma_scalar
from .errors import CapExhausted, ValidationError
from .fplinalg import kernel_basis, solve as fp_solve
from .poly import FracField, Poly, RatFunc, factor, poly_gcd
from .solve import solve_additive

import random

import numpy as np

INF = math.inf


# ---------------------------------------------------------------------------
# Places of F_q(u) and their constant-field lifts
# ---------------------------------------------------------------------------


class Place:
    """A place of F_q(u): a monic irreducible of F_q[u], or infinity."""

    def __init__(self, tower, pi=None):
        self.tower = tower
        self.pi = pi  # None = the infinite place
        self._lifts = {}
        if pi is not None:
            if not pi.is_monic():
                raise ValidationError("finite places are monic irreducibles")
            self._lifts[1] = pi

    @property
    def infinite(self):
        return self.pi is None

    def label(self):
        if self.infinite:
            return "inf"
        return "[" + ",".join(str(c.coeffs[0]) for c in self.pi.coeffs) + "]"

    def lift(self, m):
        """Chosen irreducible factor over F_{q^m}, chain-compatible."""
        if self.infinite:
            raise ValidationError("the infinite place has no finite lift")
        if m in self._lifts:
            return self._lifts[m]
        tower = self.tower
        lv = tower.level(m)
        # factor the largest known compatible lift over the new level
        known = sorted(d for d in self._lifts if m % d == 0)
        prev = self._lifts[known[-1]] if known else self.pi
        prev_up = prev.map_coeffs(lambda c: tower.embed(c, m), lv)
        rng = random.Random(f"place-{self.label()}-{m}")
        facs = factor(prev_up, rng)
        pick = facs[0][0]
        self._lifts[m] = pick
        return pick

    def __eq__(self, other):
        return isinstance(other, Place) and self.pi == other.pi

    def __repr__(self):
        return f"Place({self.label()})"


class PlaceSet:
    """Tracked places with their lifts; purely a cache."""

    def __init__(self, tower):
        self.tower = tower
        self._places = {}

    def finite(self, pi):
        key = tuple(c.coeffs for c in pi.coeffs)
        if key not in self._places:
            self._places[key] = Place(self.tower, pi)
        return self._places[key]

    def infinity(self):
        if "inf" not in self._places:
            self._places["inf"] = Place(self.tower)
        return self._places["inf"]


def vx_scalar(c, place):
    """Valuation of a coefficient component: a tower element (constants have
    value 0) or a RatFunc in u over a tower level."""
    if hasattr(c, "frob"):  # tower element
        return 0 if c else INF
    if not isinstance(c, RatFunc):
        raise ValidationError(f"no valuation for {type(c).__name__}")
    if c.is_zero():
        return INF
    if place.infinite:
        return c.den.degree - c.num.degree
    level_m = c.field.m if hasattr(c.field, "m") else c.num.field.m
    pi = place.lift(level_m)
    return _ord_at(c.num, pi) - _ord_at(c.den, pi)


def _ord_at(f, pi):
    n = 0
    while True:
        quo, rem = divmod(f, pi)
        if not rem.is_zero():
            return n
        f = quo
        n += 1


# ---------------------------------------------------------------------------
# Truncated Laurent series with split coefficients
# ---------------------------------------------------------------------------


class LaurentApprox:
    """Map index -> d-tuple over L, with an exactness horizon.

    prec = None means the element is exact (finitely supported); otherwise
    coefficients are correct for indices < prec and unknown beyond."""

    __slots__ = ("field", "d", "coeffs", "prec")

    def __init__(self, field, d, coeffs, prec=None):
        self.field = field
        self.d = d
        self.coeffs = {i: tuple(v) for i, v in coeffs.items()
                       if (prec is None or i < prec) and any(bool(x) for x in v)}
        self.prec = prec

    @classmethod
    def from_scalar(cls, field, d, c, index=0, prec=None):
        return cls(field, d, {index: tuple([c] * d)}, prec)

    @classmethod
    def zero(cls, field, d, prec=None):
        return cls(field, d, {}, prec)

    def is_exact(self):
        return self.prec is None

    def support(self):
        return sorted(self.coeffs)

    def order(self):
        sup = self.support()
        if not sup:
            return None
        return sup[0]

    def leading(self):
        o = self.order()
        if o is None:
            raise ValidationError("zero element has no leading coefficient")
        return self.coeffs[o]

    def coeff(self, i):
        zero = self.field.zero()
        return self.coeffs.get(i, tuple([zero] * self.d))

    def invertible_leading(self):
        o = self.order()
        return o is not None and all(bool(z) for z in self.coeffs[o])

    def _join_prec(self, other):
        if self.prec is None:
            return other.prec
        if other.prec is None:
            return self.prec
        return min(self.prec, other.prec)

    def __add__(self, other):
        prec = self._join_prec(other)
        out = {}
        for i in set(self.coeffs) | set(other.coeffs):
            a, b = self.coeff(i), other.coeff(i)
            out[i] = tuple(x + y for x, y in zip(a, b))
        return LaurentApprox(self.field, self.d, out, prec)

    def __neg__(self):
        return LaurentApprox(self.field, self.d,
                             {i: tuple(-x for x in v) for i, v in self.coeffs.items()},
                             self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        # truncation bookkeeping: a product coefficient at index k is exact
        # when every contributing pair is known
        if self.prec is None and other.prec is None:
            prec = None
        else:
            oa = self.order()
            ob = other.order()
            if oa is None or ob is None:
                return LaurentApprox.zero(self.field, self.d, self._join_prec(other))
            pa = self.prec if self.prec is not None else INF
            pb = other.prec if other.prec is not None else INF
            prec = min(pa + ob, pb + oa)
            if prec == INF:
                prec = None
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if prec is not None and k >= prec:
                    continue
                cur = out.get(k)
                prod = tuple(x * y for x, y in zip(a, b))
                out[k] = prod if cur is None else tuple(x + y for x, y in zip(cur, prod))
        return LaurentApprox(self.field, self.d, out, prec)

    def sigma(self, e=1):
        out = {}
        for i, v in self.coeffs.items():
            cur = v
            for _ in range(e):
                cur = tuple(sigma_scalar(z, 1) for z in (cur[-1],) + cur[:-1])
            out[i] = cur
        return LaurentApprox(self.field, self.d, out, self.prec)

    def inverse(self, upto):
        """Inverse through index < upto; requires order 0 and invertible
        leading coefficient."""
        if self.order() != 0 or not self.invertible_leading():
            raise ValidationError("inverse needs order 0 and invertible leading coefficient")
        lead = self.coeffs[0]
        inv_lead = tuple(_inv_component(z) for z in lead)
        prec = upto if self.prec is None else min(upto, self.prec)
        out = {0: inv_lead}
        for k in range(1, int(prec)):
            # c_k = -lead^{-1} * sum_{j<k} (self_{k-j} * out_j)
            acc = None
            for j in range(k):
                if j in out and (k - j) in self.coeffs:
                    term = tuple(x * y for x, y in zip(self.coeffs[k - j], out[j]))
                    acc = term if acc is None else tuple(a + b for a, b in zip(acc, term))
            if acc is None:
                continue
            out[k] = tuple(-(il * a) for il, a in zip(inv_lead, acc))
        return LaurentApprox(self.field, self.d, out, prec)

    def truncate(self, upto):
        prec = upto if self.prec is None else min(self.prec, upto)
        return LaurentApprox(self.field, self.d,
                             {i: v for i, v in self.coeffs.items() if i < upto}, prec)

    def agrees_with(self, other, upto):
        for i in range(min(self.order() or 0, other.order() or 0), int(upto)):
            if any(x != y for x, y in zip(self.coeff(i), other.coeff(i))):
                return False
        return True

    def __repr__(self):
        return f"LaurentApprox(d={self.d}, support={self.support()}, prec={self.prec})"


def _inv_component(z):
    if hasattr(z, "inv"):
        return z.inv()
    return 1 / z


def vx(f, place):
    """(value, exact) for a LaurentApprox: min over coefficients and
    components; a truncated input yields a certified bound (exact=False)."""
    vals = [vx_scalar(z, place) for v in f.coeffs.values() for z in v]
    if not vals:
        return (INF, f.prec is None)
    return (min(vals), f.prec is None)


def vx_matrix(rows, place):
    vals = []
    exact = True
    for row in rows:
        for f in row:
            v, e = vx(f, place)
            vals.append(v)
            exact = exact and e
    return (min(vals) if vals else INF, exact)


# ---------------------------------------------------------------------------
# sigma(s) = f * s solver (coefficientwise, via the cyclic reduction to
# X^(q^d) - phi*X = C)
# ---------------------------------------------------------------------------


def sigma_quotient_solve(tower, f, N):
    """s with sigma(s) = f * s through t^N.

    f must have order 0 and invertible leading coefficient, with constant
    (tower-element) components.  Returns a LaurentApprox over the smallest
    tower level containing all the solution components."""
    if f.order() != 0 or not f.invertible_leading():
        raise ValidationError("solver needs order 0 and an invertible leading coefficient")
    d = f.d
    q = tower.q
    fcoeffs = {i: tuple(_as_tower(tower, z) for z in v) for i, v in f.coeffs.items()}
    # working level: all inputs embedded to a common level, escalated on demand
    M = 1
    for v in fcoeffs.values():
        for z in v:
            M = _lcm(M, z.level.m)
    f0 = [tower.embed(fcoeffs[0][c], M) for c in range(d)]
    phi = f0[0]
    for j in range(1, d):
        phi = phi * (f0[j] ** (q ** (d - j)))
    # order 0: nonzero root of X^(q^d) = phi X
    roots, lvl = solve_additive(tower, d, phi, tower.level(phi.level.m).zero())
    nz = sorted((r for r in roots if r), key=lambda r: r.coeffs)
    s00 = nz[0]
    M = _lcm(M, lvl)
    s = {0: _chain_solve_order0(tower, d, q, f0, s00, M)}
    M = max(c.level.m for c in s[0])
    for r in range(1, N):
        s_r, M = _solve_order_r(tower, d, q, fcoeffs, s, r, M)
        s[r] = s_r
    lv = tower.level(M)
    coeffs = {i: tuple(tower.embed(c, M) for c in v) for i, v in s.items()}
    return LaurentApprox(lv, d, coeffs, prec=N)


def _as_tower(tower, z):
    if hasattr(z, "frob"):
        return z
    if isinstance(z, RatFunc) and z.num.degree <= 0 and z.den.degree == 0:
        return z.num.coeff(0) if z.num.coeffs else z.num.field.zero()
    raise ValidationError("solver supports constant-field coefficients only")


def _chain_solve_order0(tower, d, q, f0, s00, M):
    s0 = [tower.embed(s00, M)]
    f0 = [tower.embed(c, M) for c in f0]
    for c in range(1, d):
        s0.append((s0[c - 1] ** q) / f0[c])
    return tuple(s0)


def _solve_order_r(tower, d, q, fcoeffs, s, r, M):
    """One inhomogeneous step: components of s_r via X^(q^d) - phi X = C_r."""
    f0 = [tower.embed(fcoeffs[0][c], M) for c in range(d)]
    # E_r[c] = sum_{i=1..r} f_i[c] * s_{r-i}[c]
    E = []
    for c in range(d):
        acc = tower.level(M).zero()
        for i in range(1, r + 1):
            if i in fcoeffs:
                acc = acc + tower.embed(fcoeffs[i][c], M) * tower.embed(s[r - i][c], M)
        E.append(acc)
    # chain: s_r[c] = A_c * s_r[0]^(q^c) + B_c
    A = [tower.level(M).one()]
    B = [tower.level(M).zero()]
    for c in range(1, d):
        inv = f0[c].inv()
        A.append((A[c - 1] ** q) * inv)
        B.append(((B[c - 1] ** q) - E[c]) * inv)
    # closing equation: s_r[d-1]^q = f0[0] s_r[0] + E[0]
    Aq = A[d - 1] ** q
    phi = f0[0] / Aq
    C = (E[0] - (B[d - 1] ** q)) / Aq
    roots, lvl = solve_additive(tower, d, phi, C)
    root = sorted(roots, key=lambda x: x.coeffs)[0]
    M2 = _lcm(M, lvl)
    s_r0 = tower.embed(root, M2)
    out = [s_r0]
    A = [tower.embed(a, M2) for a in A]
    B = [tower.embed(b, M2) for b in B]
    for c in range(1, d):
        out.append(A[c] * (s_r0 ** (q**c)) + B[c])
    # re-embed previous orders happens lazily at assembly
    return tuple(out), M2


def verify_sigma_quotient(tower, f, s, N):
    """sigma(s) == f * s through t^N, exactly at the truncation."""
    M = s.field.m if hasattr(s.field, "m") else s.field.coeff_field.m
    f_up = LaurentApprox(s.field, f.d,
                         {i: tuple(tower.embed(_as_tower(tower, z), M) for z in v)
                          for i, v in f.coeffs.items()})
    lhs = s.sigma()
    rhs = f_up * s
    return lhs.agrees_with(rhs, N)


def _lcm(a, b):
    x, y = a, b
    while y:
        x, y = y, x % y
    return a * b // x


# ---------------------------------------------------------------------------
# Fixed-point bound: sigma^m(F) = Delta * F
# ---------------------------------------------------------------------------


def fixpoint_bound_check(tower, delta, m, place, N, ucap=None):
    """Solve sigma^m(F) = Delta * F to t-precision N (d = 1 tracking) and
    evaluate v_x(F) >= v_x(Delta)/(q^m - 1) on the truncation.

    delta: square list-of-lists of LaurentApprox over a common F_{q^M}(u)
    with polynomial coefficients.  Solves order-by-order: the order-0 system,
    then inhomogeneous steps; each order is a capped exact linear solve."""
    n = len(delta)
    field = delta[0][0].field
    if not isinstance(field, FracField):
        raise ValidationError("fixpoint solver expects rational coefficients")
    level = field.coeff_field
    if any(e.d != 1 for row in delta for e in row):
        raise ValidationError("fixpoint solver tracks degree-1 primes only")
    q = tower.q
    if ucap is None:
        maxdeg = 0
        for row in delta:
            for e in row:
                for v in e.coeffs.values():
                    c = v[0]
                    if isinstance(c, RatFunc):
                        if c.den.degree > 0:
                            raise ValidationError("fixpoint solver expects polynomial entries")
                        maxdeg = max(maxdeg, c.num.degree)
        ucap = maxdeg + 4
    orders = sorted({i for row in delta for e in row for i in e.coeffs})
    if not orders:
        raise ValidationError("zero delta")
    base_order = min(orders)
    delta0 = [[_upoly(delta[i][j].coeff(base_order)[0]) for j in range(n)] for i in range(n)]
    # order-0 candidates: kernel of sigma^m - Delta_0 on capped vectors
    sol0_space = _UPolySpace(level, n, ucap)
    out_space = _UPolySpace(level, n, max(ucap * q**m, ucap + maxdeg_mat(delta0)) + 1)

    def phi0(vec):
        sv = [_upoly_power(v, q**m) for v in vec]
        img = _upoly_mat_apply(delta0, vec, level)
        return [sv[i] - img[i] for i in range(n)]

    A0 = _space_matrix(sol0_space, out_space, phi0)
    ker = kernel_basis(A0, tower.p)
    if not ker:
        raise CapExhausted("no order-0 solution at the tracked level", cap=ucap)
    for cand in _candidate_combos(ker, tower.p, limit=200):
        F0 = sol0_space.from_fp(cand)
        if all(not v for v in F0):
            continue
        F = {base_order - base_order: F0}
        ok = True
        for r in range(1, N):
            rhs = [Poly.zero(level)] * n
            for l in range(1, r + 1):
                dl = [[_upoly(delta[i][j].coeff(base_order + l)[0]) for j in range(n)]
                      for i in range(n)]
                img = _upoly_mat_apply(dl, F.get(r - l, [Poly.zero(level)] * n), level)
                rhs = [a + b for a, b in zip(rhs, img)]

            def phir(vec):
                sv = [_upoly_power(v, q**m) for v in vec]
                img = _upoly_mat_apply(delta0, vec, level)
                return [sv[i] - img[i] for i in range(n)]

            Ar = _space_matrix(sol0_space, out_space, phir)
            target = out_space.to_fp(rhs)
            sol = fp_solve(Ar, target, tower.p)
            if sol is None:
                ok = False
                break
            F[r] = sol0_space.from_fp(sol)
        if ok:
            frac = field
            Fser = [LaurentApprox(frac, 1,
                                  {base_order + r: (RatFunc.from_poly(F[r][i]),)
                                   for r in F}, prec=base_order + N)
                    for i in range(n)]
            vF, _ = vx_matrix([[e] for e in Fser], place)
            vD, exactD = vx_matrix(delta, place)
            bound = vD / (q**m - 1)
            return {
                "solution": Fser,
                "vx_solution": vF,
                "vx_delta": vD,
                "bound": bound,
                "bound_holds": vF >= bound,
            }
    raise CapExhausted("no liftable order-0 solution found", cap=200)


def maxdeg_mat(rows):
    out = 0
    for row in rows:
        for e in row:
            out = max(out, e.degree if e.degree > 0 else 0)
    return out


def _upoly(c):
    if isinstance(c, RatFunc):
        if c.den.degree != 0:
            raise ValidationError("expected a polynomial coefficient")
        return c.num
    if isinstance(c, Poly):
        return c
    raise ValidationError("expected a rational-function coefficient")


def _upoly_power(f, q_e):
    field = f.field
    if f.is_zero():
        return f
    coeffs = [field.zero()] * (f.degree * q_e + 1)
    for i, c in enumerate(f.coeffs):
        if c:
            coeffs[i * q_e] = c ** q_e
    return Poly(field, coeffs)


def _upoly_mat_apply(rows, vec, level):
    n = len(rows)
    out = []
    for i in range(n):
        acc = Poly.zero(level)
        for j in range(n):
            acc = acc + rows[i][j] * vec[j]
        out.append(acc)
    return out


class _UPolySpace:
    """Vectors of u-polynomials over a tower level, degree <= cap."""

    def __init__(self, level, n, cap):
        self.level = level
        self.n = n
        self.cap = cap
        self.edim = (cap + 1) * level.pdim()

    def dim(self):
        return self.n * self.edim

    def to_fp(self, vec):
        out = np.zeros(self.dim(), dtype=np.int64)
        pd = self.level.pdim()
        for i, poly in enumerate(vec):
            if poly.degree > self.cap:
                raise ValidationError("capped space overflow")
            base = i * self.edim
            for j, c in enumerate(poly.coeffs):
                out[base + j * pd: base + (j + 1) * pd] = c.coeffs
        return out

    def from_fp(self, arr):
        pd = self.level.pdim()
        vec = []
        for i in range(self.n):
            base = i * self.edim
            coeffs = []
            for j in range(self.cap + 1):
                coeffs.append(self.level.from_fp(arr[base + j * pd: base + (j + 1) * pd]))
            vec.append(Poly(self.level, coeffs))
        return vec

    def basis_vectors(self):
        eye = np.eye(self.dim(), dtype=np.int64)
        for i in range(self.dim()):
            yield self.from_fp(eye[i])


def _space_matrix(space_in, space_out, fn):
    cols = []
    for b in space_in.basis_vectors():
        cols.append(space_out.to_fp(fn(b)))
    return np.array(cols, dtype=np.int64).T


def _candidate_combos(basis, p, limit):
    count = 0
    idx = [0] * len(basis)
    total = p ** len(basis)
    for _ in range(min(total, limit + 1)):
        acc = np.zeros(len(basis[0]), dtype=np.int64)
        for c, b in zip(idx, basis):
            if c:
                acc = acc + c * b
        yield acc % p
        count += 1
        if count > limit:
            return
        for i in range(len(idx)):
            idx[i] += 1
            if idx[i] < p:
                break
            idx[i] = 0


# ---------------------------------------------------------------------------
# Floor inequality
# ---------------------------------------------------------------------------


def eps_floor_check(s, place, N, a):
    """v_x(sigma^N(a)) >= floor(v_x(s * sigma^N(a)) / q^N) * q^N, under the
    hypotheses v_x(s) >= 0 and v_x(s(0)) < q^N."""
    tower = _tower_of(s.field)
    q = tower.q
    vs, _ = vx(s, place)
    if not (vs >= 0):
        raise ValidationError("hypothesis violated: v_x(s) < 0")
    if s.order() != 0 or not s.invertible_leading():
        raise ValidationError("s must have order 0 with invertible leading coefficient")
    v_lead = min(vx_scalar(z, place) for z in s.leading())
    if not (v_lead < q**N):
        raise ValidationError("hypothesis violated: v_x(s(0)) >= q^N")
    sig_a = a.sigma(N)
    lhs, _ = vx(sig_a, place)
    prod = s * sig_a
    v_prod, _ = vx(prod, place)
    if v_prod == INF:
        rhs = -INF
    else:
        rhs = math.floor(v_prod / q**N) * q**N
    return {"lhs": lhs, "rhs": rhs, "holds": lhs >= rhs,
            "v_s": vs, "v_lead": v_lead, "v_prod": v_prod}


def _tower_of(field):
    if hasattr(field, "tower"):
        return field.tower
    return field.coeff_field.tower


# ---------------------------------------------------------------------------
# B+ and S membership
# ---------------------------------------------------------------------------


def bplus_membership(f, placeset):
    """Finite pole set of a finitely supported element; such elements are
    always members, with the poles listed as places of F_q(u)."""
    if not f.is_exact():
        raise ValidationError("membership test needs finite coefficient support")
    tower = _tower_of(f.field)
    lv1 = tower.level(1)
    poles = set()
    for v in f.coeffs.values():
        for z in v:
            if hasattr(z, "frob"):
                continue  # constants have no poles
            if not isinstance(z, RatFunc) or z.is_zero():
                continue
            if z.num.degree > z.den.degree:
                poles.add("inf")
            den = z.den
            if den.degree > 0:
                m = den.field.m
                norm = den
                cur = den
                for _ in range(m - 1):
                    cur = _frob_upoly(cur)
                    norm = norm * cur
                norm_1 = Poly(lv1, [tower.project(c, 1) for c in norm.coeffs])
                rng = random.Random("bplus-poles")
                for irr, _mult in factor(norm_1, rng):
                    poles.add(Place(tower, irr).label())
    return {"member": True, "poles": sorted(poles)}


def _frob_upoly(f):
    field = f.field
    q = field.tower.q
    coeffs = [field.zero()] * (f.degree * q + 1 if f.coeffs else 0)
    for i, c in enumerate(f.coeffs):
        if c:
            coeffs[i * q] = c ** q
    return Poly(field, coeffs)


def s_membership(s, N, base_sub_level, d_prime):
    """Is sigma(s)/s congruent to an element of F_p (x) K through t^N?

    K is the constant subfield F_{q^sub} (finite case) or F_{q^sub}(u); the
    test solves the Dedekind system for each coefficient tuple."""
    if s.order() != 0 or not s.invertible_leading():
        raise ValidationError("S membership needs an invertible element")
    quot = s.sigma() * s.inverse(N)
    tower = _tower_of(s.field)
    for i in range(0, int(N)):
        tup = quot.coeff(i)
        if not _tuple_in_fp_tensor_K(tower, tup, d_prime, base_sub_level, s.field):
            return False
    return True


def _tuple_in_fp_tensor_K(tower, tup, d, sub_level, field):
    """Solve z_i = sum_l sigma^i(b_l) c_l with c_l required to lie in K."""
    if d == 1:
        return _component_in_K(tower, tup[0], sub_level)
    big_m = field.m if hasattr(field, "m") else field.coeff_field.m
    lvd = tower.level(d)
    basis = []
    g = lvd.gen()
    acc = lvd.one()
    for _ in range(d):
        basis.append(tower.embed(acc, _lcm(d, big_m)) if big_m % d == 0 else None)
        acc = acc * g
    if any(b is None for b in basis):
        raise ValidationError("split form requires d | level")
    # Dedekind matrix [sigma^i(b_l)]
    M = _lcm(d, big_m)
    lvM = tower.level(M)
    rows = []
    for i in range(d):
        rows.append([b.frob(i) for b in basis])
    from .linalg import Mat, field_solve
    mat = Mat(lvM, rows)
    target = [_to_level(tower, z, M) for z in tup]
    if any(t is None for t in target):
        return False
    sol = field_solve(mat, target)
    if sol is None:
        return False
    return all(_component_in_K(tower, c, sub_level) for c in sol)


def _to_level(tower, z, M):
    if hasattr(z, "frob"):
        return tower.embed(z, M) if M % z.level.m == 0 else None
    return None


def _component_in_K(tower, c, sub_level):
    if hasattr(c, "frob"):
        try:
            tower.project(c, sub_level)
            return True
        except Exception:
            return False
    if isinstance(c, RatFunc):
        try:
            for x in list(c.num.coeffs) + list(c.den.coeffs):
                tower.project(x, sub_level)
            return True
        except Exception:
            return False
    return False
