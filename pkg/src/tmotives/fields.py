"""Finite field towers F_q^m with compatible embeddings.

Levels are indexed by m >= 1, with level m the field F_{q^m} represented as
F_p[x]/(f_m) for an explicitly stored irreducible f_m.  Compatibility of the
embedding maps is guaranteed structurally: the tower maintains a growing
"universe" level U (of index lcm of all created levels) and stores, per
level, the image of its generator in U.  Every embedding is the composite
"into U, back out of U", so embed(a->c) == embed(b->c) o embed(a->b) holds
exactly for all chains a | b | c.

On universe growth each stored generator image is pushed through one fixed
embedding of the old universe into the new one, which preserves all
previously computed data.  Caches are guarded by a lock; elements themselves
are immutable.
"""

import random
import threading

import numpy as np

from .errors import ValidationError
from .fplinalg import kernel_basis, solve
from .poly import Poly, poly_gcd


# -- raw F_p[x] helpers (lists of ints, ascending), used to bootstrap levels --


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_mod(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        if c:
            off = len(a) - len(m)
            for j, mj in enumerate(m):
                a[off + j] = (a[off + j] - c * mj) % p
        a.pop()
    return _fp_trim(a)

def _fp_powmod(a, n, m, p):
    result = [1]
    a = _fp_mod(list(a), m, p)
    while n:
        if n & 1:
            result = _fp_mod(_fp_mul(result, a, p), m, p)
        a = _fp_mod(_fp_mul(a, a, p), m, p)
        n >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a = _fp_mod(a, b, p)
        a, b = b, a
    return a


def _fp_sub_x(h, p):
    """h(x) - x as a trimmed list."""
    diff = list(h) + [0] * max(0, 2 - len(h))
    diff[1] = (diff[1] - 1) % p
    return _fp_trim(diff)


def _fp_is_irreducible(f, p):
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _fp_sub_x(_fp_powmod(x, p**n, f, p), p):
        return False
    k = n
    primes = set()
    d = 2
    while d * d <= k:
        while k % d == 0:
            primes.add(d)
            k //= d
        d += 1
    if k > 1:
        primes.add(k)
    for ell in primes:
        g = _fp_gcd(f, _fp_sub_x(_fp_powmod(x, p ** (n // ell), f, p), p), p)
        if len(g) - 1 != 0:
            return False
    return True


def _fp_random_irreducible(degree, p, rng):
    if degree == 1:
        return [rng.randrange(p), 1]
    while True:
        f = [rng.randrange(p) for _ in range(degree)] + [1]
        if _fp_is_irreducible(f, p):
            return f


def _factor_prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            n = q
            while n % p == 0:
                n //= p
                k += 1
            if n != 1:
                raise ValidationError(f"q = {q} is not a prime power")
            return p, k
    raise ValidationError(f"q = {q} is not a prime power")


class FFElem:
    """Element of a tower level: coefficient tuple over F_p in the level's
    power basis."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level, coeffs):
        self.level = level
        self.coeffs = coeffs  # tuple of ints, length == level.pdim()

    def _check(self, other):
        if other.level is not self.level:
            raise ValidationError("elements belong to different tower levels; embed first")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.level.from_int(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        self._check(other)
        p = self.level.p
        return FFElem(self.level, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.level.p
        return FFElem(self.level, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.level.from_int(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        self._check(other)
        p = self.level.p
        return FFElem(self.level, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.level.from_int(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        lv = self.level
        if other.level is not lv:
            raise ValidationError("elements belong to different tower levels; embed first")
        a, b = self.coeffs, other.coeffs
        p = lv.p
        d = len(a)
        # schoolbook convolution, then fold overflow via precomputed rows
        out = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        red = lv._reduction_rows
        res = out[:d]
        for k in range(d, 2 * d - 1):
            c = out[k]
            if c:
                row = red[k - d]
                for i in range(d):
                    res[i] += c * row[i]
        return FFElem(lv, tuple(v % p for v in res))

    __rmul__ = __mul__

    def inv(self):
        lv = self.level
        if not any(self.coeffs):
            raise ZeroDivisionError("inverse of zero field element")
        return self ** (lv.size() - 2)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.level.from_int(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        if isinstance(other, int):
            other = self.level.from_int(other)
        return other * self.inv()

    def __pow__(self, n):
        lv = self.level
        if n == 0:
            return lv.one()
        if not any(self.coeffs):
            if n < 0:
                raise ZeroDivisionError("inverse of zero field element")
            return lv.zero()
        n %= lv.size() - 1
        red = _fp_powmod(list(self.coeffs), n, lv.modulus, lv.p)
        return lv._from_list(red)

    def frob(self, e=1):
        """Base-q Frobenius iterate: x^(q^e), staying at the same level."""
        return self ** (self.level.tower.q**e)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.level.from_int(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.level is other.level and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.level), self.coeffs))

    def __repr__(self):
        return f"FF{self.level.m}({list(self.coeffs)})"


class TowerLevel:
    """The field F_{q^m}, a field handle for Poly/RatFunc."""

    def __init__(self, tower, m, modulus):
        self.tower = tower
        self.m = m
        self.modulus = modulus  # F_p[x] list, monic, degree == pdim
        self.p = tower.p
        self._frob_cache = {}
        # x^(d+k) reduced mod the modulus, for k = 0..d-2 (multiplication fold)
        d = len(modulus) - 1
        rows = []
        cur = [(-c) % tower.p for c in modulus[:d]]
        rows.append(tuple(cur))
        for _ in range(d - 2):
            cur = [0] + cur
            c = cur[d]
            if c:
                cur = [(cur[i] + c * rows[0][i]) % tower.p for i in range(d)]
            else:
                cur = cur[:d]
            rows.append(tuple(cur))
        self._reduction_rows = rows

    def pdim(self):
        return self.tower.qexp * self.m

    def size(self):
        return self.p ** self.pdim()

    def _from_list(self, lst):
        d = self.pdim()
        return FFElem(self, tuple(lst[i] if i < len(lst) else 0 for i in range(d)))

    def zero(self):
        return FFElem(self, (0,) * self.pdim())

    def one(self):
        return self._from_list([1])

    def from_int(self, n):
        return self._from_list([n % self.p])

    def gen(self):
        return self._from_list([0, 1])

    def from_coeffs(self, coeffs):
        if len(coeffs) > self.pdim():
            raise ValidationError("coefficient vector longer than level degree")
        return self._from_list([c % self.p for c in coeffs])

    def random(self, rng):
        return FFElem(self, tuple(rng.randrange(self.p) for _ in range(self.pdim())))

    def elements(self):
        """Iterate over all elements (use only at small levels)."""
        d = self.pdim()
        idx = [0] * d
        total = self.size()
        for _ in range(total):
            yield FFElem(self, tuple(idx))
            for i in range(d):
                idx[i] += 1
                if idx[i] < self.p:
                    break
                idx[i] = 0

    def to_fp(self, x):
        return list(x.coeffs)

    def from_fp(self, vec):
        return FFElem(self, tuple(int(v) % self.p for v in vec))

    def frob_matrix(self, e):
        """Matrix of x -> x^(q^e) as an F_p-linear map, columns = basis images."""
        e = e % self.m if self.m > 0 else e
        key = e
        with self.tower._lock:
            if key in self._frob_cache:
                return self._frob_cache[key]
        h = self.gen() ** (self.tower.q**e)
        cols = []
        acc = self.one()
        for _ in range(self.pdim()):
            cols.append(list(acc.coeffs))
            acc = acc * h
        mat = np.array(cols, dtype=np.int64).T
        with self.tower._lock:
            self._frob_cache[key] = mat
        return mat

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"TowerLevel(q={self.tower.q}, m={self.m})"


class FieldTower:
    """Family of fields F_{q^m} with compatible embedding maps."""

    def __init__(self, q, seed=0):
        self.p, self.qexp = _factor_prime_power(q)
        self.q = q
        self._rng = random.Random(("tower", q, seed).__repr__())
        self._lock = threading.RLock()
        self._levels = {}
        self._psi = {}  # level index -> FFElem at universe level
        self._embed_cache = {}
        self._universe = None
        self.level(1)

    # -- level management ----------------------------------------------

    def level(self, m):
        if m < 1:
            raise ValidationError("tower level index must be >= 1")
        with self._lock:
            if m in self._levels:
                return self._levels[m]
            return self._create_level(m)

    def _create_level(self, m):
        if self._universe is None:
            # bootstrap: first level doubles as universe
            modulus = _fp_random_irreducible(self.qexp * m, self.p, self._rng)
            lv = TowerLevel(self, m, modulus)
            self._levels[m] = lv
            self._universe = lv
            self._psi[m] = lv.gen()
            return lv
        big = self._universe.m
        lcm = big * m // _gcd(big, m)
        if lcm != big:
            self._grow_universe(lcm)
        if m in self._levels:
            return self._levels[m]
        return self._subfield_level(m)

    def _grow_universe(self, new_index):
        old = self._universe
        modulus = _fp_random_irreducible(self.qexp * new_index, self.p, self._rng)
        new = TowerLevel(self, new_index, modulus)
        # one fixed embedding old universe -> new universe: a root of the old
        # defining polynomial; pushing every stored generator image through it
        # preserves all previously computed embeddings.
        fpoly = Poly(new, tuple(new.from_int(c) for c in old.modulus))
        iota = _one_root(fpoly, self._rng)
        for idx, psi in list(self._psi.items()):
            self._psi[idx] = _eval_fp_coeffs(psi.coeffs, iota)
        self._levels[new_index] = new
        self._psi[new_index] = new.gen()
        self._universe = new

    def _subfield_level(self, m):
        uni = self._universe
        d = self.qexp * m
        # subfield of the universe fixed by x -> x^(q^m)
        frob = uni.frob_matrix(m % uni.m)
        eye = np.eye(uni.pdim(), dtype=np.int64)
        basis = kernel_basis((frob - eye) % self.p, self.p)
        if len(basis) != d:
            raise ValidationError("universe does not contain the requested subfield")
        while True:
            coeffs = [self._rng.randrange(self.p) for _ in range(d)]
            z = uni.zero()
            for c, b in zip(coeffs, basis):
                if c:
                    z = z + uni.from_fp(b * c)
            minpoly = _minpoly_over_fp(z)
            if len(minpoly) - 1 == d:
                break
        lv = TowerLevel(self, m, minpoly)
        self._levels[m] = lv
        self._psi[m] = z
        return lv

    # -- embeddings ------------------------------------------------------

    def embed_matrix(self, a, b):
        """F_p-matrix of the embedding level a -> level b (a | b)."""
        if b % a != 0:
            raise ValidationError(f"no embedding F_q^{a} -> F_q^{b}: {a} does not divide {b}")
        with self._lock:
            key = (a, b)
            if key in self._embed_cache:
                return self._embed_cache[key]
            la, lb = self.level(a), self.level(b)
            uni = self._universe
            psi_a, psi_b = self._psi[a], self._psi[b]
            # basis of image of level b inside the universe
            cols_b = []
            acc = uni.one()
            for _ in range(lb.pdim()):
                cols_b.append(list(acc.coeffs))
                acc = acc * psi_b
            mat_b = np.array(cols_b, dtype=np.int64).T
            cols = []
            acc = uni.one()
            for _ in range(la.pdim()):
                sol = solve(mat_b, list(acc.coeffs), self.p)
                if sol is None:
                    raise ValidationError("embedding solve failed; tower state corrupt")
                cols.append(sol)
                acc = acc * psi_a
            emb = np.array(cols, dtype=np.int64).T
            self._embed_cache[key] = emb
            return emb

    def embed(self, x, b):
        """Embed x (at some level a with a | b) into level b."""
        a = x.level.m
        if a == b:
            return x
        emb = self.embed_matrix(a, b)
        vec = (emb @ np.array(x.coeffs, dtype=np.int64)) % self.p
        return self.level(b).from_fp(vec)

    def project(self, x, a):
        """Inverse of embed for elements that lie in the smaller level."""
        b = x.level.m
        if a == b:
            return x
        emb = self.embed_matrix(a, b)
        sol = solve(emb, list(x.coeffs), self.p)
        if sol is None:
            raise ValidationError(f"element does not lie in level {a}")
        return self.level(a).from_fp(sol)

    def min_level(self, x):
        """Smallest divisor level containing x."""
        m = x.level.m
        for d in sorted(_divisors(m)):
            if x.frob(d) == x:
                return d
        return m


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    out = []
    for d in range(1, n + 1):
        if n % d == 0:
            out.append(d)
    return out


def _eval_fp_coeffs(coeffs, point):
    """Evaluate an F_p coefficient vector at a field element."""
    lv = point.level
    acc = lv.zero()
    for c in reversed(coeffs):
        acc = acc * point + lv.from_int(c)
    return acc


def _minpoly_over_fp(z):
    """Minimal polynomial of z over F_p, as an F_p list."""
    lv = z.level
    p = lv.p
    rows = []
    acc = lv.one()
    for _ in range(lv.pdim() + 1):
        rows.append(list(acc.coeffs))
        mat = np.array(rows, dtype=np.int64).T
        ker = kernel_basis(mat, p)
        if ker:
            rel = [int(c) % p for c in ker[0]]
            while rel and rel[-1] == 0:
                rel.pop()
            inv = pow(rel[-1], p - 2, p)
            return [c * inv % p for c in rel]
        acc = acc * z
    raise ValidationError("minpoly search failed")


def _one_root(f, rng):
    """One root of a monic polynomial that splits completely over f.field."""
    field = f.field
    x = Poly.x(field)
    # keep only the part that splits in this field
    xq = x.powmod(field.size(), f)
    f = poly_gcd(f, xq - x)
    if f.degree < 1:
        raise ValidationError("polynomial has no root in the requested level")
    while f.degree > 1:
        shift = field.random(rng)
        r = x + Poly.const(field, shift)
        if field.p == 2:
            h = r % f
            acc = h
            t = h
            n = 1
            while 2**n < field.size():
                t = (t * t) % f
                acc = (acc + t) % f
                n += 1
            g = poly_gcd(f, acc)
        else:
            h = r.powmod((field.size() - 1) // 2, f)
            g = poly_gcd(f, h - Poly.one(field))
        if 0 < g.degree < f.degree:
            f = g if g.degree <= f.degree - g.degree else f // g
    return -f.coeff(0)
