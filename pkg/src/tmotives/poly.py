"""Dense univariate polynomials and rational functions over an exact field.

A *field handle* is any object with ``zero()``, ``one()``, ``from_int(n)``
and characteristic ``p``; its elements must support +, -, *, /, ==, and
``bool`` (nonzero test).  Tower levels, prime fields and fraction fields
all satisfy this, so Poly/RatFunc nest freely (e.g. polynomials in t over
rational functions in u over a finite field).

Coefficients are stored dense and degree-ascending with no trailing zeros.
"""


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        while coeffs and not coeffs[-1]:
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.one(),))

    @classmethod
    def x(cls, field):
        return cls(field, (field.zero(), field.one()))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, tuple(field.from_int(i) for i in ints))

    # -- basic queries -------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def is_const(self):
        return len(self.coeffs) <= 1

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly) and other.field == self.field:
            return other
        if isinstance(other, int):
            return Poly(self.field, (self.field.from_int(other),))
        # anything else (including values of the coefficient field that are
        # themselves Poly/RatFunc one level down) is a scalar constant
        return Poly(self.field, (other,))

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.field)
        zero = self.field.zero()
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = out[i + j] + ai * bj
        return Poly(self.field, out)

    __rmul__ = __mul__

    def scale(self, c):
        return Poly(self.field, tuple(c * a for a in self.coeffs))

    def shift(self, k):
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Poly(self.field, (self.field.zero(),) * k + self.coeffs)

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly.zero(self.field), self
        inv_lead = self.field.one() / other.leading()
        quo = [self.field.zero()] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lead
            if c:
                quo[k] = c
                for j, bj in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * bj
        return Poly(self.field, quo), Poly(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def powmod(self, n, modulus):
        result = Poly.one(self.field)
        base = self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            n >>= 1
        return result

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.one() / self.leading())

    def derivative(self):
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            s = self.field.zero()
            for _ in range(i % self.field.p):
                s = s + c
            out.append(s)
        return Poly(self.field, out)

    def evaluate(self, point):
        """Horner evaluation; point may live in any ring containing the field."""
        if not self.coeffs:
            return point * 0 if not isinstance(point, int) else self.field.zero()
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * point + c
        return acc

    def map_coeffs(self, fn, field=None):
        return Poly(field or self.field, tuple(fn(c) for c in self.coeffs))

    # -- comparisons / hashing ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


def poly_gcd(a, b):
    """Monic gcd.  Over fraction-field coefficients the naive remainder
    sequence swells, so a primitive pseudo-remainder sequence is used."""
    if isinstance(a.field, FracField):
        return _primitive_gcd(a, b)
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def _clear_denominators(f):
    """Poly over FracField -> list of inner Polys (a common-denominator lift)."""
    inner_field = f.field.coeff_field
    den = Poly.one(inner_field)
    for c in f.coeffs:
        g = poly_gcd(den, c.den)
        den = (den * c.den) // g if not g.is_zero() else den * c.den
    return [c.num * (den // c.den) for c in f.coeffs]


def _inner_content(coeffs):
    g = None
    for c in coeffs:
        if c.is_zero():
            continue
        g = c.monic() if g is None else poly_gcd(g, c)
        if g.degree == 0:
            return g
    return g


def _primitive_part(coeffs):
    g = _inner_content(coeffs)
    if g is None:
        return []
    if g.degree == 0:
        lead = next(c for c in reversed(coeffs) if not c.is_zero()).leading()
        inv = coeffs[0].field.one() / lead
        return [c.scale(inv) for c in coeffs]
    out = [c // g for c in coeffs]
    lead = next(c for c in reversed(out) if not c.is_zero()).leading()
    inv = out[0].field.one() / lead
    return [c.scale(inv) for c in out]


def _pseudo_rem(A, B):
    """Pseudo-remainder of inner-Poly coefficient lists (degrees in X)."""
    R = list(A)
    while R and R[-1].is_zero():
        R.pop()
    dB = len(B) - 1
    lcB = B[-1]
    while len(R) - 1 >= dB and R:
        s = R[-1]
        R = [lcB * r for r in R]
        shift = len(R) - 1 - dB
        for i, b in enumerate(B):
            R[shift + i] = R[shift + i] - s * b
        while R and R[-1].is_zero():
            R.pop()
    return R


def _primitive_gcd(a, b):
    field = a.field
    if a.is_zero():
        return b.monic() if b else b
    if b.is_zero():
        return a.monic()
    A = _primitive_part(_clear_denominators(a))
    B = _primitive_part(_clear_denominators(b))
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = _primitive_part(_pseudo_rem(A, B))
        A, B = B, R
    inner_field = field.coeff_field
    coeffs = [RatFunc.from_poly(c) if not isinstance(c, RatFunc) else c for c in A]
    return Poly(field, coeffs).monic()


def poly_xgcd(a, b):
    """(g, s, t) with s*a + t*b = g, g monic (or zero)."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(f), Poly.zero(f)
    t0, t1 = Poly.zero(f), Poly.one(f)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = f.one() / r0.leading()
    return r0.scale(c), s0.scale(c), t0.scale(c)


def poly_lcm(a, b):
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field)
    g = poly_gcd(a, b)
    return ((a * b) // g).monic()


# ---------------------------------------------------------------------------
# Factorisation over finite fields (Cantor-Zassenhaus).  The field handle
# must additionally provide size().
# ---------------------------------------------------------------------------


def is_squarefree(f):
    return poly_gcd(f, f.derivative()).degree <= 0


def _random_poly(field, degree, rng):
    coeffs = [field.random(rng) for _ in range(degree)]
    coeffs.append(field.one())
    return Poly(field, coeffs)


def is_irreducible(f, rng=None):
    """Rabin's test.  f must have coefficients in a finite field."""
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    field = f.field
    qsize = field.size()
    x = Poly.x(field)
    # x^(q^n) == x mod f
    h = x.powmod(qsize**n, f)
    if h != x % f:
        return False
    prime_divs = sorted({d for d in _prime_factors(n)})
    for ell in prime_divs:
        h = x.powmod(qsize ** (n // ell), f)
        if poly_gcd(f, h - x).degree != 0:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def random_irreducible(field, degree, rng):
    if degree == 1:
        return Poly(field, (field.random(rng), field.one()))
    while True:
        f = _random_poly(field, degree, rng)
        if is_irreducible(f):
            return f


def squarefree_decomposition(f):
    """[(g_i, i)] with f = lc * prod g_i^i, g_i squarefree monic, char-p aware."""
    field = f.field
    p = field.p
    out = []
    f = f.monic()

    def _sqf(f, mult):
        if f.degree <= 0:
            return
        df = f.derivative()
        if df.is_zero():
            # f is a p-th power: f(x) = g(x^p) with coefficient p-th roots
            g = _pth_root_poly(f)
            _sqf(g, mult * p)
            return
        c = poly_gcd(f, df)
        w = f // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            z = w // y
            if z.degree > 0:
                out.append((z.monic(), mult * i))
            w = y
            c = c // y
            i += 1
        if c.degree > 0:
            _sqf(c, mult * p)

    _sqf(f, 1)
    return out


def _pth_root_poly(f):
    field = f.field
    p = field.p
    size = field.size()
    # coefficient c -> c^(size/p) is the inverse of c -> c^p
    e = size // p
    coeffs = []
    for i in range(0, f.degree + 1, p):
        coeffs.append(f.coeff(i) ** e)
    return Poly(field, coeffs)


def _distinct_degree(f):
    """[(product of irreducibles of degree d, d)] for squarefree monic f."""
    field = f.field
    qsize = field.size()
    out = []
    x = Poly.x(field)
    h = x
    d = 0
    rest = f
    while rest.degree > 2 * (d + 1) - 1 and rest.degree > 0:
        d += 1
        h = h.powmod(qsize, rest)
        g = poly_gcd(rest, h - x % rest)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _equal_degree_split(f, d, rng):
    """Split monic squarefree f = product of irreducibles all of degree d."""
    field = f.field
    if f.degree == d:
        return [f]
    qsize = field.size()
    one = Poly.one(field)
    while True:
        r = _random_poly(field, rng.randrange(1, f.degree), rng)
        g = poly_gcd(f, r)
        if 0 < g.degree < f.degree:
            break
        if field.p == 2:
            # trace map splitting
            h = r % f
            acc = h
            t = h
            for _ in range(d * _log2_size(field) - 1):
                t = (t * t) % f
                acc = (acc + t) % f
            g = poly_gcd(f, acc)
        else:
            h = r.powmod((qsize**d - 1) // 2, f)
            g = poly_gcd(f, h - one)
        if 0 < g.degree < f.degree:
            break
    return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


def _log2_size(field):
    n = field.size()
    e = 0
    while n > 1:
        n //= 2
        e += 1
    return e


def factor(f, rng):
    """Full factorisation over a finite field: [(irreducible monic, multiplicity)]."""
    out = []
    for g, mult in squarefree_decomposition(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree_split(h, d, rng):
                out.append((irr.monic(), mult))
    out.sort(key=lambda t: (t[0].degree, tuple(repr(c) for c in t[0].coeffs)))
    return out


def roots(f, rng):
    """Roots of f in its (finite) coefficient field, without multiplicity."""
    field = f.field
    x = Poly.x(field)
    xq = x.powmod(field.size(), f)
    g = poly_gcd(f, xq - x)
    out = []
    for irr, _ in factor(g, rng) if g.degree > 0 else []:
        if irr.degree == 1:
            out.append(-irr.coeff(0))
    return out


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced fraction of polynomials; denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if den is None:
            den = Poly.one(num.field)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
            lc = den.leading()
            if lc != num.field.one():
                inv = num.field.one() / lc
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def from_poly(cls, p):
        return cls(p, Poly.one(p.field), reduce=False)

    @classmethod
    def const(cls, field, c):
        return cls(Poly.const(field, c), Poly.one(field), reduce=False)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_poly(self):
        return self.den.degree == 0

    def as_poly(self):
        if not self.is_poly():
            raise ValueError("not a polynomial")
        return self.num

    def _coerce(self, other):
        if isinstance(other, RatFunc) and other.num.field == self.num.field:
            return other
        if isinstance(other, Poly) and other.field == self.num.field:
            return RatFunc.from_poly(other)
        if isinstance(other, int):
            return RatFunc.from_poly(Poly.const(self.field, self.field.from_int(other)))
        # a value of the coefficient field (possibly itself a fraction one
        # level down) acts as a scalar constant
        return RatFunc.from_poly(Poly.const(self.field, other))

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFunc", self.coeffs_key()))

    def coeffs_key(self):
        return (self.num.coeffs, self.den.coeffs)

    def __repr__(self):
        return f"RatFunc({self.num!r}/{self.den!r})"


class PolyRing:
    """Ring handle for Poly matrices (zero/one/from_int in polynomial form)."""

    def __init__(self, coeff_field):
        self.coeff_field = coeff_field
        self.p = coeff_field.p

    def zero(self):
        return Poly.zero(self.coeff_field)

    def one(self):
        return Poly.one(self.coeff_field)

    def from_int(self, n):
        return Poly.const(self.coeff_field, self.coeff_field.from_int(n))

    def x(self):
        return Poly.x(self.coeff_field)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.coeff_field == other.coeff_field

    def __hash__(self):
        return hash(("PolyRing", id(self.coeff_field)))


class QuotElem:
    """Element of coeff_field[x]/(modulus), stored as the reduced representative."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring, rep):
        self.ring = ring
        self.rep = rep % ring.modulus

    def _coerce(self, other):
        if isinstance(other, QuotElem):
            return other
        if isinstance(other, Poly):
            return QuotElem(self.ring, other)
        if isinstance(other, int):
            return QuotElem(self.ring, self.ring._poly_ring.from_int(other))
        return QuotElem(self.ring, Poly.const(self.ring.coeff_field, other))

    def __add__(self, other):
        other = self._coerce(other)
        return QuotElem(self.ring, self.rep + other.rep)

    __radd__ = __add__

    def __neg__(self):
        return QuotElem(self.ring, -self.rep)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return QuotElem(self.ring, (self.rep * other.rep) % self.ring.modulus)

    __rmul__ = __mul__

    def inv(self):
        g, s, _ = poly_xgcd(self.rep, self.ring.modulus)
        if g.degree != 0:
            raise ZeroDivisionError("element not invertible in quotient ring")
        return QuotElem(self.ring, s.scale(self.ring.coeff_field.one() / g.coeff(0)))

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        return QuotElem(self.ring, self.rep.powmod(n, self.ring.modulus))

    def __bool__(self):
        return bool(self.rep)

    def is_zero(self):
        return self.rep.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = self._coerce(other)
        if not isinstance(other, QuotElem):
            return NotImplemented
        return self.ring == other.ring and self.rep == other.rep

    def __hash__(self):
        return hash(("QuotElem", self.rep.coeffs))

    def __repr__(self):
        return f"Quot({self.rep!r})"


class QuotRing:
    """coeff_field[x]/(modulus) as a ring handle."""

    def __init__(self, modulus):
        if not modulus.is_monic():
            modulus = modulus.monic()
        self.modulus = modulus
        self.coeff_field = modulus.field
        self._poly_ring = PolyRing(self.coeff_field)
        self.p = self.coeff_field.p

    def zero(self):
        return QuotElem(self, Poly.zero(self.coeff_field))

    def one(self):
        return QuotElem(self, Poly.one(self.coeff_field))

    def from_int(self, n):
        return QuotElem(self, self._poly_ring.from_int(n))

    def from_poly(self, f):
        return QuotElem(self, f)

    def x(self):
        return QuotElem(self, Poly.x(self.coeff_field))

    def size(self):
        return self.coeff_field.size() ** self.modulus.degree

    def random(self, rng):
        coeffs = [self.coeff_field.random(rng) for _ in range(max(self.modulus.degree, 1))]
        return QuotElem(self, Poly(self.coeff_field, coeffs))

    def __eq__(self, other):
        return isinstance(other, QuotRing) and self.modulus == other.modulus \
            and self.coeff_field == other.coeff_field

    def __hash__(self):
        return hash(("QuotRing", self.modulus.coeffs))

    def __repr__(self):
        return f"QuotRing({self.modulus!r})"


class FracField:
    """Field handle for RatFunc over a given polynomial coefficient field."""

    def __init__(self, coeff_field):
        self.coeff_field = coeff_field
        self.p = coeff_field.p

    def zero(self):
        return RatFunc.from_poly(Poly.zero(self.coeff_field))

    def one(self):
        return RatFunc.from_poly(Poly.one(self.coeff_field))

    def from_int(self, n):
        return RatFunc.from_poly(Poly.const(self.coeff_field, self.coeff_field.from_int(n)))

    def gen(self):
        return RatFunc.from_poly(Poly.x(self.coeff_field))

    def random(self, rng, max_degree=2):
        num = Poly(self.coeff_field, [self.coeff_field.random(rng) for _ in range(max_degree + 1)])
        while True:
            den = Poly(self.coeff_field, [self.coeff_field.random(rng) for _ in range(max_degree + 1)])
            if not den.is_zero():
                return RatFunc(num, den)

    def __eq__(self, other):
        return isinstance(other, FracField) and self.coeff_field == other.coeff_field

    def __hash__(self):
        return hash(("FracField", id(self.coeff_field)))

    def __repr__(self):
        return f"FracField({self.coeff_field!r})"
