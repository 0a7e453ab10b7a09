"""Generic exact matrices, Smith normal form over K[t], and K[t]-lattices.

Mat is parameterised by a *ring handle* (zero()/one()/from_int()); entries
are any elements with compatible arithmetic.  Field-entry matrices get
Gaussian elimination; polynomial matrices get Smith reduction with full
unimodular transform tracking.
"""

from .errors import NotTorsion, ValidationError
from .poly import FracField, Poly, PolyRing, RatFunc


class Mat:
    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        if self.rows:
            n = len(self.rows[0])
            if any(len(r) != n for r in self.rows):
                raise ValidationError("ragged matrix")

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero(), ring.one()
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, r, c):
        z = ring.zero()
        return cls(ring, [[z] * c for _ in range(r)])

    @classmethod
    def diag(cls, ring, entries):
        z = ring.zero()
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def entry_list(self):
        return [e for row in self.rows for e in row]

    def __add__(self, other):
        return Mat(self.ring, [[a + b for a, b in zip(ra, rb)]
                               for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Mat(self.ring, [[a - b for a, b in zip(ra, rb)]
                               for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return Mat(self.ring, [[-a for a in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValidationError("matrix dimension mismatch")
            cols = list(zip(*other.rows))
            out = []
            for row in self.rows:
                out_row = []
                for col in cols:
                    acc = self.ring.zero()
                    for a, b in zip(row, col):
                        acc = acc + a * b
                    out_row.append(acc)
                out.append(out_row)
            return Mat(self.ring, out)
        return self.scale(other)

    def scale(self, c):
        return Mat(self.ring, [[a * c for a in row] for row in self.rows])

    def apply(self, vec):
        """Matrix times column vector given as a list."""
        out = []
        for row in self.rows:
            acc = self.ring.zero()
            for a, b in zip(row, vec):
                acc = acc + a * b
            out.append(acc)
        return out

    def transpose(self):
        return Mat(self.ring, list(zip(*self.rows))) if self.rows else self

    def map(self, fn, ring=None):
        return Mat(ring or self.ring, [[fn(a) for a in row] for row in self.rows])

    def kron(self, other):
        """Kronecker product, blocks indexed row-major by self's entries."""
        out = []
        for ra in self.rows:
            for rb in other.rows:
                row = []
                for a in ra:
                    for b in rb:
                        row.append(a * b)
                out.append(row)
        return Mat(self.ring, out)

    def direct_sum(self, other):
        z = self.ring.zero()
        out = []
        for row in self.rows:
            out.append(list(row) + [z] * other.ncols)
        for row in other.rows:
            out.append([z] * self.ncols + list(row))
        return Mat(self.ring, out)

    def hstack(self, other):
        return Mat(self.ring, [list(a) + list(b) for a, b in zip(self.rows, other.rows)])

    def det(self):
        """Determinant by dynamic programming over column subsets (ring-safe)."""
        n = self.nrows
        if n != self.ncols:
            raise ValidationError("determinant of non-square matrix")
        if n == 0:
            return self.ring.one()
        # minors[mask] = det of rows 0..k-1, columns = bits of mask
        minors = {0: self.ring.one()}
        for i in range(n):
            new = {}
            for mask, val in minors.items():
                if not val and i > 0:
                    continue
                # extend with any unused column
                sign_toggle = 0
                for j in range(n):
                    bit = 1 << j
                    if mask & bit:
                        continue
                    # sign: parity of used columns above j
                    used_above = bin(mask >> (j + 1)).count("1")
                    term = val * self.rows[i][j]
                    if used_above % 2:
                        term = -term
                    nm = mask | bit
                    if nm in new:
                        new[nm] = new[nm] + term
                    else:
                        new[nm] = term
            minors = new
        return minors[(1 << n) - 1]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self):
        return f"Mat({[list(r) for r in self.rows]!r})"


def mat_to_frac(mat):
    """Lift a Poly matrix into the fraction field."""
    field = mat.ring.coeff_field
    frac = FracField(field)
    return mat.map(lambda e: RatFunc.from_poly(e) if isinstance(e, Poly) else e, frac)


def mat_frac_to_poly(mat, ring=None):
    """Inverse of mat_to_frac; raises if any entry has a denominator."""
    out_ring = ring or PolyRing(mat.ring.coeff_field)
    return mat.map(lambda e: e.as_poly(), out_ring)


def field_inverse(mat):
    """Gauss-Jordan inverse; entries must form a field (support /)."""
    n = mat.nrows
    if n != mat.ncols:
        raise ValidationError("inverse of non-square matrix")
    ring = mat.ring
    a = [list(row) for row in mat.rows]
    inv = [list(row) for row in Mat.identity(ring, n).rows]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        c = ring.one() / a[col][col]
        a[col] = [x * c for x in a[col]]
        inv[col] = [x * c for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return Mat(ring, inv)


def field_solve(mat, rhs):
    """Solve mat @ x = rhs over a field; returns list or None."""
    ring = mat.ring
    n, m = mat.nrows, mat.ncols
    a = [list(row) + [rhs[i]] for i, row in enumerate(mat.rows)]
    pivots = []
    r = 0
    for col in range(m):
        piv = None
        for i in range(r, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        c = ring.one() / a[r][col]
        a[r] = [x * c for x in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    for i in range(r, n):
        if a[i][m]:
            return None
    x = [ring.zero()] * m
    for i, col in enumerate(pivots):
        x[col] = a[i][m]
    return x


def field_kernel(mat):
    """Right-kernel basis over a field, as a list of column vectors."""
    ring = mat.ring
    n, m = mat.nrows, mat.ncols
    a = [list(row) for row in mat.rows]
    pivots = []
    r = 0
    for col in range(m):
        piv = None
        for i in range(r, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        c = ring.one() / a[r][col]
        a[r] = [x * c for x in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [ring.zero()] * m
        v[f] = ring.one()
        for i, c in enumerate(pivots):
            v[c] = -a[i][f]
        basis.append(v)
    return basis


def field_rank(mat):
    n, m = mat.nrows, mat.ncols
    return m - len(field_kernel(mat)) if m else 0


# ---------------------------------------------------------------------------
# Smith normal form over K[t]
# ---------------------------------------------------------------------------


def smith_form(mat):
    """U @ mat @ V = D with U, V unimodular over K[t] and D diagonal with a
    monic divisibility chain d_1 | d_2 | ...

    Entries must be Poly over a common field; returns (U, D, V).
    """
    ring = mat.ring
    if not isinstance(ring, PolyRing):
        raise ValidationError("smith_form expects a Poly matrix")
    field = ring.coeff_field
    n, m = mat.nrows, mat.ncols
    a = [list(row) for row in mat.rows]
    U = [list(r) for r in Mat.identity(ring, n).rows]
    V = [list(r) for r in Mat.identity(ring, m).rows]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(m):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    def diagonalize(start):
        k = start
        while k < min(n, m):
            pos = None
            best = None
            for i in range(k, n):
                for j in range(k, m):
                    if a[i][j]:
                        d = a[i][j].degree
                        if best is None or d < best:
                            best = d
                            pos = (i, j)
            if pos is None:
                break
            row_swap(k, pos[0])
            col_swap(k, pos[1])
            while True:
                dirty = False
                for i in range(k + 1, n):
                    if a[i][k]:
                        q = a[i][k] // a[k][k]
                        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                        U[i] = [x - q * y for x, y in zip(U[i], U[k])]
                        if a[i][k]:
                            row_swap(k, i)  # smaller remainder becomes pivot
                            dirty = True
                for j in range(k + 1, m):
                    if a[k][j]:
                        q = a[k][j] // a[k][k]
                        for r in range(n):
                            a[r][j] = a[r][j] - q * a[r][k]
                        for r in range(m):
                            V[r][j] = V[r][j] - q * V[r][k]
                        if a[k][j]:
                            col_swap(k, j)
                            dirty = True
                if not dirty:
                    break
            k += 1

    diagonalize(0)
    size = min(n, m)
    changed = True
    while changed:
        changed = False
        for i in range(size - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if not di and dj:
                row_swap(i, i + 1)
                col_swap(i, i + 1)
                changed = True
            elif di and dj and (dj % di):
                # col i += col i+1 exposes d_{i+1} below the pivot, then the
                # gcd surfaces by re-elimination from position i
                for r in range(n):
                    a[r][i] = a[r][i] + a[r][i + 1]
                for r in range(m):
                    V[r][i] = V[r][i] + V[r][i + 1]
                diagonalize(i)
                changed = True
    # make the diagonal monic by scaling rows of U
    one = field.one()
    for i in range(size):
        if a[i][i] and a[i][i].leading() != one:
            c = Poly.const(field, one / a[i][i].leading())
            a[i][i] = a[i][i] * c
            U[i] = [x * c for x in U[i]]
    return Mat(ring, U), Mat(ring, a), Mat(ring, V)


def elementary_divisors(mat):
    """Nonzero-checked elementary divisor list (monic), free parts flagged as None."""
    _, d, _ = smith_form(mat)
    out = []
    for i in range(min(d.nrows, d.ncols)):
        e = d[i, i]
        out.append(e if e else None)
    return out


def char_ideal(divisors):
    """Monic generator of the characteristic ideal: product of the divisors."""
    out = None
    for d in divisors:
        if d is None or (isinstance(d, Poly) and d.is_zero()):
            raise NotTorsion("module has a free part; characteristic ideal undefined")
        out = d if out is None else out * d
    if out is None:
        raise ValidationError("empty divisor list; pass the unit ideal explicitly")
    return out.monic()


# ---------------------------------------------------------------------------
# K[t]-lattices (full-rank submodules of K[t]^n) given by generator columns
# ---------------------------------------------------------------------------


def lattice_basis(gen_mat):
    """Square basis matrix of the column span of gen_mat (must have full row rank)."""
    n = gen_mat.nrows
    U, D, _ = smith_form(gen_mat)
    for i in range(n):
        if i >= min(D.nrows, D.ncols) or not D[i, i]:
            raise ValidationError("generators do not span a full-rank lattice")
    Uinv = mat_frac_to_poly(field_inverse(mat_to_frac(U)), gen_mat.ring)
    d_part = Mat.diag(gen_mat.ring, [D[i, i] for i in range(n)])
    return Uinv * d_part


def lattice_membership(basis, vec):
    """Solve basis @ x = vec over K[t]; returns the Poly coordinates or None."""
    fb = mat_to_frac(basis)
    fvec = [RatFunc.from_poly(v) for v in vec]
    sol = field_solve(fb, fvec)
    if sol is None:
        return None
    if any(not s.is_poly() for s in sol):
        return None
    return [s.as_poly() for s in sol]


def lattice_contains(basis, vec):
    return lattice_membership(basis, vec) is not None


def lattice_equal(basis_a, basis_b):
    for j in range(basis_b.ncols):
        if not lattice_contains(basis_a, [basis_b[i, j] for i in range(basis_b.nrows)]):
            return False
    for j in range(basis_a.ncols):
        if not lattice_contains(basis_b, [basis_a[i, j] for i in range(basis_a.nrows)]):
            return False
    return True


# ---------------------------------------------------------------------------
# Compound (exterior power) matrices
# ---------------------------------------------------------------------------


def _subsets(n, d):
    out = []

    def rec(start, cur):
        if len(cur) == d:
            out.append(tuple(cur))
            return
        for i in range(start, n):
            cur.append(i)
            rec(i + 1, cur)
            cur.pop()

    rec(0, [])
    return out


def compound_matrix(mat, d):
    """d-th compound: entries are d x d minors, index sets in lexicographic order."""
    n = mat.nrows
    if mat.ncols != n:
        raise ValidationError("compound of non-square matrix")
    subs = _subsets(n, d)
    out = []
    for rows_idx in subs:
        row = []
        for cols_idx in subs:
            sub = Mat(mat.ring, [[mat[i, j] for j in cols_idx] for i in rows_idx])
            row.append(sub.det())
        out.append(row)
    return Mat(mat.ring, out)


def sylvester_resultant(f, g, ring):
    """Resultant of two polynomials with coefficients in an arbitrary
    commutative ring, via the Sylvester determinant."""
    n, m = f.degree, g.degree
    if n < 0 or m < 0:
        return ring.zero()
    if n == 0:
        return f.coeff(0) ** m
    if m == 0:
        return g.coeff(0) ** n
    size = n + m
    z = ring.zero()
    rows = []
    for i in range(m):
        row = [z] * size
        for j in range(n + 1):
            row[i + j] = f.coeff(n - j)
        rows.append(row)
    for i in range(n):
        row = [z] * size
        for j in range(m + 1):
            row[i + j] = g.coeff(m - j)
        rows.append(row)
    return Mat(ring, rows).det()
